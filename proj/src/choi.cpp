#include "qfb/quantum.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace qfb {

const char *to_string(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::InvalidDimension: return "invalid dimension";
  case ErrorCode::InvariantViolation: return "invariant violation";
  case ErrorCode::ContractViolation: return "contract violation";
  case ErrorCode::DegenerateChannel: return "degenerate channel";
  case ErrorCode::DimensionMismatch: return "dimension mismatch";
  case ErrorCode::InvalidArgument: return "invalid argument";
  case ErrorCode::InsufficientData: return "insufficient data";
  case ErrorCode::MissingData: return "missing data";
  case ErrorCode::NotEigenbasis: return "not an eigenbasis";
  case ErrorCode::Schema: return "schema violation";
  }
  return "error";
}

// ---------------------------------------------------------------------------

PureState::PureState(CVec amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() == 0)
    throw Error(ErrorCode::InvalidDimension, "empty state vector");
  if (std::abs(amps_.norm() - 1.0) > kCheckTol)
    throw Error(ErrorCode::InvariantViolation, "state vector is not normalized");
}

PureState PureState::normalized(const CVec &v) {
  const double n = v.norm();
  if (!(n > 0.0))
    throw Error(ErrorCode::InvalidArgument, "cannot normalize a zero vector");
  return PureState(v / n);
}

Basis::Basis(CMat columns) : cols_(std::move(columns)) {
  if (cols_.rows() == 0 || cols_.rows() != cols_.cols())
    throw Error(ErrorCode::InvalidDimension, "basis must hold d vectors of dimension d");
  const CMat gram = cols_.adjoint() * cols_;
  const CMat id = CMat::Identity(cols_.cols(), cols_.cols());
  if ((gram - id).cwiseAbs().maxCoeff() > kCheckTol)
    throw Error(ErrorCode::InvariantViolation, "basis vectors are not orthonormal");
}

namespace {
CMat stack(const std::vector<PureState> &states) {
  if (states.empty())
    throw Error(ErrorCode::InvalidDimension, "empty basis");
  const auto d = static_cast<Eigen::Index>(states.front().dim());
  CMat m(d, static_cast<Eigen::Index>(states.size()));
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (static_cast<Eigen::Index>(states[i].dim()) != d)
      throw Error(ErrorCode::DimensionMismatch, "basis states differ in dimension");
    m.col(static_cast<Eigen::Index>(i)) = states[i].vec();
  }
  return m;
}
} // namespace

Basis::Basis(const std::vector<PureState> &states) : Basis(stack(states)) {}

Basis Basis::computational(std::size_t d) {
  return Basis(CMat::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
}

ChoiMatrix::ChoiMatrix(CMat chi) : chi_(std::move(chi)), d_(0) {
  if (chi_.rows() != chi_.cols())
    throw Error(ErrorCode::InvalidDimension, "Choi matrix must be square");
  const auto n = static_cast<std::size_t>(chi_.rows());
  const auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  if (d < 1 || d * d != n)
    throw Error(ErrorCode::InvalidDimension, "Choi matrix size is not a perfect square");
  d_ = d;
  if (hermiticity_defect(chi_) > kCheckTol)
    throw Error(ErrorCode::InvariantViolation, "Choi matrix is not Hermitian");
  if (hermitian_eigenvalues(chi_)(0) < -1e-9)
    throw Error(ErrorCode::InvariantViolation, "Choi matrix is not positive semidefinite");
}

ChoiMatrix ChoiMatrix::operator+(const ChoiMatrix &other) const {
  if (other.d_ != d_)
    throw Error(ErrorCode::DimensionMismatch, "adding Choi matrices of different dimension");
  return ChoiMatrix(chi_ + other.chi_, d_, Unchecked{});
}

ChoiMatrix operator*(double s, const ChoiMatrix &c) {
  if (s < 0.0)
    throw Error(ErrorCode::InvalidArgument, "negative weight on a Choi matrix");
  return ChoiMatrix(s * c.chi_, c.d_, ChoiMatrix::Unchecked{});
}

// ---------------------------------------------------------------------------

CMat kron(const CMat &a, const CMat &b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVec kron(const CVec &a, const CVec &b) {
  CVec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

double hermiticity_defect(const CMat &a) {
  if (a.rows() != a.cols())
    return std::numeric_limits<double>::infinity();
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

RVec hermitian_eigenvalues(const CMat &a) {
  const CMat h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double spectral_norm(const CMat &a) {
  Eigen::JacobiSVD<CMat> svd(a);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

namespace {

constexpr double kGramSchmidtDrop = 1e-8;

// Appends `candidate` (orthogonalized twice against `basis`) when it is not
// numerically parallel to the span already collected.
bool try_append(std::vector<CVec> &basis, CVec candidate) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto &b : basis)
      candidate -= b.dot(candidate) * b;
  const double n = candidate.norm();
  if (n <= kGramSchmidtDrop)
    return false;
  basis.push_back(candidate / n);
  return true;
}

} // namespace

Basis complete_basis(const CMat &leading_columns) {
  const Eigen::Index d = leading_columns.rows();
  std::vector<CVec> collected;
  for (Eigen::Index c = 0; c < leading_columns.cols(); ++c)
    if (!try_append(collected, leading_columns.col(c)))
      throw Error(ErrorCode::InvariantViolation, "leading vectors are linearly dependent");
  for (Eigen::Index i = 0; i < d && static_cast<Eigen::Index>(collected.size()) < d; ++i)
    try_append(collected, CVec::Unit(d, i));
  CMat m(d, d);
  for (Eigen::Index c = 0; c < d; ++c)
    m.col(c) = collected[static_cast<std::size_t>(c)];
  return Basis(std::move(m));
}

Basis complete_basis(const PureState &first) {
  CMat lead = first.vec();
  return complete_basis(lead);
}

// ---------------------------------------------------------------------------

PureState maximally_entangled_state(std::size_t d) {
  if (d < 2)
    throw Error(ErrorCode::InvalidDimension, "maximally entangled state needs d >= 2");
  const auto n = static_cast<Eigen::Index>(d);
  CVec w = CVec::Zero(n * n);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (Eigen::Index j = 0; j < n; ++j)
    w(j * n + j) = amp;
  return PureState(std::move(w));
}

Basis fourier_basis(const Basis &e) {
  const auto n = static_cast<Eigen::Index>(e.dim());
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  CMat f = CMat::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k)
    for (Eigen::Index j = 1; j <= n; ++j) {
      const double phase = 2.0 * std::numbers::pi * static_cast<double>(j * k) / static_cast<double>(n);
      f.col(k - 1) += norm * std::polar(1.0, phase) * e.matrix().col(j - 1);
    }
  return Basis(std::move(f));
}

Basis hadamard_product_basis(std::size_t n) {
  if (n < 1)
    throw Error(ErrorCode::InvalidDimension, "need at least one qubit");
  const double s = 1.0 / std::sqrt(2.0);
  CMat h(2, 2);
  h << s, s, s, -s;
  CMat out = h;
  for (std::size_t q = 1; q < n; ++q)
    out = kron(out, h);
  return Basis(std::move(out));
}

std::vector<PureState> bell_mub_basis(std::size_t d) {
  const PureState omega = maximally_entangled_state(d);
  const auto n = static_cast<Eigen::Index>(d);
  CMat shift = CMat::Zero(n, n);
  CMat clock = CMat::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    shift((j + 1) % n, j) = 1.0;
    clock(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j + 1) / static_cast<double>(n));
  }
  const CMat id = CMat::Identity(n, n);
  std::vector<PureState> out;
  out.reserve(d * d);
  CMat zpow = id;
  for (Eigen::Index j = 0; j < n; ++j) {
    CMat wpow = id;
    for (Eigen::Index k = 0; k < n; ++k) {
      out.emplace_back(kron(CMat(zpow * wpow), id) * omega.vec());
      wpow = wpow * clock;
    }
    zpow = zpow * shift;
  }
  return out;
}

ChoiMatrix choi_of_kraus(const std::vector<CMat> &kraus) {
  if (kraus.empty())
    throw Error(ErrorCode::InvalidArgument, "empty Kraus list");
  const Eigen::Index d = kraus.front().rows();
  if (d < 1)
    throw Error(ErrorCode::InvalidDimension, "empty Kraus operator");
  CMat sum_kk = CMat::Zero(d, d);
  for (const auto &k : kraus) {
    if (k.rows() != d || k.cols() != d)
      throw Error(ErrorCode::DimensionMismatch, "Kraus operators must all be d x d");
    sum_kk += k.adjoint() * k;
  }
  if (hermitian_eigenvalues(sum_kk).maxCoeff() > 1.0 + 1e-9)
    throw Error(ErrorCode::ContractViolation, "Kraus set is trace-increasing");

  // (I (x) K)|omega> has entry K(a, j)/sqrt(d) at index j*d + a.
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  CMat chi = CMat::Zero(d * d, d * d);
  for (const auto &k : kraus) {
    CVec wk(d * d);
    for (Eigen::Index j = 0; j < d; ++j)
      wk.segment(j * d, d) = amp * k.col(j);
    chi.noalias() += wk * wk.adjoint();
  }
  chi = 0.5 * (chi + chi.adjoint()).eval();
  return ChoiMatrix(std::move(chi));
}

double process_fidelity(const ChoiMatrix &chi, const ChoiMatrix &chi_target) {
  if (chi.dim() != chi_target.dim())
    throw Error(ErrorCode::DimensionMismatch, "Choi matrices of different dimension");
  const double t1 = chi.trace();
  const double t2 = chi_target.trace();
  if (!(t1 > 0.0) || !(t2 > 0.0))
    throw Error(ErrorCode::DegenerateChannel, "zero-trace Choi matrix");
  const double overlap = (chi.matrix().cwiseProduct(chi_target.matrix().conjugate())).sum().real();
  return overlap / (t1 * t2);
}

CMat output_state(const ChoiMatrix &chi, const PureState &psi) {
  const auto d = static_cast<Eigen::Index>(chi.dim());
  if (static_cast<Eigen::Index>(psi.dim()) != d)
    throw Error(ErrorCode::DimensionMismatch, "probe dimension does not match channel");
  // rho(a, b) = d sum_{i,j} psi_i conj(psi_j) chi(i d + a, j d + b)
  const CMat &c = chi.matrix();
  CMat rho = CMat::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      const cplx w = psi.vec()(i) * std::conj(psi.vec()(j));
      if (w == cplx(0.0))
        continue;
      rho += w * c.block(i * d, j * d, d, d);
    }
  rho *= static_cast<double>(d);
  return 0.5 * (rho + rho.adjoint());
}

} // namespace qfb
