#include "qfb/certificates.hpp"

#include <cmath>
#include <map>

namespace qfb {

WitnessReport witness_report(const CMat &hermitian) {
  const RVec ev = hermitian_eigenvalues(hermitian);
  WitnessReport r;
  r.min_eigenvalue = ev.minCoeff();
  r.max_eigenvalue = ev.maxCoeff();
  std::map<double, std::size_t> bins;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= kZeroEigenvalue)
      ++r.zero_space_dim;
    double key = std::round(ev(i) * 1e6) / 1e6;
    if (key == 0.0)
      key = 0.0; // fold -0
    ++bins[key];
  }
  r.histogram.assign(bins.begin(), bins.end());
  return r;
}

CMat build_R(const Basis &e, const Basis &f) {
  if (e.dim() != f.dim())
    throw Error(ErrorCode::DimensionMismatch, "R needs two bases of equal dimension");
  const std::size_t d = e.dim();
  const auto n = static_cast<Eigen::Index>(d * d);
  const CVec omega = maximally_entangled_state(d).vec();
  CMat r = omega * omega.adjoint() + CMat::Identity(n, n);
  for (std::size_t j = 0; j < d; ++j) {
    // (|b><b|)^T (x) |b><b| = |conj(b) b><conj(b) b|
    const CVec pe = kron(CVec(e.vec(j).conjugate()), e.vec(j));
    const CVec pf = kron(CVec(f.vec(j).conjugate()), f.vec(j));
    r -= pe * pe.adjoint();
    r -= pf * pf.adjoint();
  }
  return r;
}

CMat bell_diagonal_R(std::size_t d) {
  const auto states = bell_mub_basis(d);
  const auto n = static_cast<Eigen::Index>(d * d);
  CMat r = CMat::Zero(n, n);
  for (std::size_t j = 1; j < d; ++j)
    for (std::size_t k = 1; k < d; ++k) {
      const CVec &v = states[j * d + k].vec();
      r += v * v.adjoint();
    }
  return r;
}

namespace {
// |j_1..j_n>|k_1..k_n>  ->  |j_1 k_1>...|j_n k_n>, bit 0 = most significant
std::size_t regroup_index(std::size_t idx, std::size_t n) {
  const std::size_t in = idx >> n;
  const std::size_t out = idx & ((std::size_t{1} << n) - 1);
  std::size_t r = 0;
  for (std::size_t m = 0; m < n; ++m) {
    const std::size_t shift = n - 1 - m;
    const std::size_t jm = (in >> shift) & 1u;
    const std::size_t km = (out >> shift) & 1u;
    r = (r << 2) | (jm << 1) | km;
  }
  return r;
}
} // namespace

CMat regroup_qubit_pairs(const CMat &op, std::size_t n) {
  const auto size = static_cast<Eigen::Index>(std::size_t{1} << (2 * n));
  if (op.rows() != size || op.cols() != size)
    throw Error(ErrorCode::DimensionMismatch, "operator is not on 2n qubits");
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(size));
  for (std::size_t i = 0; i < perm.size(); ++i)
    perm[i] = static_cast<Eigen::Index>(regroup_index(i, n));
  CMat out(size, size);
  for (Eigen::Index a = 0; a < size; ++a)
    for (Eigen::Index b = 0; b < size; ++b)
      out(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(b)]) = op(a, b);
  return out;
}

WitnessReport hadamard_R_spectrum(std::size_t n) {
  if (n < 1 || n > 3)
    throw Error(ErrorCode::InvalidDimension, "Hadamard spectrum is provided for 1..3 qubits");
  const std::size_t d = std::size_t{1} << n;
  const CMat r = build_R(Basis::computational(d), hadamard_product_basis(n));
  const CMat grouped = regroup_qubit_pairs(r, n);

  const double s = 1.0 / std::sqrt(2.0);
  CMat bell(4, 4);
  // columns: Phi+, Phi-, Psi+, Psi- over |00>,|01>,|10>,|11>
  bell << s, s, 0, 0,
          0, 0, s, s,
          0, 0, s, -s,
          s, -s, 0, 0;
  CMat frame = bell;
  for (std::size_t m = 1; m < n; ++m)
    frame = kron(frame, bell);
  const CMat diag_form = frame.adjoint() * grouped * frame;

  WitnessReport rep = witness_report(r);
  CMat off = diag_form;
  off.diagonal().setZero();
  rep.off_diagonal = off.cwiseAbs().maxCoeff();
  return rep;
}

std::pair<double, double> upper_inequality_witnesses(std::size_t d) {
  const auto states = bell_mub_basis(d);
  const CVec &w11 = states[0].vec();
  CMat a = -w11 * w11.adjoint();
  CMat b = a;
  for (std::size_t j = 0; j < d; ++j) {
    const CVec &wj1 = states[j * d].vec();
    const CVec &w1k = states[j].vec();
    a += wj1 * wj1.adjoint();
    b += w1k * w1k.adjoint();
  }
  return {hermitian_eigenvalues(a).minCoeff(), hermitian_eigenvalues(b).minCoeff()};
}

CMat conjugate_output(const CMat &x, const CMat &a) {
  const Eigen::Index d = a.rows();
  const CMat big = kron(CMat(CMat::Identity(d, d)), a);
  return big * x * big.adjoint();
}

} // namespace qfb
