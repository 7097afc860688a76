#include "qfb/filters.hpp"

#include <cmath>
#include <random>

namespace qfb {

namespace {

struct CanonicalSvd {
  RVec sv;
  Basis v;
  Basis w;
};

constexpr double kDegenerateTol = 1e-9;

// Orthonormal basis of the subspace with projector `proj` (rank `rank`),
// obtained by Gram-Schmidt over the projected computational vectors.
std::vector<CVec> canonical_subspace_basis(const CMat &proj, Eigen::Index rank,
                                           const std::vector<CVec> &exclude) {
  const Eigen::Index d = proj.rows();
  std::vector<CVec> out;
  for (Eigen::Index i = 0; i < d && static_cast<Eigen::Index>(out.size()) < rank; ++i) {
    CVec c = proj * CVec::Unit(d, i);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto &b : exclude)
        c -= b.dot(c) * b;
      for (const auto &b : out)
        c -= b.dot(c) * b;
    }
    const double n = c.norm();
    if (n > 1e-6)
      out.push_back(c / n);
  }
  if (static_cast<Eigen::Index>(out.size()) != rank)
    throw Error(ErrorCode::InvariantViolation, "could not span a degenerate singular subspace");
  return out;
}

cplx dominant_phase(const CVec &v) {
  Eigen::Index best = 0;
  double best_mag = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double m = std::abs(v(i));
    if (m > best_mag + 1e-12) {
      best = i;
      best_mag = m;
    }
  }
  return v(best) / std::abs(v(best));
}

CanonicalSvd canonical_svd(const CMat &k) {
  const Eigen::Index d = k.rows();
  const CMat kdk = 0.5 * (k.adjoint() * k + (k.adjoint() * k).adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(kdk);
  RVec lam = es.eigenvalues().reverse().cwiseMax(0.0);
  CMat u = es.eigenvectors().rowwise().reverse();

  const double scale = std::max(1.0, lam(0));
  std::vector<CVec> right;
  for (Eigen::Index start = 0; start < d;) {
    Eigen::Index stop = start + 1;
    while (stop < d && lam(start) - lam(stop) <= kDegenerateTol * scale)
      ++stop;
    const CMat block = u.middleCols(start, stop - start);
    auto group = canonical_subspace_basis(block * block.adjoint(), stop - start, right);
    for (auto &g : group)
      right.push_back(std::move(g));
    // equalize values inside a degenerate group
    const double mean = lam.segment(start, stop - start).mean();
    lam.segment(start, stop - start).setConstant(mean);
    start = stop;
  }

  RVec sv = lam.cwiseSqrt();
  std::vector<CVec> left;
  Eigen::Index nonzero = 0;
  for (Eigen::Index l = 0; l < d; ++l) {
    if (lam(l) < kZeroWeight)
      break;
    // K w / sqrt(lambda) loses orthogonality for small lambda; re-orthogonalize
    CVec v = (k * right[static_cast<std::size_t>(l)]) / sv(l);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto &prev : left)
        v -= prev.dot(v) * prev;
    left.push_back(v.normalized());
    ++nonzero;
  }
  // left vectors for zero singular values complete the basis deterministically
  {
    CMat lead(d, nonzero);
    for (Eigen::Index l = 0; l < nonzero; ++l)
      lead.col(l) = left[static_cast<std::size_t>(l)];
    const Basis completed = complete_basis(lead);
    for (Eigen::Index l = nonzero; l < d; ++l) {
      left.push_back(completed.vec(static_cast<std::size_t>(l)));
      sv(l) = 0.0;
    }
  }

  CMat vmat(d, d), wmat(d, d);
  for (Eigen::Index l = 0; l < d; ++l) {
    const cplx ph = std::conj(dominant_phase(left[static_cast<std::size_t>(l)]));
    vmat.col(l) = ph * left[static_cast<std::size_t>(l)];
    wmat.col(l) = ph * right[static_cast<std::size_t>(l)];
  }
  return CanonicalSvd{std::move(sv), Basis(std::move(vmat)), Basis(std::move(wmat))};
}

CMat checked_kraus(CMat k) {
  if (k.rows() < 1 || k.rows() != k.cols())
    throw Error(ErrorCode::InvalidDimension, "filter must be a nonempty square matrix");
  if (spectral_norm(k) > 1.0 + 1e-9)
    throw Error(ErrorCode::ContractViolation, "filter spectral norm exceeds 1");
  return k;
}

} // namespace

QuantumFilter::QuantumFilter(CMat kraus)
    : k_(checked_kraus(std::move(kraus))), sv_(), v_(Basis::computational(dim())),
      w_(Basis::computational(dim())) {
  auto svd = canonical_svd(k_);
  sv_ = std::move(svd.sv);
  v_ = std::move(svd.v);
  w_ = std::move(svd.w);
}

ChoiMatrix QuantumFilter::choi() const { return choi_of_kraus({k_}); }

std::optional<IdealOutput> ideal_output(const QuantumFilter &k, const PureState &psi) {
  if (psi.dim() != k.dim())
    throw Error(ErrorCode::DimensionMismatch, "probe dimension does not match filter");
  const CVec out = k.kraus() * psi.vec();
  const double w = out.squaredNorm();
  if (w < kZeroWeight)
    return std::nullopt;
  return IdealOutput{PureState(out / std::sqrt(w)), w};
}

QuantumFilter ppbs_filter(double th, double tv) {
  if (!(th >= 0.0 && th <= 1.0) || !(tv >= 0.0 && tv <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "transmittance outside [0, 1]");
  const double rh = std::sqrt(1.0 - th * th);
  const double rv = std::sqrt(1.0 - tv * tv);
  CMat k = CMat::Zero(4, 4);
  k(0, 0) = th * th - rh * rh;
  k(1, 1) = th * tv;
  k(1, 2) = -rh * rv;
  k(2, 1) = -rh * rv;
  k(2, 2) = th * tv;
  k(3, 3) = tv * tv - rv * rv;
  return QuantumFilter(std::move(k));
}

QuantumFilter ppbs_filter_intensity(double transmittance_v) {
  if (!(transmittance_v >= 0.0 && transmittance_v <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "intensity transmittance outside [0, 1]");
  return ppbs_filter(1.0, std::sqrt(transmittance_v));
}

namespace {
CMat ginibre(std::size_t d, std::mt19937_64 &rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const auto n = static_cast<Eigen::Index>(d);
  CMat g(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = cplx(re, im);
    }
  return g;
}
} // namespace

QuantumFilter random_filter(std::size_t d, std::uint64_t seed) {
  if (d < 2)
    throw Error(ErrorCode::InvalidDimension, "random filter needs d >= 2");
  std::mt19937_64 rng(seed);
  CMat g = ginibre(d, rng);
  g /= spectral_norm(g);
  // the SVD used for the norm is accurate to a few ulps; a final rescale by
  // the recomputed norm keeps the result within the physical region
  const double s = spectral_norm(g);
  if (s > 1.0)
    g /= s;
  return QuantumFilter(std::move(g));
}

CMat random_unitary(std::size_t d, std::uint64_t seed) {
  if (d < 1)
    throw Error(ErrorCode::InvalidDimension, "random unitary needs d >= 1");
  std::mt19937_64 rng(seed);
  const CMat g = ginibre(d, rng);
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ();
  const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < q.cols(); ++i) {
    const cplx diag = r(i, i);
    if (std::abs(diag) > 0.0)
      q.col(i) *= diag / std::abs(diag);
  }
  return q;
}

MixtureChannel mixture_channel(const QuantumFilter &ideal, const QuantumFilter &perturber, double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "mixing weight outside [0, 1]");
  if (ideal.dim() != perturber.dim())
    throw Error(ErrorCode::DimensionMismatch, "mixture of filters with different dimension");
  ChoiMatrix chi = p * ideal.choi() + (1.0 - p) * perturber.choi();
  return MixtureChannel{p, ideal, perturber, std::move(chi)};
}

double filter_fidelity(const QuantumFilter &a, const QuantumFilter &b) {
  if (a.dim() != b.dim())
    throw Error(ErrorCode::DimensionMismatch, "filters of different dimension");
  const double na = a.kraus().squaredNorm();
  const double nb = b.kraus().squaredNorm();
  if (!(na > 0.0) || !(nb > 0.0))
    throw Error(ErrorCode::DegenerateChannel, "zero filter");
  const cplx overlap = (a.kraus().adjoint() * b.kraus()).trace();
  return std::norm(overlap) / (na * nb);
}

} // namespace qfb
