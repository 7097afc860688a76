#include "qfb/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace qfb {

HofmannBounds hofmann_unitary_bounds(double f1, double f2) {
  return HofmannBounds{f1 + f2 - 1.0, std::min(f1, f2)};
}

const char *to_string(LowerBoundFormula f) noexcept {
  return f == LowerBoundFormula::Eigenprobe ? "eigenprobe" : "general";
}

namespace {

void check_dims(const QuantumFilter &k, const ReducedStats &s) {
  if (s.basis.dim() != k.dim())
    throw Error(ErrorCode::DimensionMismatch, "stats for basis '" + s.basis.label + "' do not match filter");
}

// p_j = Delta P_j <b_j|K^dagger K|b_j>; terms with zero target weight vanish.
RVec probe_weights(const QuantumFilter &k, const ReducedStats &s) {
  const double delta = static_cast<double>(k.dim()) / k.trace_kdk();
  RVec w = RVec::Zero(static_cast<Eigen::Index>(s.basis.dim()));
  for (std::size_t j = 0; j < s.basis.dim(); ++j) {
    const double kw = k.weight(s.basis.probes.vec(j));
    if (kw < kZeroWeight)
      continue;
    w(static_cast<Eigen::Index>(j)) = delta * s.success(static_cast<Eigen::Index>(j)) * kw;
  }
  return w;
}

double weighted_overlap(const QuantumFilter &k, const ReducedStats &s, const RVec &weights) {
  double acc = 0.0;
  for (std::size_t j = 0; j < s.basis.dim(); ++j) {
    if (k.weight(s.basis.probes.vec(j)) < kZeroWeight)
      continue;
    const double wj = weights(static_cast<Eigen::Index>(j));
    if (wj == 0.0)
      continue;
    acc += wj * s.ideal_overlap(j);
  }
  return acc;
}

const ReducedStats &auxiliary_stats(const QuantumFilter &k, const ReducedStats &e_stats,
                                    const std::optional<ReducedStats> &u_stats) {
  if (u_stats)
    return *u_stats;
  if (!is_eigenprobe_basis(k, e_stats))
    throw Error(ErrorCode::MissingData, "auxiliary u-basis statistics are required unless e is the eigenbasis");
  return e_stats;
}

} // namespace

bool is_eigenprobe_basis(const QuantumFilter &k, const ReducedStats &e_stats) {
  if (!e_stats.has_eigen_readout() || e_stats.basis.dim() != k.dim())
    return false;
  const RVec sv = k.singular_values();
  for (std::size_t j = 0; j < k.dim(); ++j) {
    const CVec kej = k.kraus() * e_stats.basis.probes.vec(j);
    const CVec target = sv(static_cast<Eigen::Index>(j)) * k.left().vec(j);
    if ((kej - target).norm() > 1e-8)
      return false;
  }
  return true;
}

double kk_omega_term(const QuantumFilter &k, const ReducedStats &u_stats) {
  check_dims(k, u_stats);
  if (!u_stats.has_eigen_readout())
    throw Error(ErrorCode::MissingData, "basis '" + u_stats.basis.label + "' was not read out in {v_l}");
  const RVec lam = k.lambdas();
  double acc = 0.0;
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(k.dim()); ++j)
    acc += u_stats.success(j) * u_stats.conditional.row(j).dot(lam);
  return acc;
}

double general_lower_bound(const QuantumFilter &k, const ReducedStats &e_stats, const ReducedStats &f_stats,
                           const std::optional<ReducedStats> &u_stats) {
  check_dims(k, e_stats);
  check_dims(k, f_stats);
  const ReducedStats &aux = auxiliary_stats(k, e_stats, u_stats);
  const double delta = static_cast<double>(k.dim()) / k.trace_kdk();
  return weighted_overlap(k, e_stats, probe_weights(k, e_stats)) +
         weighted_overlap(k, f_stats, probe_weights(k, f_stats)) - delta * kk_omega_term(k, aux);
}

double eigenprobe_lower_bound(const QuantumFilter &k, const ReducedStats &e_stats, const ReducedStats &f_stats) {
  check_dims(k, e_stats);
  check_dims(k, f_stats);
  if (!is_eigenprobe_basis(k, e_stats))
    throw Error(ErrorCode::NotEigenbasis, "e-basis is not the right singular basis read out in {v_l}");
  const RVec lam = k.lambdas();
  const double lbar = lam.mean();
  const auto d = static_cast<Eigen::Index>(k.dim());

  // Q_k weights equal the success probabilities because <f_k|K^dagger K|f_k>
  // = lambda_mean for a basis unbiased to {w_j}; zero-weight probes still drop
  double fidelity_f = 0.0;
  for (Eigen::Index kk = 0; kk < d; ++kk) {
    const auto ku = static_cast<std::size_t>(kk);
    if (k.weight(f_stats.basis.probes.vec(ku)) < kZeroWeight)
      continue;
    fidelity_f += f_stats.success(kk) * f_stats.ideal_overlap(ku);
  }
  double cross = 0.0;
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index l = 0; l < d; ++l)
      if (j != l)
        cross += lam(l) / lbar * e_stats.success(j) * e_stats.conditional(j, l);
  return fidelity_f - cross;
}

UpperBounds upper_bounds(const QuantumFilter &k, const ReducedStats &e_stats, const ReducedStats &f_stats) {
  check_dims(k, e_stats);
  check_dims(k, f_stats);
  return UpperBounds{weighted_overlap(k, e_stats, probe_weights(k, e_stats)),
                     weighted_overlap(k, f_stats, probe_weights(k, f_stats))};
}

BoundsReport analyze(const QuantumFilter &k, const ReducedStats &e_stats, const ReducedStats &f_stats,
                     const std::optional<ReducedStats> &u_stats) {
  check_dims(k, e_stats);
  check_dims(k, f_stats);
  BoundsReport r;
  r.delta = static_cast<double>(k.dim()) / k.trace_kdk();
  r.lambda_mean = k.lambda_mean();
  r.weights_e = probe_weights(k, e_stats);
  r.weights_f = probe_weights(k, f_stats);
  r.upper_e = weighted_overlap(k, e_stats, r.weights_e);
  r.upper_f = weighted_overlap(k, f_stats, r.weights_f);
  r.kk_omega = kk_omega_term(k, auxiliary_stats(k, e_stats, u_stats));
  r.correction = r.delta * r.kk_omega;
  if (!u_stats && is_eigenprobe_basis(k, e_stats)) {
    r.formula = LowerBoundFormula::Eigenprobe;
    r.lower = eigenprobe_lower_bound(k, e_stats, f_stats);
  } else {
    r.formula = LowerBoundFormula::General;
    r.lower = r.upper_e + r.upper_f - r.correction;
  }
  return r;
}

BoundsReport analyze(const QuantumFilter &k, const std::vector<ReducedStats> &stats) {
  const auto e = find_stats(stats, "e");
  const auto f = find_stats(stats, "f");
  if (!e || !f)
    throw Error(ErrorCode::MissingData, "statistics for probe bases 'e' and 'f' are required");
  return analyze(k, *e, *f, find_stats(stats, "u"));
}

} // namespace qfb
