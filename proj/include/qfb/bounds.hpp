#pragma once

// Analytical fidelity bounds for quantum filters computed from reduced probe
// statistics. All weights are target-side quantities derived from K.

#include <optional>
#include <string>
#include <vector>

#include "qfb/filters.hpp"
#include "qfb/probe_data.hpp"

namespace qfb {

struct HofmannBounds {
  double lower;
  double upper;
};

/// lower = F1 + F2 - 1 (reported unclipped), upper = min(F1, F2).
HofmannBounds hofmann_unitary_bounds(double f1, double f2);

enum class LowerBoundFormula { General, Eigenprobe };
const char *to_string(LowerBoundFormula f) noexcept;

struct BoundsReport {
  double lower = 0.0;
  double upper_e = 0.0;
  double upper_f = 0.0;
  /// p_j, q_k (zero for dropped terms)
  RVec weights_e;
  RVec weights_f;
  /// Tr(K K^dagger Omega~)
  double kk_omega = 0.0;
  /// Delta Tr(K K^dagger Omega~)
  double correction = 0.0;
  /// d / Tr(K^dagger K)
  double delta = 0.0;
  double lambda_mean = 0.0;
  LowerBoundFormula formula = LowerBoundFormula::General;
  std::optional<double> true_fidelity;

  double upper() const { return std::min(upper_e, upper_f); }
};

/// sum_{j,l} lambda_l R_j <v_l|zeta~_j|v_l>; `u_stats` must be read out in {v_l}.
double kk_omega_term(const QuantumFilter &k, const ReducedStats &u_stats);

/// Generalized lower bound sum p_j <e~|rho~|e~> + sum q_k <f~|xi~|f~> - Delta Tr(KK^dagger Omega~).
/// When `u_stats` is absent the e-record is reused, which requires e to be
/// the right singular basis read out in {v_l}.
double general_lower_bound(const QuantumFilter &k, const ReducedStats &e_stats, const ReducedStats &f_stats,
                           const std::optional<ReducedStats> &u_stats = std::nullopt);

/// Tight form for e_j = w_j:
/// sum_k Q_k <f~_k|xi~_k|f~_k> - sum_{j != l} (lambda_l / lambda_mean) P_j <v_l|rho~_j|v_l>.
/// Throws NotEigenbasis when ||K e_j - sqrt(lambda_j) v_j|| > 1e-8.
double eigenprobe_lower_bound(const QuantumFilter &k, const ReducedStats &e_stats, const ReducedStats &f_stats);

struct UpperBounds {
  double upper_e;
  double upper_f;
};

UpperBounds upper_bounds(const QuantumFilter &k, const ReducedStats &e_stats, const ReducedStats &f_stats);

/// True when e_j = w_j (checked through K e_j = sqrt(lambda_j) v_j) and the
/// basis is read out in {v_l}.
bool is_eigenprobe_basis(const QuantumFilter &k, const ReducedStats &e_stats);

/// All analytical bounds with their components. Stats are looked up by the
/// labels "e", "f" and (optionally) "u".
BoundsReport analyze(const QuantumFilter &k, const std::vector<ReducedStats> &stats);
BoundsReport analyze(const QuantumFilter &k, const ReducedStats &e_stats, const ReducedStats &f_stats,
                     const std::optional<ReducedStats> &u_stats);

} // namespace qfb
