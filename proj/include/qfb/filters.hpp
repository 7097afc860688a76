#pragma once

#include <cstdint>
#include <optional>

#include "qfb/quantum.hpp"

namespace qfb {

/// A probe weight <psi|K^dagger K|psi> below this is treated as exactly zero.
inline constexpr double kZeroWeight = 1e-12;

/// Single-Kraus probabilistic operation rho -> K rho K^dagger, together with
/// a canonical singular value decomposition K = sum_l sqrt(lambda_l) |v_l><w_l|.
///
/// Canonical form: singular values descending; inside a degenerate group the
/// right vectors are the Gram-Schmidt image of the computational vectors
/// projected onto that eigenspace; v_l is rephased so its largest-magnitude
/// entry is real positive and w_l takes the same phase.
class QuantumFilter {
public:
  /// Throws InvalidDimension for non-square input and ContractViolation when
  /// the spectral norm exceeds 1 + 1e-9.
  explicit QuantumFilter(CMat kraus);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(k_.rows()); }
  const CMat &kraus() const noexcept { return k_; }

  /// sqrt(lambda_l), descending
  const RVec &singular_values() const noexcept { return sv_; }
  /// lambda_l = eigenvalues of K^dagger K, descending
  RVec lambdas() const { return sv_.array().square(); }
  double lambda_mean() const { return lambdas().mean(); }
  double trace_kdk() const { return lambdas().sum(); }

  const Basis &left() const noexcept { return v_; }
  const Basis &right() const noexcept { return w_; }

  /// <psi|K^dagger K|psi>
  double weight(const CVec &psi) const { return (k_ * psi).squaredNorm(); }

  /// Choi matrix |omega_K><omega_K| of the filter.
  ChoiMatrix choi() const;

private:
  CMat k_;
  RVec sv_;
  Basis v_;
  Basis w_;
};

struct IdealOutput {
  PureState state;
  double weight;
};

/// Normalized K|psi> and its weight <psi|K^dagger K|psi>; nullopt when the
/// weight falls below kZeroWeight (the probe is filtered to zero).
std::optional<IdealOutput> ideal_output(const QuantumFilter &k, const PureState &psi);

/// Two-qubit filter realized by a partially polarizing beam splitter with real
/// amplitude transmittances tH, tV and lossless reflectances r = sqrt(1 - t^2).
QuantumFilter ppbs_filter(double th, double tv);

/// tH = 1 filter parameterized by intensity transmittance T_V = tV^2.
QuantumFilter ppbs_filter_intensity(double transmittance_v);

/// Ginibre matrix divided by its spectral norm. Deterministic for a given seed.
QuantumFilter random_filter(std::size_t d, std::uint64_t seed);

/// Haar-random unitary (QR of a Ginibre matrix with phase-fixed R).
CMat random_unitary(std::size_t d, std::uint64_t seed);

struct MixtureChannel {
  double p;
  QuantumFilter ideal;
  QuantumFilter perturber;
  ChoiMatrix choi;
};

/// p chi_K + (1 - p) chi_K'
MixtureChannel mixture_channel(const QuantumFilter &ideal, const QuantumFilter &perturber, double p);

/// |Tr(a^dagger b)|^2 / (Tr(a^dagger a) Tr(b^dagger b))
double filter_fidelity(const QuantumFilter &a, const QuantumFilter &b);

} // namespace qfb
