#pragma once

// Probe-and-measure simulation: each probe state is sent through the channel
// and its output is measured in a probe-specific orthonormal basis.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qfb/filters.hpp"
#include "qfb/quantum.hpp"

namespace qfb {

/// How the outputs of a probe basis are read out.
enum class Readout {
  /// per-probe basis whose first vector is the ideal output of the target
  IdealOutput,
  /// every probe measured in the left singular basis {v_l} of the target
  LeftEigenbasis,
};

const char *to_string(Readout r) noexcept;
Readout readout_from_string(const std::string &s);

/// One probe basis with the measurement settings for each of its states.
struct ProbeBasis {
  std::string label;
  Basis probes;
  std::vector<Basis> measurements;
  /// Outcome index holding the ideal output of probe j, if any.
  std::vector<std::optional<std::size_t>> ideal_outcome;
  /// Target-side weights <probe_j|K^dagger K|probe_j>.
  std::vector<double> ideal_weight;
  Readout readout;

  std::size_t dim() const noexcept { return probes.dim(); }
};

/// Probes measured in a basis completed from the ideal output state.
ProbeBasis ideal_readout_basis(const QuantumFilter &k, const Basis &probes, std::string label);

/// Probes measured in {v_l}; probe j that coincides with w_j records outcome j
/// as its ideal output.
ProbeBasis eigen_readout_basis(const QuantumFilter &k, const Basis &probes, std::string label);

/// e, f and optional auxiliary u basis.
struct ProbeEnsemble {
  ProbeBasis e;
  ProbeBasis f;
  std::optional<ProbeBasis> u;

  std::vector<ProbeBasis> bases() const;
};

enum class PartnerBasis { Fourier, Hadamard };

/// Product probes {|0+>,|0->,|1+>,|1->} and {|+0>,|+1>,|-0>,|-1>} with the
/// computational auxiliary basis read out in {v_l}. Requires d = 4.
ProbeEnsemble product_ensemble(const QuantumFilter &k);

/// e = right singular basis {w_j} read out in {v_l}; f = its Fourier (or
/// qubitwise Hadamard, d = 2^n) partner with ideal-output readout; no u basis.
ProbeEnsemble eigen_ensemble(const QuantumFilter &k, PartnerBasis partner = PartnerBasis::Fourier);

/// The basis {sum_j H_{jk} w_j} for the n-qubit Hadamard matrix H.
Basis hadamard_partner(const Basis &w);

enum class RecordMode { Exact, Sampled };

/// Outcome weights f_jk for every probe basis (row j = probe, column k = outcome).
struct MeasurementRecord {
  RecordMode mode = RecordMode::Exact;
  std::optional<std::uint64_t> shots;
  std::vector<ProbeBasis> bases;
  std::vector<RMat> counts;
};

/// p_k = d Tr(chi (|m><m|)^T (x) |n_k><n_k|); roundoff negatives down to
/// -1e-12 are clipped to zero, anything below raises InvariantViolation.
RVec theoretical_probabilities(const ChoiMatrix &chi, const PureState &probe, const Basis &meas);

/// Exact probabilities, or multinomial counts with `shots` trials per probe
/// (failed filtering events are not recorded). Sampling streams are derived
/// from (seed, basis index, probe index).
MeasurementRecord run_ensemble(const ChoiMatrix &chi, const ProbeEnsemble &ensemble,
                               std::optional<std::uint64_t> shots = std::nullopt,
                               std::uint64_t seed = 0);

struct ReducedStats {
  ProbeBasis basis;
  /// relative success probabilities, sum to 1
  RVec success;
  /// conditional outcome distribution per probe (zero row for dropped probes)
  RMat conditional;
  std::vector<bool> dropped;

  /// normalized overlap of probe j's output with its ideal output
  double ideal_overlap(std::size_t j) const;
  bool has_eigen_readout() const noexcept { return basis.readout == Readout::LeftEigenbasis; }
};

/// A probe row without counts is dropped when its ideal weight is zero. With
/// nonzero ideal weight it is an InsufficientData error for sampled data; in
/// exact data it means the channel blocks the probe (P_j = 0) and is dropped.
ReducedStats reduce(const ProbeBasis &basis, const RMat &counts, RecordMode mode = RecordMode::Sampled);
std::vector<ReducedStats> reduce(const MeasurementRecord &record);

/// Finds the reduced stats for the basis with `label`, or nullopt.
std::optional<ReducedStats> find_stats(const std::vector<ReducedStats> &stats, const std::string &label);

} // namespace qfb
