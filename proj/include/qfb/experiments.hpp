#pragma once

// Drivers for the PPBS scans, the random-channel benchmark and config-driven
// single runs. CSV output uses 12 significant digits and is deterministic.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qfb/bounds.hpp"
#include "qfb/json_io.hpp"
#include "qfb/sdp.hpp"

namespace qfb {

enum class ProbeChoice { Product, Eigen };
const char *to_string(ProbeChoice p) noexcept;
ProbeChoice probe_choice_from_string(const std::string &s);

/// Probe ensemble for target K: product probes with the computational
/// auxiliary basis (d = 4 only), or eigenprobes with their Fourier partner.
ProbeEnsemble make_ensemble(const QuantumFilter &k, ProbeChoice choice);

/// "a:b:step" (inclusive, values rounded to 1e-12) or "x,y,z". The result must
/// be finite, sorted ascending and inside [0, 1].
std::vector<double> parse_grid(const std::string &spec);

/// Grid points must be strictly positive for filter transmittances.
void check_transmittance_grid(const std::vector<double> &grid);

struct Fig1Row {
  double tv;
  BoundsReport report;
};

/// Perfect PPBS channel, product probes, exact data.
std::vector<Fig1Row> run_fig1(const std::vector<double> &grid);
void write_fig1_csv(std::ostream &out, const std::vector<Fig1Row> &rows);

struct Fig2Row {
  double target_tv;
  double actual_tv;
  BoundsReport report;
};

/// Target PPBS at each target T_V, channel = perfect PPBS at each grid T_V.
std::vector<Fig2Row> run_fig2(const std::vector<double> &targets, const std::vector<double> &grid);
void write_fig2_csv(std::ostream &out, const std::vector<Fig2Row> &rows);

struct Fig3Config {
  std::size_t count = 1000;
  ProbeChoice probes = ProbeChoice::Product;
  double target_tv = 0.5;
  std::uint64_t seed = 0;
  /// overrides the random mixing weight of every channel
  std::optional<double> force_p;
  /// 0 selects FILTER_BOUNDS_THREADS or all cores
  std::size_t threads = 0;
  SdpOptions sdp{};
};

struct Fig3Row {
  std::size_t index;
  std::uint64_t perturber_seed;
  double p;
  double true_fidelity;
  BoundsReport report;
  double sdp_lower;
  double sdp_upper;
  sdp::Status status_lower;
  sdp::Status status_upper;
  double gap_lower;
  double gap_upper;

  /// analytical lower <= SDP lower <= F <= SDP upper <= min analytical upper
  bool sandwich_holds(double tol) const;
};

/// Channel i is p_i chi_K + (1 - p_i) chi_K' with K' = random_filter(d, s_i)
/// and (p_i, s_i) drawn from a stream seeded by (seed, i). Rows are sorted
/// by true fidelity (ties by index).
std::vector<Fig3Row> run_fig3(const Fig3Config &cfg);
void write_fig3_csv(std::ostream &out, const std::vector<Fig3Row> &rows);

/// FILTER_BOUNDS_THREADS if set to a positive integer, else hardware concurrency.
std::size_t default_thread_count();

/// Runs one configuration and returns the full JSON report. Relative file
/// paths inside the config are resolved against `base_dir`.
Json run_custom(const Json &config, const std::string &base_dir = ".");

} // namespace qfb
