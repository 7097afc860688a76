#pragma once

// Data-constrained extremal fidelities: min / max Delta Tr(A |omega_K><omega_K|)
// over normalized Choi matrices A = chi / Tr chi that reproduce the measured
// relative frequencies.

#include <string>
#include <utility>
#include <vector>

#include "qfb/filters.hpp"
#include "qfb/probe_data.hpp"
#include "qfb/sdp_solver.hpp"

namespace qfb {

struct ConstraintOrigin {
  std::string basis;
  std::size_t probe = 0;   ///< 0-based
  std::size_t outcome = 0; ///< 0-based
};

/// Tr(A M) = r with M Hermitian on C^{d^2}.
struct Constraint {
  CMat M;
  double r = 0.0;
  ConstraintOrigin origin;
};

/// Linearly independent data constraints; Tr(A) = 1 is implicit and always
/// imposed in addition to these.
struct ConstraintSet {
  std::size_t d = 0;
  std::vector<Constraint> constraints;

  std::size_t size() const noexcept { return constraints.size(); }
};

/// One constraint per (basis, probe j, outcome k):
///   Tr(A (|m_j><m_j|)^T (x) |n_jk><n_jk|) = f_jk / sum_{lm} f_lm
/// pruned greedily, in record/basis/probe/outcome order, to a set that is
/// linearly independent together with the identity (Gram tolerance 1e-8).
ConstraintSet assemble_constraints(const std::vector<MeasurementRecord> &records);

struct SdpOptions {
  /// Each equality becomes |Tr(A M_k) - r_k| <= epsilon when epsilon > 0.
  double epsilon = 0.0;
  sdp::Settings solver{};
};

struct SdpSolution {
  double value = 0.0;
  CMat A;
  double gap = 0.0;
  int iterations = 0;
  sdp::Status status = sdp::Status::MaxIterations;
  double primal_residual = 0.0;
  /// max_k |Tr(A M_k) - r_k| over the constraint set, evaluated on A
  double max_violation = 0.0;
  /// dimension of the face of the PSD cone the problem was reduced to
  std::size_t face_dim = 0;
  std::string message;
};

struct SdpBounds {
  SdpSolution lower;
  SdpSolution upper;
};

/// Solves both programs. Outcomes with exactly zero frequency (epsilon = 0)
/// confine A to the orthogonal complement of their measurement operators;
/// the program is solved on that face.
SdpBounds solve_bounds(const ConstraintSet &constraints, const QuantumFilter &k, const SdpOptions &options = {});

} // namespace qfb
