#pragma once

// Numerical checks of the operator inequalities behind the bounds.

#include <cstddef>
#include <utility>
#include <vector>

#include "qfb/quantum.hpp"

namespace qfb {

/// Eigenvalues with |x| <= this count as zero.
inline constexpr double kZeroEigenvalue = 1e-9;

struct WitnessReport {
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  std::size_t zero_space_dim = 0;
  /// (eigenvalue rounded to 1e-6, multiplicity), ascending
  std::vector<std::pair<double, std::size_t>> histogram;
  /// Largest off-diagonal modulus in the Bell-product frame (Hadamard pair only).
  double off_diagonal = 0.0;
};

WitnessReport witness_report(const CMat &hermitian);

/// |omega><omega| - sum_j (|e_j><e_j|)^T (x) |e_j><e_j|
///                - sum_k (|f_k><f_k|)^T (x) |f_k><f_k| + I (x) I
CMat build_R(const Basis &e, const Basis &f);

/// sum_{j,k=2..d} |omega_jk><omega_jk|
CMat bell_diagonal_R(std::size_t d);

/// Reorders |j_1..j_n>|k_1..k_n> into |j_1 k_1>...|j_n k_n> on a 2n-qubit
/// operator, by index permutation.
CMat regroup_qubit_pairs(const CMat &op, std::size_t n);

/// R for the computational / qubitwise-Hadamard pair, regrouped into
/// input-output qubit pairs and checked for diagonality in the Bell-product
/// basis (Phi+, Phi-, Psi+, Psi- per pair). Requires 1 <= n <= 3.
WitnessReport hadamard_R_spectrum(std::size_t n);

/// Minimum eigenvalues of sum_j |omega_j1><omega_j1| - |omega_11><omega_11|
/// and sum_k |omega_1k><omega_1k| - |omega_11><omega_11|.
std::pair<double, double> upper_inequality_witnesses(std::size_t d);

/// (I (x) A) X (I (x) A^dagger)
CMat conjugate_output(const CMat &x, const CMat &a);

} // namespace qfb
