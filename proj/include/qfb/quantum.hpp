#pragma once

// Dense complex linear algebra and the Choi-Jamiolkowski machinery.
//
// Conventions used throughout the library:
//  * bipartite spaces are ordered input (x) output, so the composite index of
//    |i>|a> is i*d + a;
//  * transposition ("^T") is always taken in the computational basis, which
//    is also the basis defining the maximally entangled state |omega>;
//  * basis vectors are stored 0-based, but every phase formula uses the
//    1-based labels j, k = 1..d.

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "qfb/error.hpp"

namespace qfb {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr double kCheckTol = 1e-10;
inline constexpr double kConstructTol = 1e-12;

/// Unit vector in C^d.
class PureState {
public:
  /// Throws InvariantViolation unless | ||v|| - 1 | <= 1e-10.
  explicit PureState(CVec amplitudes);

  /// Rescales `v` to unit norm; throws InvalidArgument for a zero vector.
  static PureState normalized(const CVec &v);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(amps_.size()); }
  const CVec &vec() const noexcept { return amps_; }
  cplx operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }

  /// |psi><psi|
  CMat projector() const { return amps_ * amps_.adjoint(); }

private:
  CVec amps_;
};

/// Ordered orthonormal basis, stored as the columns of a unitary matrix.
class Basis {
public:
  /// Throws InvariantViolation if the columns are not orthonormal (1e-10).
  explicit Basis(CMat columns);
  explicit Basis(const std::vector<PureState> &states);

  static Basis computational(std::size_t d);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(cols_.cols()); }
  std::size_t size() const noexcept { return dim(); }
  const CMat &matrix() const noexcept { return cols_; }
  CVec vec(std::size_t i) const { return cols_.col(static_cast<Eigen::Index>(i)); }
  PureState state(std::size_t i) const { return PureState(vec(i)); }

private:
  CMat cols_;
};

/// Positive-semidefinite d^2 x d^2 matrix representing a (possibly
/// trace-decreasing) channel on C^d.
class ChoiMatrix {
public:
  /// Validates squareness, d^2 size, Hermiticity (1e-10) and PSD (-1e-9).
  explicit ChoiMatrix(CMat chi);

  std::size_t dim() const noexcept { return d_; }
  const CMat &matrix() const noexcept { return chi_; }
  double trace() const { return chi_.trace().real(); }

  ChoiMatrix operator+(const ChoiMatrix &other) const;
  friend ChoiMatrix operator*(double s, const ChoiMatrix &c);

private:
  struct Unchecked {};
  ChoiMatrix(CMat chi, std::size_t d, Unchecked) : chi_(std::move(chi)), d_(d) {}

  CMat chi_;
  std::size_t d_;
};

// ---------------------------------------------------------------------------
// small helpers

CMat kron(const CMat &a, const CMat &b);
CVec kron(const CVec &a, const CVec &b);

/// max_ij |A - A^dagger|_ij
double hermiticity_defect(const CMat &a);

/// Eigenvalues (ascending) of a Hermitian matrix; the input is symmetrized first.
RVec hermitian_eigenvalues(const CMat &a);

double spectral_norm(const CMat &a);

/// Completes `first` to an orthonormal basis by Gram-Schmidt over the
/// computational vectors |0>, |1>, ... (candidates with residual norm below
/// 1e-8 are skipped). `first` becomes element 0.
Basis complete_basis(const PureState &first);

/// Orthonormal basis of span(columns of `vectors`) extended to the full space
/// by the same deterministic Gram-Schmidt procedure.
Basis complete_basis(const CMat &leading_columns);

// ---------------------------------------------------------------------------
// operations

/// (1/sqrt d) sum_j |j>|j>, as a vector of dimension d^2.
PureState maximally_entangled_state(std::size_t d);

/// f_k = (1/sqrt d) sum_j exp(i 2 pi j k / d) e_j with 1-based j, k.
Basis fourier_basis(const Basis &e);

/// {H^{(x)n} |k_1...k_n>} in binary order of k.
Basis hadamard_product_basis(std::size_t n);

/// |omega_jk> = (Z^{j-1} W^{k-1} (x) I)|omega>, returned in j-major order
/// (index (j-1)*d + (k-1)). Z is the cyclic shift |e_{j+1}><e_j|, W the clock
/// diag(exp(i 2 pi j / d)).
std::vector<PureState> bell_mub_basis(std::size_t d);

/// sum_i (I (x) K_i)|omega><omega|(I (x) K_i^dagger)
ChoiMatrix choi_of_kraus(const std::vector<CMat> &kraus);

/// Tr(chi chi_F) / (Tr chi Tr chi_F).
double process_fidelity(const ChoiMatrix &chi, const ChoiMatrix &chi_target);

/// Unnormalized output d Tr_in(chi (|psi><psi|)^T (x) I).
CMat output_state(const ChoiMatrix &chi, const PureState &psi);

} // namespace qfb
