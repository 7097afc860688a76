#pragma once

// Closed-form reference values used by several suites. These are written
// independently of the library code paths they check.

#include <cmath>
#include <complex>

namespace oracle {

/// Lower bound of the perfect tH = 1 PPBS filter probed with product states.
inline double ppbs_perfect_lower(double tv) {
  const double c = (2 * tv - 1) * (2 * tv - 1);
  const double den = 1 + 2 * tv + c;
  return 8 * tv * (1 + c) / (den * den);
}

/// Process fidelity between tH = 1 PPBS filters at intensity transmittances a, b.
inline double ppbs_fidelity(double ta, double tb) {
  const double ua = std::sqrt(ta), ub = std::sqrt(tb);
  const double overlap = 1 + 2 * ua * ub + (2 * ta - 1) * (2 * tb - 1);
  return overlap * overlap / ((1 + 2 * ta + (2 * ta - 1) * (2 * ta - 1)) * (1 + 2 * tb + (2 * tb - 1) * (2 * tb - 1)));
}

/// Entanglement fidelity |Tr(U^dagger V)|^2 / d^2 of two unitaries, or of two
/// general Kraus operators with the Hilbert-Schmidt normalization.
template <class M> double kraus_fidelity(const M &a, const M &b) {
  std::complex<double> tr = 0;
  double na = 0, nb = 0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      tr += std::conj(a(i, j)) * b(i, j);
      na += std::norm(a(i, j));
      nb += std::norm(b(i, j));
    }
  return std::norm(tr) / (na * nb);
}

} // namespace oracle
