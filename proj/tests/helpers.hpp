#pragma once

#include <random>

#include <doctest.h>

#include "qfb/quantum.hpp"

namespace th {

inline qfb::CVec random_vector(std::size_t d, std::mt19937_64 &rng) {
  std::normal_distribution<double> g;
  qfb::CVec v(static_cast<Eigen::Index>(d));
  for (auto &x : v)
    x = {g(rng), g(rng)};
  return v;
}

inline qfb::PureState random_state(std::size_t d, std::mt19937_64 &rng) {
  return qfb::PureState::normalized(random_vector(d, rng));
}

inline qfb::Basis random_basis(std::size_t d, std::mt19937_64 &rng) {
  qfb::CMat g(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (Eigen::Index c = 0; c < g.cols(); ++c)
    g.col(c) = random_vector(d, rng);
  Eigen::HouseholderQR<qfb::CMat> qr(g);
  return qfb::Basis(qfb::CMat(qr.householderQ()));
}

inline double max_abs(const qfb::CMat &m) { return m.cwiseAbs().maxCoeff(); }

template <class F> void check_code(F &&f, qfb::ErrorCode code) {
  try {
    f();
    FAIL("expected qfb::Error");
  } catch (const qfb::Error &e) {
    CHECK_MESSAGE(e.code() == code, "got ", qfb::to_string(e.code()), ": ", e.what());
  }
}

} // namespace th
