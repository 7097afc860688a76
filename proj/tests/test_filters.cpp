#include "helpers.hpp"

#include <cmath>

#include "oracles.hpp"
#include "qfb/filters.hpp"

using namespace qfb;

TEST_SUITE("filters") {

TEST_CASE("singular decomposition reconstructs K for 1000 random filters") {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const std::size_t d = 2 + seed % 4;
    const QuantumFilter k = random_filter(d, seed);
    const RVec s = k.singular_values();
    CMat rebuilt = CMat::Zero(Eigen::Index(d), Eigen::Index(d));
    for (std::size_t j = 0; j < d; ++j)
      rebuilt += s(Eigen::Index(j)) * k.left().vec(j) * k.right().vec(j).adjoint();
    REQUIRE(th::max_abs(rebuilt - k.kraus()) < 1e-10);
    for (Eigen::Index j = 1; j < s.size(); ++j)
      REQUIRE(s(j) <= s(j - 1) + 1e-15);
    REQUIRE(s(0) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("small singular values keep the left basis orthonormal") {
  // this seed draws a filter with smallest singular value ~1e-3
  const QuantumFilter k = random_filter(4, 13202129336327177540ull);
  CHECK(k.singular_values()(3) < 2e-3);
  CHECK(th::max_abs(k.left().matrix().adjoint() * k.left().matrix() - CMat::Identity(4, 4)) < 1e-12);
}

TEST_CASE("random filters are reproducible from the seed") {
  CHECK(th::max_abs(random_filter(4, 42).kraus() - random_filter(4, 42).kraus()) == 0.0);
  CHECK(th::max_abs(random_filter(4, 42).kraus() - random_filter(4, 43).kraus()) > 1e-3);
  const CMat u = random_unitary(5, 3);
  CHECK(th::max_abs(u.adjoint() * u - CMat::Identity(5, 5)) < 1e-12);
}

TEST_CASE("PPBS filter with tH = 1") {
  const double t = 0.6;
  const QuantumFilter k = ppbs_filter(1.0, t);
  CMat expect = CMat::Zero(4, 4);
  expect.diagonal() << 1.0, t, t, 2 * t * t - 1;
  CHECK(th::max_abs(k.kraus() - expect) < 1e-15);
  CHECK(th::max_abs(ppbs_filter_intensity(0.36).kraus() - expect) < 1e-15);

  // T_V = 1/2 filters |11> out completely
  const QuantumFilter half = ppbs_filter_intensity(0.5);
  CVec one_one = CVec::Zero(4);
  one_one(3) = 1.0;
  CHECK_FALSE(ideal_output(half, PureState(one_one)).has_value());
  CHECK(half.weight(one_one) < 1e-15);
}

TEST_CASE("filter fidelity between PPBS settings") {
  for (double a : {0.1, 0.25, 0.5, 0.75, 1.0})
    for (double b : {0.05, 0.3, 0.5, 0.9, 1.0})
      CHECK(filter_fidelity(ppbs_filter_intensity(a), ppbs_filter_intensity(b)) ==
            doctest::Approx(oracle::ppbs_fidelity(a, b)).epsilon(1e-12));
  const double expect = (1 + std::sqrt(2.0)) * (1 + std::sqrt(2.0)) / 8;
  CHECK(filter_fidelity(ppbs_filter_intensity(0.5), ppbs_filter_intensity(1.0)) ==
        doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("filter fidelity agrees with the Choi process fidelity") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const QuantumFilter a = random_filter(3, seed), b = random_filter(3, seed + 100);
    CHECK(filter_fidelity(a, b) == doctest::Approx(process_fidelity(a.choi(), b.choi())).epsilon(1e-12));
    CHECK(filter_fidelity(a, b) == doctest::Approx(oracle::kraus_fidelity(a.kraus(), b.kraus())).epsilon(1e-12));
  }
}

TEST_CASE("degenerate spectra get the computational basis") {
  const QuantumFilter id(CMat::Identity(3, 3));
  CHECK(th::max_abs(id.right().matrix() - CMat::Identity(3, 3)) < 1e-15);
  CHECK(th::max_abs(id.left().matrix() - CMat::Identity(3, 3)) < 1e-15);
}

TEST_CASE("mixture channel") {
  const QuantumFilter k = ppbs_filter_intensity(0.5), kp = random_filter(4, 1);
  const MixtureChannel m = mixture_channel(k, kp, 1.0);
  CHECK(th::max_abs(m.choi.matrix() - k.choi().matrix()) < 1e-15);
  const MixtureChannel h = mixture_channel(k, kp, 0.3);
  CHECK(th::max_abs(h.choi.matrix() - (0.3 * k.choi().matrix() + 0.7 * kp.choi().matrix())) < 1e-15);
  th::check_code([&] { mixture_channel(k, kp, 1.5); }, ErrorCode::InvalidArgument);
}

TEST_CASE("filter contracts") {
  th::check_code([] { QuantumFilter k(2.0 * CMat::Identity(2, 2)); }, ErrorCode::ContractViolation);
  th::check_code([] { QuantumFilter k(CMat::Identity(2, 3)); }, ErrorCode::InvalidDimension);
  th::check_code([] { ppbs_filter_intensity(1.2); }, ErrorCode::InvalidArgument);
  th::check_code([] { filter_fidelity(QuantumFilter(CMat::Zero(2, 2)), QuantumFilter(CMat::Identity(2, 2))); },
                 ErrorCode::DegenerateChannel);
}

}
