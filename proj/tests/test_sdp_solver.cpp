#include <random>
#include <stdexcept>

#include <doctest.h>

#include "qfb/sdp_solver.hpp"

using namespace qfb::sdp;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_SUITE("sdp_solver") {

TEST_CASE("minimum eigenvalue as a trace-one program") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int n = 2; n <= 8; ++n) {
    MatrixXd c(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        c(i, j) = g(rng);
    c = 0.5 * (c + c.transpose()).eval();
    Problem p;
    p.n = n;
    p.A = {MatrixXd::Identity(n, n)};
    p.b = VectorXd::Constant(1, 1.0);
    p.C = c;
    const Result r = solve(p);
    const double lmin = Eigen::SelfAdjointEigenSolver<MatrixXd>(c).eigenvalues()(0);
    CHECK(r.status == Status::Optimal);
    CHECK(r.primal_objective == doctest::Approx(lmin).epsilon(1e-7));
    CHECK(r.gap <= 1e-7);
  }
}

TEST_CASE("extended precision retry") {
  const MatrixXd c = (MatrixXd(3, 3) << 2, 1, 0, 1, 3, 1, 0, 1, 4).finished();
  Problem p;
  p.n = 3;
  p.A = {MatrixXd::Identity(3, 3)};
  p.b = VectorXd::Constant(1, 1.0);
  p.C = c;
  const double lmin = Eigen::SelfAdjointEigenSolver<MatrixXd>(c).eigenvalues()(0);

  const Result plain = solve(p);
  CHECK(plain.status == Status::Optimal);
  CHECK_FALSE(plain.extended_precision);

  // a zero gap tolerance is out of reach in double, so the wide run is tried
  Settings strict;
  strict.gap_tol = 0.0;
  strict.max_iterations = 40;
  const Result wide = solve(p, strict);
  CHECK(wide.extended_precision);
  CHECK(wide.primal_objective == doctest::Approx(lmin).epsilon(1e-12));

  strict.extended_precision_retry = false;
  CHECK_FALSE(solve(p, strict).extended_precision);
}

TEST_CASE("linear block") {
  // min 3 X + x1 + 2 x2  s.t.  X + x1 + x2 = 1
  Problem p;
  p.n = 1;
  p.n_lin = 2;
  p.A = {MatrixXd::Ones(1, 1)};
  p.A_lin = MatrixXd::Ones(1, 2);
  p.b = VectorXd::Ones(1);
  p.C = MatrixXd::Constant(1, 1, 3.0);
  p.c_lin = (VectorXd(2) << 1.0, 2.0).finished();
  const Result r = solve(p);
  CHECK(r.status == Status::Optimal);
  CHECK(r.primal_objective == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(r.x_lin(0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("known two-constraint program") {
  // min X_11 + X_22 s.t. X_12 = 1: optimum 2 at X = [[1,1],[1,1]]
  Problem p;
  p.n = 2;
  MatrixXd a(2, 2);
  a << 0, 0.5, 0.5, 0;
  p.A = {a};
  p.b = VectorXd::Ones(1);
  p.C = MatrixXd::Identity(2, 2);
  const Result r = solve(p);
  CHECK(r.status == Status::Optimal);
  CHECK(r.primal_objective == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(r.dual_objective == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("infeasible equalities are reported") {
  Problem p;
  p.n = 2;
  MatrixXd a1 = MatrixXd::Zero(2, 2), a2 = MatrixXd::Zero(2, 2);
  a1(0, 0) = 1;
  a2(1, 1) = 1;
  p.A = {a1, a2};
  p.b = (VectorXd(2) << 1.0, -1.0).finished();
  p.C = MatrixXd::Identity(2, 2);
  CHECK(solve(p).status == Status::Infeasible);
}

TEST_CASE("dimension checks") {
  Problem p;
  p.n = 2;
  p.b = VectorXd::Ones(1);
  p.C = MatrixXd::Identity(2, 2);
  CHECK_THROWS_AS(solve(p), std::invalid_argument);
  CHECK(std::string(to_string(Status::MaxIterations)) == "max-iter");
}

}
