#pragma once

// Small dense primal-dual interior-point solver for
//
//   min  <C, X> + c^T x
//   s.t. <A_i, X> + a_i^T x = b_i,   X PSD (real symmetric n x n),  x >= 0
//
// with dual  max b^T y  s.t.  C - sum y_i A_i = S PSD,  c - sum y_i a_i = s >= 0.
//
// Nesterov-Todd scaling, Mehrotra predictor-corrector, infeasible start, and a
// QR-factored Schur complement. Intended for n <= 64 and a few dozen
// equality constraints with full row rank.

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qfb::sdp {

struct Problem {
  int n = 0;      ///< PSD block order
  int n_lin = 0;  ///< number of nonnegative scalar variables
  std::vector<Eigen::MatrixXd> A;  ///< m symmetric n x n
  Eigen::MatrixXd A_lin;           ///< m x n_lin
  Eigen::VectorXd b;               ///< m
  Eigen::MatrixXd C;               ///< n x n symmetric
  Eigen::VectorXd c_lin;           ///< n_lin

  int m() const { return static_cast<int>(b.size()); }
};

struct Settings {
  double gap_tol = 1e-7;         ///< |primal - dual objective|
  double feasibility_tol = 1e-8; ///< relative residual norms
  int max_iterations = 200;
  double step_fraction = 0.95;
  /// re-solve in long double when the double run does not reach optimality
  bool extended_precision_retry = true;
};

enum class Status { Optimal, MaxIterations, Infeasible };
const char *to_string(Status s) noexcept;

struct Result {
  Status status = Status::MaxIterations;
  Eigen::MatrixXd X;
  Eigen::VectorXd x_lin;
  Eigen::VectorXd y;
  Eigen::MatrixXd S;
  Eigen::VectorXd s_lin;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;              ///< |primal - dual|
  double primal_residual = 0.0;  ///< ||b - A(X)|| / (1 + ||b||)
  double dual_residual = 0.0;    ///< ||C - S - A^T y|| / (1 + ||C||)
  int iterations = 0;
  bool extended_precision = false; ///< result comes from the long double retry
  std::string message;
};

Result solve(const Problem &problem, const Settings &settings = {});

} // namespace qfb::sdp
