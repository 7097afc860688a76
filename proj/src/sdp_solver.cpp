#include "qfb/sdp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

namespace qfb::sdp {

const char *to_string(Status s) noexcept {
  switch (s) {
  case Status::Optimal: return "optimal";
  case Status::MaxIterations: return "max-iter";
  case Status::Infeasible: return "infeasible";
  }
  return "unknown";
}

namespace {

template <class T> using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T> using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

template <class T> constexpr T kInf = std::numeric_limits<T>::infinity();

template <class T> T inner(const std::type_identity_t<Mat<T>> &a, const std::type_identity_t<Mat<T>> &b) {
  return a.cwiseProduct(b).sum();
}

template <class T> Mat<T> sym(const std::type_identity_t<Mat<T>> &a) { return T(0.5) * (a + a.transpose()); }

// Largest alpha with M + alpha dM PSD, given the Cholesky factor of M.
template <class T> T max_step_psd(const Eigen::LLT<Mat<T>> &chol, const Mat<T> &dm) {
  if (dm.size() == 0)
    return kInf<T>;
  const Mat<T> linv_dm = chol.matrixL().solve(dm);
  const Mat<T> t = chol.matrixL().solve(linv_dm.transpose());
  Eigen::SelfAdjointEigenSolver<Mat<T>> es(sym<T>(t), Eigen::EigenvaluesOnly);
  const T lmin = es.eigenvalues()(0);
  return lmin >= T(0) ? kInf<T> : T(-1) / lmin;
}

template <class T> T max_step_lin(const Vec<T> &v, const Vec<T> &dv) {
  T a = kInf<T>;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (dv(i) < 0.0)
      a = std::min(a, -v(i) / dv(i));
  return a;
}

template <class T> struct Direction {
  Mat<T> dX, dS;
  Vec<T> dx, ds, dy;
};

template <class T> struct TypedProblem {
  int n, n_lin;
  std::vector<Mat<T>> A;
  Mat<T> A_lin, C;
  Vec<T> b, c_lin;

  explicit TypedProblem(const Problem &p)
      : n(p.n), n_lin(p.n_lin), A_lin(p.A_lin.template cast<T>()), C(p.C.template cast<T>()), b(p.b.template cast<T>()),
        c_lin(p.c_lin.template cast<T>()) {
    A.reserve(p.A.size());
    for (const auto &a : p.A)
      A.push_back(a.template cast<T>());
  }
  int m() const { return static_cast<int>(b.size()); }
};

template <class T> class Solver {
  using MatrixXd = Mat<T>;
  using VectorXd = Vec<T>;
  using Dir = Direction<T>;

public:
  Solver(const Problem &p, const Settings &cfg) : p_(p), cfg_(cfg) {}

  Result run() {
    const int n = p_.n;
    const int nl = p_.n_lin;
    const int m = p_.m();
    Result res;

    const T b_norm = p_.b.norm();
    const T c_norm = std::sqrt(p_.C.squaredNorm() + p_.c_lin.squaredNorm());

    X_ = MatrixXd::Identity(n, n);
    S_ = MatrixXd::Identity(n, n);
    x_ = VectorXd::Ones(nl);
    s_ = VectorXd::Ones(nl);
    y_ = VectorXd::Zero(m);
    const T total_dim = static_cast<T>(n + nl);

    int stalled = 0;
    for (int it = 0; it <= cfg_.max_iterations; ++it) {
      res.iterations = it;
      compute_residuals();
      const T pobj = inner<T>(p_.C, X_) + p_.c_lin.dot(x_);
      const T dobj = p_.b.dot(y_);
      res.primal_objective = static_cast<double>(pobj);
      res.dual_objective = static_cast<double>(dobj);
      res.gap = static_cast<double>(std::abs(pobj - dobj));
      res.primal_residual = static_cast<double>(rp_.norm() / (T(1) + b_norm));
      res.dual_residual = static_cast<double>(std::sqrt(Rd_.squaredNorm() + rdl_.squaredNorm()) / (T(1) + c_norm));
      if (res.gap <= cfg_.gap_tol && res.primal_residual <= cfg_.feasibility_tol &&
          res.dual_residual <= cfg_.feasibility_tol) {
        res.status = Status::Optimal;
        break;
      }
      if (it == cfg_.max_iterations)
        break;
      if (y_.norm() > T(1e12)) {
        res.status = Status::Infeasible;
        res.message = "dual iterates diverge";
        break;
      }

      const T mu = (inner<T>(X_, S_) + x_.dot(s_)) / total_dim;
      if (!scale()) {
        res.message = "lost positive definiteness";
        break;
      }
      if (!factor_schur()) {
        res.message = "Schur complement is singular";
        break;
      }

      // predictor
      Dir aff = direction(-X_, -x_);
      T ap = std::min(T(1), step_primal(aff));
      T ad = std::min(T(1), step_dual(aff));
      const T mu_aff = (inner<T>(X_ + ap * aff.dX, S_ + ad * aff.dS) +
                             (x_ + ap * aff.dx).dot(s_ + ad * aff.ds)) / total_dim;
      const T ratio = std::clamp(mu_aff / mu, T(0), T(1));
      const T expon = std::max(T(1), T(3) * std::min(ap, ad) * std::min(ap, ad));
      const T sigma = std::pow(ratio, expon);

      // corrector in the scaled frame where X and S both equal diag(v)
      const MatrixXd dxh = Ginv_ * aff.dX * Ginv_.transpose();
      const MatrixXd dsh = G_.transpose() * aff.dS * G_;
      MatrixXd rhs = -sym<T>(dxh * dsh);
      for (int i = 0; i < n; ++i)
        rhs(i, i) += sigma * mu - v_(i) * v_(i);
      MatrixXd y_scaled(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          y_scaled(i, j) = T(2) * rhs(i, j) / (v_(i) + v_(j));
      const MatrixXd rc = G_ * y_scaled * G_.transpose();
      VectorXd rcl(nl);
      for (int l = 0; l < nl; ++l)
        rcl(l) = (sigma * mu - x_(l) * s_(l) - aff.dx(l) * aff.ds(l)) / s_(l);

      Dir dir = direction(sym<T>(rc), rcl);
      const T frac = static_cast<T>(cfg_.step_fraction);
      ap = std::min(T(1), frac * step_primal(dir));
      ad = std::min(T(1), frac * step_dual(dir));

      X_ = sym<T>(X_ + ap * dir.dX);
      x_ += ap * dir.dx;
      y_ += ad * dir.dy;
      S_ = sym<T>(S_ + ad * dir.dS);
      s_ += ad * dir.ds;

      stalled = (ap < 1e-10 && ad < 1e-10) ? stalled + 1 : 0;
      if (stalled >= 5) {
        res.message = "step lengths stalled";
        break;
      }
    }

    if (res.status != Status::Optimal && res.primal_residual > 1e-6) {
      res.status = Status::Infeasible;
      if (res.message.empty())
        res.message = "equality constraints cannot be met";
    }
    res.X = X_.template cast<double>();
    res.x_lin = x_.template cast<double>();
    res.y = y_.template cast<double>();
    res.S = S_.template cast<double>();
    res.s_lin = s_.template cast<double>();
    return res;
  }

private:
  void compute_residuals() {
    const int m = p_.m();
    rp_ = p_.b;
    for (int i = 0; i < m; ++i)
      rp_(i) -= inner<T>(p_.A[static_cast<std::size_t>(i)], X_);
    if (p_.n_lin > 0)
      rp_ -= p_.A_lin * x_;
    Rd_ = p_.C - S_;
    for (int i = 0; i < m; ++i)
      Rd_ -= y_(i) * p_.A[static_cast<std::size_t>(i)];
    rdl_ = p_.c_lin - s_;
    if (p_.n_lin > 0)
      rdl_ -= p_.A_lin.transpose() * y_;
  }

  // Nesterov-Todd scaling W = G G^T with G^{-1} X G^{-T} = G^T S G = diag(v).
  bool scale() {
    cholX_.compute(X_);
    cholS_.compute(S_);
    if (cholX_.info() != Eigen::Success || cholS_.info() != Eigen::Success)
      return false;
    const MatrixXd L = cholX_.matrixL();
    const MatrixXd mid = sym<T>(L.transpose() * S_ * L);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(mid);
    VectorXd d = es.eigenvalues();
    if (d.minCoeff() <= 0.0)
      return false;
    const MatrixXd &Q = es.eigenvectors();
    const VectorXd d_m14 = d.array().pow(T(-0.25));
    const VectorXd d_p14 = d.array().pow(T(0.25));
    G_ = L * Q * d_m14.asDiagonal();
    const MatrixXd Linv = L.template triangularView<Eigen::Lower>().solve(MatrixXd::Identity(p_.n, p_.n));
    Ginv_ = d_p14.asDiagonal() * Q.transpose() * Linv;
    W_ = sym<T>(G_ * G_.transpose());
    v_ = d.cwiseSqrt();
    if (p_.n_lin > 0)
      D_ = x_.cwiseQuotient(s_);
    return true;
  }

  // The Schur matrix H = B^T B with B_j = vec(G^T A_j G) (plus sqrt(D)-scaled
  // linear rows). Factoring B by QR avoids squaring its condition number.
  bool factor_schur() {
    const int m = p_.m();
    const int n = p_.n;
    const int nl = p_.n_lin;
    WAW_.resize(static_cast<std::size_t>(m));
    MatrixXd B(n * n + nl, m);
    const VectorXd sqrt_d = nl > 0 ? VectorXd(D_.cwiseSqrt()) : VectorXd();
    for (int j = 0; j < m; ++j) {
      const MatrixXd &a = p_.A[static_cast<std::size_t>(j)];
      const MatrixXd gag = G_.transpose() * a * G_;
      WAW_[static_cast<std::size_t>(j)] = G_ * gag * G_.transpose();
      B.col(j).head(n * n) = Eigen::Map<const VectorXd>(gag.data(), n * n);
      if (nl > 0)
        B.col(j).tail(nl) = p_.A_lin.row(j).transpose().cwiseProduct(sqrt_d);
    }
    Eigen::HouseholderQR<MatrixXd> qr(B);
    R_ = qr.matrixQR().topRows(m).template triangularView<Eigen::Upper>();
    const T rmax = R_.diagonal().cwiseAbs().maxCoeff();
    const T floor = T(5) * std::numeric_limits<T>::epsilon() * rmax;
    if (!(rmax > 0.0) || !std::isfinite(rmax))
      return false;
    // tiny diagonal floor rescues near-singular systems late in the run
    for (int i = 0; i < m; ++i)
      if (std::abs(R_(i, i)) < floor)
        R_(i, i) = R_(i, i) < T(0) ? -floor : floor;
    return true;
  }

  VectorXd schur_solve(const VectorXd &rhs) const {
    const VectorXd t = R_.transpose().template triangularView<Eigen::Lower>().solve(rhs);
    return R_.template triangularView<Eigen::Upper>().solve(t);
  }

  Dir direction(const MatrixXd &Rc, const VectorXd &rcl) const {
    const int m = p_.m();
    Dir dir;
    const MatrixXd base = Rc - W_ * Rd_ * W_;
    VectorXd rhs = rp_;
    for (int i = 0; i < m; ++i)
      rhs(i) -= inner<T>(p_.A[static_cast<std::size_t>(i)], base);
    VectorXd lin_base;
    if (p_.n_lin > 0) {
      lin_base = rcl - D_.cwiseProduct(rdl_);
      rhs -= p_.A_lin * lin_base;
    }
    dir.dy = schur_solve(rhs);
    dir.dS = Rd_;
    for (int i = 0; i < m; ++i)
      dir.dS -= dir.dy(i) * p_.A[static_cast<std::size_t>(i)];
    dir.dS = sym<T>(dir.dS);
    dir.dX = base;
    for (int j = 0; j < m; ++j)
      dir.dX += dir.dy(j) * WAW_[static_cast<std::size_t>(j)];
    dir.dX = sym<T>(dir.dX);
    if (p_.n_lin > 0) {
      dir.ds = rdl_ - p_.A_lin.transpose() * dir.dy;
      dir.dx = rcl - D_.cwiseProduct(dir.ds);
    } else {
      dir.ds = VectorXd::Zero(0);
      dir.dx = VectorXd::Zero(0);
    }
    return dir;
  }

  T step_primal(const Dir &d) const {
    return std::min(max_step_psd(cholX_, d.dX), max_step_lin(x_, d.dx));
  }
  T step_dual(const Dir &d) const {
    return std::min(max_step_psd(cholS_, d.dS), max_step_lin(s_, d.ds));
  }

  const TypedProblem<T> p_;
  const Settings &cfg_;

  MatrixXd X_, S_;
  VectorXd x_, s_, y_;
  VectorXd rp_, rdl_;
  MatrixXd Rd_;

  Eigen::LLT<MatrixXd> cholX_, cholS_;
  MatrixXd G_, Ginv_, W_;
  VectorXd v_, D_;
  std::vector<MatrixXd> WAW_;
  MatrixXd R_;
};

} // namespace

Result solve(const Problem &problem, const Settings &settings) {
  if (problem.n <= 0 || static_cast<int>(problem.A.size()) != problem.m())
    throw std::invalid_argument("sdp::solve: inconsistent problem dimensions");
  if (problem.n_lin > 0 && (problem.A_lin.rows() != problem.m() || problem.A_lin.cols() != problem.n_lin))
    throw std::invalid_argument("sdp::solve: inconsistent linear block");
  Result res = Solver<double>(problem, settings).run();
  if (res.status == Status::Optimal || !settings.extended_precision_retry)
    return res;
  // near-degenerate programs can stall in double; retry with a wider mantissa
  Result wide = Solver<long double>(problem, settings).run();
  wide.extended_precision = true;
  const bool better = wide.status == Status::Optimal ||
                      (wide.status == res.status && wide.gap + wide.primal_residual < res.gap + res.primal_residual);
  return better ? wide : res;
}

} // namespace qfb::sdp
