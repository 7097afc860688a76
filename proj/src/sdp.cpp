#include "qfb/sdp.hpp"

#include <cmath>

namespace qfb {

namespace {

constexpr double kIndependenceTol = 1e-8;
constexpr double kZeroFrequency = 1e-13;

RVec flatten(const CMat &m) {
  const Eigen::Index n = m.size();
  RVec v(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = m.data()[i].real();
    v(n + i) = m.data()[i].imag();
  }
  return v;
}

// Incrementally orthonormalized span of vectorized Hermitian matrices.
class SpanTracker {
public:
  explicit SpanTracker(const CMat &seed) { add(flatten(seed)); }

  bool add_if_independent(const CMat &m) { return add(flatten(m)); }

private:
  bool add(RVec v) {
    const double norm0 = v.norm();
    if (!(norm0 > 0.0))
      return false;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto &q : basis_)
        v -= q.dot(v) * q;
    const double n = v.norm();
    if (n <= kIndependenceTol * norm0)
      return false;
    basis_.push_back(v / n);
    return true;
  }

  std::vector<RVec> basis_;
};

// Real symmetric representation [[Re H, -Im H], [Im H, Re H]] scaled by 1/2,
// so that <embed(H), embed_full(A)> = Re Tr(H A).
Eigen::MatrixXd embed_half(const CMat &h) {
  const Eigen::Index n = h.rows();
  Eigen::MatrixXd out(2 * n, 2 * n);
  const Eigen::MatrixXd re = 0.5 * (h + h.adjoint()).real();
  const Eigen::MatrixXd im = 0.5 * (h + h.adjoint()).imag();
  out.topLeftCorner(n, n) = 0.5 * re;
  out.topRightCorner(n, n) = -0.5 * im;
  out.bottomLeftCorner(n, n) = 0.5 * im;
  out.bottomRightCorner(n, n) = 0.5 * re;
  return out;
}

CMat unembed(const Eigen::MatrixXd &x) {
  const Eigen::Index n = x.rows() / 2;
  const Eigen::MatrixXd re = 0.5 * (x.topLeftCorner(n, n) + x.bottomRightCorner(n, n));
  const Eigen::MatrixXd im = 0.5 * (x.bottomLeftCorner(n, n) - x.topRightCorner(n, n));
  CMat a(n, n);
  a.real() = re;
  a.imag() = im;
  return 0.5 * (a + a.adjoint());
}

double trace_product(const CMat &a, const CMat &b) { return (a.cwiseProduct(b.transpose())).sum().real(); }

bool is_psd(const CMat &m) { return hermitian_eigenvalues(m)(0) >= -1e-12; }

} // namespace

ConstraintSet assemble_constraints(const std::vector<MeasurementRecord> &records) {
  if (records.empty())
    throw Error(ErrorCode::InvalidArgument, "no measurement records");
  ConstraintSet set;
  set.d = records.front().bases.empty() ? 0 : records.front().bases.front().dim();
  if (set.d == 0)
    throw Error(ErrorCode::InvalidArgument, "empty measurement record");
  const auto n = static_cast<Eigen::Index>(set.d * set.d);
  SpanTracker span(CMat::Identity(n, n));

  double grand_total = 0.0;
  for (const auto &rec : records) {
    if (rec.bases.size() != rec.counts.size())
      throw Error(ErrorCode::Schema, "record has mismatched bases and counts");
    for (std::size_t b = 0; b < rec.bases.size(); ++b) {
      const ProbeBasis &pb = rec.bases[b];
      const RMat &f = rec.counts[b];
      if (pb.dim() != set.d)
        throw Error(ErrorCode::DimensionMismatch, "records of different dimension");
      const double total = f.sum();
      if (!(total > 0.0))
        throw Error(ErrorCode::InsufficientData, "basis '" + pb.label + "' has an all-zero record");
      grand_total += total;
      for (std::size_t j = 0; j < set.d; ++j) {
        const CVec in = pb.probes.vec(j).conjugate();
        for (std::size_t k = 0; k < set.d; ++k) {
          const CVec c = kron(in, pb.measurements[j].vec(k));
          CMat m = c * c.adjoint();
          if (!span.add_if_independent(m))
            continue;
          set.constraints.push_back(Constraint{
              std::move(m), f(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) / total,
              ConstraintOrigin{pb.label, j, k}});
        }
      }
    }
  }
  if (!(grand_total > 0.0))
    throw Error(ErrorCode::InsufficientData, "all-zero record");
  return set;
}

namespace {

struct ReducedProblem {
  CMat face; // n x r isometry
  std::vector<CMat> M;
  std::vector<double> r;
  CMat objective;
};

// Restricts the program to the face of the PSD cone compatible with the
// zero-frequency outcomes and drops constraints that became dependent.
ReducedProblem reduce_to_face(const ConstraintSet &cs, const CMat &objective, bool allow_face_reduction) {
  const auto n = static_cast<Eigen::Index>(cs.d * cs.d);
  CMat face = CMat::Identity(n, n);
  std::vector<const Constraint *> active;
  if (allow_face_reduction) {
    CMat zero_sum = CMat::Zero(n, n);
    bool any = false;
    for (const auto &c : cs.constraints) {
      if (c.r <= kZeroFrequency && is_psd(c.M)) {
        zero_sum += c.M;
        any = true;
      } else {
        active.push_back(&c);
      }
    }
    if (any) {
      Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (zero_sum + zero_sum.adjoint()));
      const double cut = 1e-10 * std::max(1.0, es.eigenvalues().maxCoeff());
      Eigen::Index keep = 0;
      while (keep < n && es.eigenvalues()(keep) <= cut)
        ++keep;
      face = es.eigenvectors().leftCols(keep);
    }
  } else {
    for (const auto &c : cs.constraints)
      active.push_back(&c);
  }

  ReducedProblem rp{face, {}, {}, face.adjoint() * objective * face};
  if (face.cols() == 0)
    return rp;
  SpanTracker span(CMat::Identity(face.cols(), face.cols()));
  for (const Constraint *c : active) {
    CMat m = face.adjoint() * c->M * face;
    m = 0.5 * (m + m.adjoint()).eval();
    if (!span.add_if_independent(m))
      continue;
    rp.M.push_back(std::move(m));
    rp.r.push_back(c->r);
  }
  return rp;
}

sdp::Problem build_problem(const ReducedProblem &rp, double sign, double epsilon) {
  const auto r = static_cast<int>(rp.face.cols());
  const int data = static_cast<int>(rp.M.size());
  sdp::Problem p;
  p.n = 2 * r;
  const bool slack = epsilon > 0.0;
  p.n_lin = slack ? 2 * data : 0;
  const int m = 1 + (slack ? 2 * data : data);
  p.b.resize(m);
  p.A.reserve(static_cast<std::size_t>(m));
  p.A_lin = Eigen::MatrixXd::Zero(m, p.n_lin);
  p.c_lin = Eigen::VectorXd::Zero(p.n_lin);

  p.A.push_back(embed_half(CMat::Identity(r, r)));
  p.b(0) = 1.0;
  int row = 1;
  for (int i = 0; i < data; ++i) {
    const Eigen::MatrixXd a = embed_half(rp.M[static_cast<std::size_t>(i)]);
    const double ri = rp.r[static_cast<std::size_t>(i)];
    if (!slack) {
      p.A.push_back(a);
      p.b(row++) = ri;
      continue;
    }
    // <A, X> + s+ = r + eps ;  <A, X> - s- = r - eps
    p.A.push_back(a);
    p.A_lin(row, 2 * i) = 1.0;
    p.b(row++) = ri + epsilon;
    p.A.push_back(a);
    p.A_lin(row, 2 * i + 1) = -1.0;
    p.b(row++) = ri - epsilon;
  }
  p.C = sign * embed_half(rp.objective);
  return p;
}

SdpSolution finish(const sdp::Result &res, const ReducedProblem &rp, const ConstraintSet &cs,
                   const CMat &objective, double sign) {
  SdpSolution sol;
  sol.status = res.status;
  sol.iterations = res.iterations;
  sol.gap = res.gap;
  sol.primal_residual = res.primal_residual;
  sol.message = res.message;
  sol.face_dim = static_cast<std::size_t>(rp.face.cols());
  const CMat reduced = unembed(res.X);
  sol.A = rp.face * reduced * rp.face.adjoint();
  sol.value = sign * res.primal_objective;
  (void)objective;
  double worst = std::abs(sol.A.trace().real() - 1.0);
  for (const auto &c : cs.constraints)
    worst = std::max(worst, std::abs(trace_product(sol.A, c.M) - c.r));
  sol.max_violation = worst;
  return sol;
}

} // namespace

SdpBounds solve_bounds(const ConstraintSet &constraints, const QuantumFilter &k, const SdpOptions &options) {
  if (constraints.d != k.dim())
    throw Error(ErrorCode::DimensionMismatch, "constraint set and target filter differ in dimension");
  if (options.epsilon < 0.0)
    throw Error(ErrorCode::InvalidArgument, "negative constraint slack");

  const ChoiMatrix target = k.choi();
  const CMat objective = target.matrix() / target.trace();
  const ReducedProblem rp = reduce_to_face(constraints, objective, options.epsilon == 0.0);

  SdpBounds out;
  if (rp.face.cols() == 0) {
    for (SdpSolution *s : {&out.lower, &out.upper}) {
      s->status = sdp::Status::Infeasible;
      s->message = "zero-frequency outcomes exclude every channel";
      s->A = CMat::Zero(static_cast<Eigen::Index>(k.dim() * k.dim()), static_cast<Eigen::Index>(k.dim() * k.dim()));
    }
    return out;
  }

  const sdp::Problem lower = build_problem(rp, +1.0, options.epsilon);
  out.lower = finish(sdp::solve(lower, options.solver), rp, constraints, objective, +1.0);
  const sdp::Problem upper = build_problem(rp, -1.0, options.epsilon);
  out.upper = finish(sdp::solve(upper, options.solver), rp, constraints, objective, -1.0);
  return out;
}

} // namespace qfb
