// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "qfb/bounds.hpp"
#include "qfb/certificates.hpp"
#include "qfb/experiments.hpp"
#include "qfb/sdp.hpp"

using namespace qfb;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char *name, double time_limit_s, const std::function<Outcome()> &body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o{false, ""};
  try {
    o = body();
  } catch (const std::exception &e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs <= time_limit_s;
  const bool pass = o.pass && in_time;
  if (!pass)
    ++failures;
  std::printf("[%s] %d %s: %s; %.2f s (limit %.0f s)%s\n", pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs,
              time_limit_s, in_time ? "" : " TIMEOUT");
  std::fflush(stdout);
}

std::string fmt(const char *f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Average output fidelity of unitary U over basis b for a mixture of unitaries.
double average_fidelity(const CMat &u, const std::vector<std::pair<double, CMat>> &mix, const Basis &b) {
  double sum = 0.0;
  for (std::size_t j = 0; j < b.dim(); ++j) {
    const CVec ideal = u * b.vec(j);
    for (const auto &[w, v] : mix)
      sum += w * std::norm(ideal.dot(v * b.vec(j)));
  }
  return sum / double(b.dim());
}

MeasurementRecord only_basis(const MeasurementRecord &rec, std::size_t b) {
  MeasurementRecord out;
  out.mode = rec.mode;
  out.bases = {rec.bases[b]};
  out.counts = {rec.counts[b]};
  return out;
}

Outcome eigenprobe_tightness() {
  double dl = 0, de = 0, df = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const QuantumFilter k = random_filter(2 + i % 3, 1000 + i);
    const BoundsReport r = analyze(k, reduce(run_ensemble(k.choi(), eigen_ensemble(k))));
    dl = std::max(dl, std::abs(r.lower - 1));
    de = std::max(de, std::abs(r.upper_e - 1));
    df = std::max(df, std::abs(r.upper_f - 1));
  }
  return {dl <= 1e-9 && de <= 1e-9 && df <= 1e-9,
          "max |lower-1| " + fmt("%.2e", dl) + ", max |upper_e-1| " + fmt("%.2e", de) + ", max |upper_f-1| " +
              fmt("%.2e", df)};
}

Outcome fig1_tightness_points() {
  const auto rows = run_fig1(parse_grid("0.05:1.0:0.01"));
  bool ok = rows.size() == 96;
  double at_tight = 0, worst_gap = 0, max_elsewhere = -1e9;
  for (const auto &r : rows) {
    const double lower = r.report.lower;
    if (r.tv == 0.5 || r.tv == 1.0) {
      at_tight = std::max(at_tight, std::abs(lower - 1));
    } else {
      max_elsewhere = std::max(max_elsewhere, lower);
      ok = ok && lower < 1.0;
    }
    if (r.tv > 0.5)
      worst_gap = std::max(worst_gap, 1 - lower);
  }
  ok = ok && at_tight <= 1e-9 && worst_gap <= 0.01;
  return {ok, std::to_string(rows.size()) + " points, |lower-1| at {0.5,1} " + fmt("%.2e", at_tight) +
                  ", max lower elsewhere " + fmt("%.12f", max_elsewhere) + ", max gap on (0.5,1] " +
                  fmt("%.5f", worst_gap)};
}

Outcome sdp_tightness() {
  double dev = 0, gap = 0;
  bool optimal = true;
  for (double tv : {0.3, 0.5, 0.75}) {
    const QuantumFilter k = ppbs_filter_intensity(tv);
    for (const ProbeEnsemble &ens : {product_ensemble(k), eigen_ensemble(k)}) {
      const SdpBounds b = solve_bounds(assemble_constraints({run_ensemble(k.choi(), ens)}), k);
      for (const SdpSolution *s : {&b.lower, &b.upper}) {
        dev = std::max(dev, std::abs(s->value - 1));
        gap = std::max(gap, s->gap);
        optimal = optimal && s->status == sdp::Status::Optimal;
      }
    }
  }
  return {optimal && dev <= 1e-6 && gap <= 1e-7,
          "max |F-1| " + fmt("%.2e", dev) + ", max duality gap " + fmt("%.2e", gap) +
              (optimal ? ", all optimal" : ", NOT all optimal")};
}

Outcome sandwich_suite() {
  std::size_t violations = 0, non_optimal = 0, rows_total = 0;
  double worst = 0;
  for (ProbeChoice choice : {ProbeChoice::Product, ProbeChoice::Eigen}) {
    Fig3Config cfg;
    cfg.count = 1000;
    cfg.probes = choice;
    cfg.seed = 20240601;
    for (const Fig3Row &r : run_fig3(cfg)) {
      ++rows_total;
      const double slack = std::min({r.sdp_lower - r.report.lower, r.true_fidelity - r.sdp_lower,
                                     r.sdp_upper - r.true_fidelity, r.report.upper() - r.sdp_upper});
      worst = std::min(worst, slack);
      if (!r.sandwich_holds(1e-6))
        ++violations;
      if (r.status_lower != sdp::Status::Optimal || r.status_upper != sdp::Status::Optimal)
        ++non_optimal;
    }
  }
  return {violations == 0 && non_optimal == 0,
          std::to_string(rows_total) + " channels (product + eigen probes), " + std::to_string(violations) +
              " violations, " + std::to_string(non_optimal) + " non-optimal solves, most negative slack " +
              fmt("%.2e", worst)};
}

Outcome constraint_rank() {
  std::size_t bases = 0, wrong = 0;
  auto check = [&](const ChoiMatrix &chi, const ProbeEnsemble &ens) {
    const MeasurementRecord rec = run_ensemble(chi, ens);
    for (std::size_t b = 0; b < rec.bases.size(); ++b) {
      ++bases;
      if (assemble_constraints({only_basis(rec, b)}).size() != 15)
        ++wrong;
    }
  };
  for (double tv : {0.1, 0.3, 0.5, 0.75, 1.0}) {
    const QuantumFilter k = ppbs_filter_intensity(tv);
    const ChoiMatrix mixed = mixture_channel(k, random_filter(4, 7), 0.6).choi;
    for (const ChoiMatrix &chi : {k.choi(), mixed}) {
      check(chi, product_ensemble(k));
      check(chi, eigen_ensemble(k));
    }
  }
  for (std::uint64_t s = 0; s < 20; ++s) {
    const QuantumFilter k = random_filter(4, 300 + s);
    check(k.choi(), eigen_ensemble(k));
    check(k.choi(), eigen_ensemble(k, PartnerBasis::Hadamard));
  }
  return {wrong == 0, std::to_string(bases) + " bases checked, " + std::to_string(wrong) + " without 15 constraints"};
}

bool spectrum_in_01(const RVec &ev) {
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) > 1e-9 && std::abs(ev(i) - 1) > 1e-9)
      return false;
  return true;
}

Outcome certificates() {
  bool ok = true;
  std::string detail;
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g;
  auto random_basis = [&](std::size_t d) {
    CMat m{Eigen::Index(d), Eigen::Index(d)};
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c)
        m(r, c) = {g(rng), g(rng)};
    Eigen::HouseholderQR<CMat> qr(m);
    return Basis(CMat(qr.householderQ()));
  };
  for (std::size_t d = 2; d <= 8; ++d)
    for (const Basis &e : {Basis::computational(d), random_basis(d)}) {
      const RVec ev = hermitian_eigenvalues(build_R(e, fourier_basis(e)));
      std::size_t rank = 0;
      for (Eigen::Index i = 0; i < ev.size(); ++i)
        rank += ev(i) > 0.5 ? 1 : 0;
      ok = ok && ev.minCoeff() >= -1e-9 && spectrum_in_01(ev) && rank == (d - 1) * (d - 1);
    }
  detail += std::string("Fourier d=2..8 ") + (ok ? "ok" : "bad");
  bool had = true;
  for (std::size_t n = 1; n <= 3; ++n) {
    const std::size_t d = std::size_t{1} << n;
    const RVec ev = hermitian_eigenvalues(build_R(Basis::computational(d), hadamard_product_basis(n)));
    const WitnessReport w = hadamard_R_spectrum(n);
    had = had && ev.minCoeff() >= -1e-9 && spectrum_in_01(ev) && w.zero_space_dim == (std::size_t{2} << n) - 1;
  }
  detail += std::string(", Hadamard n=1..3 ") + (had ? "ok" : "bad");
  double min_filtered = 1e9;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const std::size_t d = 2 + s % 3;
    const QuantumFilter k = random_filter(d, 500 + s);
    const Basis e = s % 2 == 0 ? k.right() : random_basis(d);
    const CMat x = conjugate_output(build_R(e, fourier_basis(e)), k.kraus());
    min_filtered = std::min(min_filtered, hermitian_eigenvalues(x).minCoeff());
  }
  detail += ", min eig of filtered R over 100 filters " + fmt("%.2e", min_filtered);
  return {ok && had && min_filtered >= -1e-9, detail};
}

Outcome unitary_reduction() {
  double dl = 0, de = 0, df = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const std::size_t d = 2 + s % 3;
    const CMat u = random_unitary(d, 900 + s), v = random_unitary(d, 1900 + s);
    const double p = 0.05 + 0.045 * double(s);
    const QuantumFilter k(u);
    const ProbeEnsemble ens = eigen_ensemble(k);
    const BoundsReport r = analyze(k, reduce(run_ensemble(mixture_channel(k, QuantumFilter(v), p).choi, ens)));
    const std::vector<std::pair<double, CMat>> mix{{p, u}, {1 - p, v}};
    const double f1 = average_fidelity(u, mix, ens.e.probes), f2 = average_fidelity(u, mix, ens.f.probes);
    dl = std::max(dl, std::abs(r.lower - (f1 + f2 - 1)));
    de = std::max(de, std::abs(r.upper_e - f1));
    df = std::max(df, std::abs(r.upper_f - f2));
  }
  return {dl <= 1e-10 && de <= 1e-10 && df <= 1e-10, "max |lower-(F1+F2-1)| " + fmt("%.2e", dl) +
                                                         ", max |upper_e-F1| " + fmt("%.2e", de) +
                                                         ", max |upper_f-F2| " + fmt("%.2e", df)};
}

Outcome cross_formula() {
  double worst = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const std::size_t d = 2 + s % 3;
    const QuantumFilter k = random_filter(d, 4000 + s);
    const double p = double(s % 11) / 10.0;
    const MixtureChannel ch = mixture_channel(k, random_filter(d, 5000 + s), p);
    const auto stats = reduce(run_ensemble(ch.choi, eigen_ensemble(k)));
    const auto e = find_stats(stats, "e"), f = find_stats(stats, "f");
    const double tight = eigenprobe_lower_bound(k, *e, *f);
    worst = std::max(worst, std::abs(tight - general_lower_bound(k, *e, *f)));
    worst = std::max(worst, std::abs(tight - general_lower_bound(k, *e, *f, *e)));
  }
  return {worst <= 1e-10, "100 channels, max |eigenprobe - general| " + fmt("%.2e", worst)};
}

} // namespace

int main() {
  criterion(1, "eigenprobe tightness", 10, eigenprobe_tightness);
  criterion(2, "PPBS tightness points", 5, fig1_tightness_points);
  criterion(3, "SDP tightness", 30, sdp_tightness);
  criterion(4, "sandwich suite", 900, sandwich_suite);
  criterion(5, "constraint rank", 60, constraint_rank);
  criterion(6, "certificate suite", 30, certificates);
  criterion(7, "unitary reduction", 60, unitary_reduction);
  criterion(8, "cross-formula oracle", 60, cross_formula);
  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
