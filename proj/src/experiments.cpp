#include "qfb/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

namespace qfb {

const char *to_string(ProbeChoice p) noexcept { return p == ProbeChoice::Product ? "product" : "eigen"; }

ProbeChoice probe_choice_from_string(const std::string &s) {
  if (s == "product")
    return ProbeChoice::Product;
  if (s == "eigen")
    return ProbeChoice::Eigen;
  throw Error(ErrorCode::InvalidArgument, "probe choice must be 'product' or 'eigen', got '" + s + "'");
}

ProbeEnsemble make_ensemble(const QuantumFilter &k, ProbeChoice choice) {
  return choice == ProbeChoice::Product ? product_ensemble(k) : eigen_ensemble(k);
}

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double round12(double x) { return std::round(x * 1e12) / 1e12; }

double parse_number(const std::string &s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw Error(ErrorCode::InvalidArgument, "not a number: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    out.push_back(item);
  return out;
}

} // namespace

std::vector<double> parse_grid(const std::string &spec) {
  std::vector<double> grid;
  if (spec.find(':') != std::string::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3)
      throw Error(ErrorCode::InvalidArgument, "range grid must be 'start:stop:step'");
    const double a = parse_number(parts[0]);
    const double b = parse_number(parts[1]);
    const double step = parse_number(parts[2]);
    if (!(step > 0.0) || !std::isfinite(a) || !std::isfinite(b) || b < a)
      throw Error(ErrorCode::InvalidArgument, "range grid needs finite start <= stop and a positive step");
    const auto n = static_cast<long>(std::floor((b - a) / step + 1e-9));
    for (long i = 0; i <= n; ++i)
      grid.push_back(round12(a + static_cast<double>(i) * step));
  } else {
    for (const auto &item : split(spec, ','))
      grid.push_back(parse_number(item));
  }
  if (grid.empty())
    throw Error(ErrorCode::InvalidArgument, "empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || grid[i] < 0.0 || grid[i] > 1.0)
      throw Error(ErrorCode::InvalidArgument, "grid values must lie in [0, 1]");
    if (i > 0 && grid[i] < grid[i - 1])
      throw Error(ErrorCode::InvalidArgument, "grid must be sorted ascending");
  }
  return grid;
}

void check_transmittance_grid(const std::vector<double> &grid) {
  for (double t : grid)
    if (!(t > 0.0))
      throw Error(ErrorCode::InvalidArgument, "transmittance grid must lie in (0, 1]");
}

// ---------------------------------------------------------------------------

std::vector<Fig1Row> run_fig1(const std::vector<double> &grid) {
  check_transmittance_grid(grid);
  std::vector<Fig1Row> rows;
  rows.reserve(grid.size());
  for (double tv : grid) {
    const QuantumFilter k = ppbs_filter_intensity(tv);
    const ChoiMatrix chi = k.choi();
    const MeasurementRecord rec = run_ensemble(chi, product_ensemble(k));
    BoundsReport rep = analyze(k, reduce(rec));
    rep.true_fidelity = process_fidelity(chi, chi);
    rows.push_back(Fig1Row{tv, std::move(rep)});
  }
  return rows;
}

void write_fig1_csv(std::ostream &out, const std::vector<Fig1Row> &rows) {
  out << "T_V,lower,upper_e,upper_f,true_F,kk_omega,correction,delta,lambda_mean\n";
  for (const auto &r : rows) {
    const BoundsReport &b = r.report;
    out << fmt(r.tv) << ',' << fmt(b.lower) << ',' << fmt(b.upper_e) << ',' << fmt(b.upper_f) << ','
        << fmt(b.true_fidelity.value_or(NAN)) << ',' << fmt(b.kk_omega) << ',' << fmt(b.correction) << ','
        << fmt(b.delta) << ',' << fmt(b.lambda_mean) << '\n';
  }
}

std::vector<Fig2Row> run_fig2(const std::vector<double> &targets, const std::vector<double> &grid) {
  check_transmittance_grid(targets);
  check_transmittance_grid(grid);
  std::vector<Fig2Row> rows;
  rows.reserve(targets.size() * grid.size());
  for (double target : targets) {
    const QuantumFilter k = ppbs_filter_intensity(target);
    const ProbeEnsemble ens = product_ensemble(k);
    for (double actual : grid) {
      const ChoiMatrix chi = ppbs_filter_intensity(actual).choi();
      BoundsReport rep = analyze(k, reduce(run_ensemble(chi, ens)));
      rep.true_fidelity = process_fidelity(chi, k.choi());
      rows.push_back(Fig2Row{target, actual, std::move(rep)});
    }
  }
  return rows;
}

void write_fig2_csv(std::ostream &out, const std::vector<Fig2Row> &rows) {
  out << "target_T_V,actual_T_V,lower,upper_e,upper_f,true_F\n";
  for (const auto &r : rows) {
    const BoundsReport &b = r.report;
    out << fmt(r.target_tv) << ',' << fmt(r.actual_tv) << ',' << fmt(b.lower) << ',' << fmt(b.upper_e) << ','
        << fmt(b.upper_f) << ',' << fmt(b.true_fidelity.value_or(NAN)) << '\n';
  }
}

// ---------------------------------------------------------------------------

bool Fig3Row::sandwich_holds(double tol) const {
  return report.lower <= sdp_lower + tol && sdp_lower <= true_fidelity + tol && true_fidelity <= sdp_upper + tol &&
         sdp_upper <= report.upper() + tol;
}

std::size_t default_thread_count() {
  if (const char *env = std::getenv("FILTER_BOUNDS_THREADS")) {
    char *end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0)
      return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

Fig3Row fig3_row(const Fig3Config &cfg, const QuantumFilter &k, const ProbeEnsemble &ens, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  const double drawn_p = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const std::uint64_t perturber_seed = rng();
  const double p = cfg.force_p.value_or(drawn_p);

  const MixtureChannel mc = mixture_channel(k, random_filter(k.dim(), perturber_seed), p);
  const MeasurementRecord rec = run_ensemble(mc.choi, ens);
  BoundsReport rep = analyze(k, reduce(rec));
  const double f = process_fidelity(mc.choi, k.choi());
  rep.true_fidelity = f;
  const SdpBounds sdp = solve_bounds(assemble_constraints({rec}), k, cfg.sdp);
  return Fig3Row{index,           perturber_seed,    p,
                 f,               std::move(rep),    sdp.lower.value,
                 sdp.upper.value, sdp.lower.status,  sdp.upper.status,
                 sdp.lower.gap,   sdp.upper.gap};
}

} // namespace

std::vector<Fig3Row> run_fig3(const Fig3Config &cfg) {
  if (cfg.count == 0)
    throw Error(ErrorCode::InvalidArgument, "channel count must be positive");
  if (!(cfg.target_tv > 0.0 && cfg.target_tv <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "target transmittance must lie in (0, 1]");
  if (cfg.force_p && !(*cfg.force_p >= 0.0 && *cfg.force_p <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "mixing weight must lie in [0, 1]");

  const QuantumFilter k = ppbs_filter_intensity(cfg.target_tv);
  const ProbeEnsemble ens = make_ensemble(k, cfg.probes);
  std::vector<std::optional<Fig3Row>> slots(cfg.count);

  const std::size_t threads = std::min(cfg.count, cfg.threads > 0 ? cfg.threads : default_thread_count());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < cfg.count; i = next++) {
      try {
        slots[i] = fig3_row(cfg, k, ens, i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure)
          failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back(worker);
    for (auto &th : pool)
      th.join();
  }
  if (failure)
    std::rethrow_exception(failure);

  std::vector<Fig3Row> rows;
  rows.reserve(cfg.count);
  for (auto &s : slots)
    rows.push_back(std::move(*s));
  std::stable_sort(rows.begin(), rows.end(), [](const Fig3Row &a, const Fig3Row &b) {
    return a.true_fidelity < b.true_fidelity;
  });
  return rows;
}

void write_fig3_csv(std::ostream &out, const std::vector<Fig3Row> &rows) {
  out << "index,p,true_F,lower,upper_e,upper_f,sdp_lower,sdp_upper,status_lower,status_upper,gap_lower,gap_upper,"
         "sandwich_ok\n";
  for (const auto &r : rows) {
    const BoundsReport &b = r.report;
    out << r.index << ',' << fmt(r.p) << ',' << fmt(r.true_fidelity) << ',' << fmt(b.lower) << ',' << fmt(b.upper_e)
        << ',' << fmt(b.upper_f) << ',' << fmt(r.sdp_lower) << ',' << fmt(r.sdp_upper) << ','
        << sdp::to_string(r.status_lower) << ',' << sdp::to_string(r.status_upper) << ',' << fmt(r.gap_lower) << ','
        << fmt(r.gap_upper) << ',' << (r.sandwich_holds(1e-6) ? 1 : 0) << '\n';
  }
}

// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void bad_config(const std::string &what) { throw Error(ErrorCode::Schema, "config: " + what); }

std::string resolve(const std::string &path, const std::string &base_dir) {
  const std::filesystem::path p(path);
  return p.is_absolute() ? path : (std::filesystem::path(base_dir) / p).string();
}

template <class T> T value_or(const Json &j, const char *key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null())
    return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception &) {
    bad_config(std::string("'") + key + "' has the wrong type");
  }
}

QuantumFilter filter_spec(const Json &spec, const std::string &base_dir, const char *what) {
  if (!spec.is_object())
    bad_config(std::string("'") + what + "' must be an object");
  if (spec.contains("tv"))
    return ppbs_filter_intensity(value_or<double>(spec, "tv", 0.0));
  if (spec.contains("filter"))
    return filter_from_json(spec.at("filter"));
  if (spec.contains("filter_file"))
    return filter_from_json(read_json_file(resolve(spec.at("filter_file").get<std::string>(), base_dir)));
  bad_config(std::string("'") + what + "' needs one of 'tv', 'filter', 'filter_file'");
}

} // namespace

Json run_custom(const Json &config, const std::string &base_dir) {
  if (!config.is_object())
    bad_config("top level must be an object");
  if (!config.contains("target"))
    bad_config("missing 'target'");
  const QuantumFilter k = filter_spec(config.at("target"), base_dir, "target");
  const ProbeChoice choice = probe_choice_from_string(value_or<std::string>(config, "probes", "product"));
  const auto seed = value_or<std::uint64_t>(config, "seed", 0);
  const double epsilon = value_or<double>(config, "epsilon", 0.0);
  const bool with_sdp = value_or<bool>(config, "sdp", true);
  std::optional<std::uint64_t> shots;
  if (config.contains("shots") && !config.at("shots").is_null())
    shots = value_or<std::uint64_t>(config, "shots", 0);

  if (!config.contains("channel") || !config.at("channel").is_object())
    bad_config("missing 'channel' object");
  const Json &ch = config.at("channel");
  const std::string type = value_or<std::string>(ch, "type", "");

  Json report;
  report["target"] = filter_to_json(k);
  std::optional<ChoiMatrix> chi;
  MeasurementRecord rec;
  if (type == "filter") {
    chi = filter_spec(ch, base_dir, "channel").choi();
  } else if (type == "mixture") {
    if (!ch.contains("p"))
      bad_config("mixture channel needs 'p'");
    const double p = value_or<double>(ch, "p", 1.0);
    const auto perturber_seed = value_or<std::uint64_t>(ch, "seed", seed);
    const MixtureChannel mc = mixture_channel(k, random_filter(k.dim(), perturber_seed), p);
    report["perturber"] = filter_to_json(mc.perturber);
    chi = mc.choi;
  } else if (type == "record") {
    if (ch.contains("record"))
      rec = record_from_json(ch.at("record"));
    else if (ch.contains("file"))
      rec = record_from_json(read_json_file(resolve(ch.at("file").get<std::string>(), base_dir)));
    else
      bad_config("record channel needs 'record' or 'file'");
  } else {
    bad_config("channel type must be 'filter', 'mixture' or 'record'");
  }

  if (chi)
    rec = run_ensemble(*chi, make_ensemble(k, choice), shots, seed);
  report["record"] = record_to_json(rec);

  BoundsReport bounds = analyze(k, reduce(rec));
  if (chi)
    bounds.true_fidelity = process_fidelity(*chi, k.choi());
  report["bounds"] = bounds_to_json(bounds);

  if (with_sdp) {
    SdpOptions opts;
    opts.epsilon = epsilon;
    const ConstraintSet cs = assemble_constraints({rec});
    const SdpBounds sdp = solve_bounds(cs, k, opts);
    report["constraint_count"] = cs.size();
    report["sdp"] = Json{{"lower", solution_to_json(sdp.lower)}, {"upper", solution_to_json(sdp.upper)}};
  }
  return report;
}

} // namespace qfb
