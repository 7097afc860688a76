#include "qfb/probe_data.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qfb {

const char *to_string(Readout r) noexcept {
  switch (r) {
  case Readout::IdealOutput: return "ideal";
  case Readout::LeftEigenbasis: return "eigen";
  }
  return "ideal";
}

Readout readout_from_string(const std::string &s) {
  if (s == "ideal")
    return Readout::IdealOutput;
  if (s == "eigen")
    return Readout::LeftEigenbasis;
  throw Error(ErrorCode::Schema, "unknown readout '" + s + "'");
}

ProbeBasis ideal_readout_basis(const QuantumFilter &k, const Basis &probes, std::string label) {
  if (probes.dim() != k.dim())
    throw Error(ErrorCode::DimensionMismatch, "probe basis dimension does not match filter");
  ProbeBasis pb{std::move(label), probes, {}, {}, {}, Readout::IdealOutput};
  for (std::size_t j = 0; j < probes.size(); ++j) {
    const auto out = ideal_output(k, probes.state(j));
    pb.ideal_weight.push_back(k.weight(probes.vec(j)));
    if (out) {
      pb.measurements.push_back(complete_basis(out->state));
      pb.ideal_outcome.emplace_back(0);
    } else {
      pb.measurements.push_back(Basis::computational(k.dim()));
      pb.ideal_outcome.emplace_back(std::nullopt);
    }
  }
  return pb;
}

ProbeBasis eigen_readout_basis(const QuantumFilter &k, const Basis &probes, std::string label) {
  if (probes.dim() != k.dim())
    throw Error(ErrorCode::DimensionMismatch, "probe basis dimension does not match filter");
  ProbeBasis pb{std::move(label), probes, {}, {}, {}, Readout::LeftEigenbasis};
  const RVec lam = k.lambdas();
  for (std::size_t j = 0; j < probes.size(); ++j) {
    const CVec p = probes.vec(j);
    pb.measurements.push_back(k.left());
    pb.ideal_weight.push_back(k.weight(p));
    std::optional<std::size_t> ideal;
    for (std::size_t l = 0; l < k.dim(); ++l) {
      if (lam(static_cast<Eigen::Index>(l)) < kZeroWeight)
        continue;
      if (std::abs(k.right().vec(l).dot(p)) >= 1.0 - 1e-8) {
        ideal = l;
        break;
      }
    }
    pb.ideal_outcome.push_back(ideal);
  }
  return pb;
}

std::vector<ProbeBasis> ProbeEnsemble::bases() const {
  std::vector<ProbeBasis> out{e, f};
  if (u)
    out.push_back(*u);
  return out;
}

namespace {
CVec ket(std::initializer_list<cplx> amps) {
  CVec v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index i = 0;
  for (auto a : amps)
    v(i++) = a;
  return v;
}
} // namespace

ProbeEnsemble product_ensemble(const QuantumFilter &k) {
  if (k.dim() != 4)
    throw Error(ErrorCode::InvalidDimension, "product probes are defined for two qubits");
  const double s = 1.0 / std::sqrt(2.0);
  const CVec zero = ket({1.0, 0.0});
  const CVec one = ket({0.0, 1.0});
  const CVec plus = ket({s, s});
  const CVec minus = ket({s, -s});
  const Basis e(std::vector<PureState>{PureState(kron(zero, plus)), PureState(kron(zero, minus)),
                                       PureState(kron(one, plus)), PureState(kron(one, minus))});
  const Basis f(std::vector<PureState>{PureState(kron(plus, zero)), PureState(kron(plus, one)),
                                       PureState(kron(minus, zero)), PureState(kron(minus, one))});
  return ProbeEnsemble{ideal_readout_basis(k, e, "e"), ideal_readout_basis(k, f, "f"),
                       eigen_readout_basis(k, Basis::computational(4), "u")};
}

Basis hadamard_partner(const Basis &w) {
  const std::size_t d = w.dim();
  std::size_t n = 0;
  while ((std::size_t{1} << n) < d)
    ++n;
  if ((std::size_t{1} << n) != d || n == 0)
    throw Error(ErrorCode::InvalidDimension, "Hadamard partner needs d = 2^n");
  return Basis(CMat(w.matrix() * hadamard_product_basis(n).matrix()));
}

ProbeEnsemble eigen_ensemble(const QuantumFilter &k, PartnerBasis partner) {
  const Basis &w = k.right();
  const Basis f = partner == PartnerBasis::Fourier ? fourier_basis(w) : hadamard_partner(w);
  return ProbeEnsemble{eigen_readout_basis(k, w, "e"), ideal_readout_basis(k, f, "f"), std::nullopt};
}

RVec theoretical_probabilities(const ChoiMatrix &chi, const PureState &probe, const Basis &meas) {
  if (meas.dim() != chi.dim())
    throw Error(ErrorCode::DimensionMismatch, "measurement basis dimension does not match channel");
  const CMat rho = output_state(chi, probe);
  const auto d = static_cast<Eigen::Index>(meas.dim());
  RVec p(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const CVec n = meas.matrix().col(k);
    double v = n.dot(rho * n).real();
    if (v < 0.0) {
      if (v < -1e-12)
        throw Error(ErrorCode::InvariantViolation, "negative outcome probability");
      v = 0.0;
    }
    p(k) = v;
  }
  return p;
}

namespace {

RVec multinomial(std::uint64_t trials, const RVec &probs, std::mt19937_64 &rng) {
  RVec counts = RVec::Zero(probs.size());
  double remaining_mass = 1.0;
  std::uint64_t remaining = trials;
  for (Eigen::Index k = 0; k < probs.size() && remaining > 0; ++k) {
    if (remaining_mass <= 0.0)
      break;
    const double q = std::clamp(probs(k) / remaining_mass, 0.0, 1.0);
    std::binomial_distribution<std::uint64_t> draw(remaining, q);
    const std::uint64_t c = draw(rng);
    counts(k) = static_cast<double>(c);
    remaining -= c;
    remaining_mass -= probs(k);
  }
  return counts;
}

} // namespace

MeasurementRecord run_ensemble(const ChoiMatrix &chi, const ProbeEnsemble &ensemble,
                               std::optional<std::uint64_t> shots, std::uint64_t seed) {
  if (shots && *shots == 0)
    throw Error(ErrorCode::InvalidArgument, "sampled mode needs shots > 0");
  MeasurementRecord rec;
  rec.mode = shots ? RecordMode::Sampled : RecordMode::Exact;
  rec.shots = shots;
  rec.bases = ensemble.bases();
  for (std::size_t b = 0; b < rec.bases.size(); ++b) {
    const ProbeBasis &pb = rec.bases[b];
    if (pb.dim() != chi.dim())
      throw Error(ErrorCode::DimensionMismatch, "probe basis dimension does not match channel");
    const auto d = static_cast<Eigen::Index>(pb.dim());
    RMat f(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      RVec p = theoretical_probabilities(chi, pb.probes.state(ju), pb.measurements[ju]);
      if (shots) {
        // p sums to the success probability; the complement is the
        // unrecorded failure outcome
        const double total = p.sum();
        if (total > 1.0)
          p /= total;
        std::seed_seq sseq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                           static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(j)};
        std::mt19937_64 rng(sseq);
        f.row(j) = multinomial(*shots, p, rng).transpose();
      } else {
        f.row(j) = p.transpose();
      }
    }
    rec.counts.push_back(std::move(f));
  }
  return rec;
}

double ReducedStats::ideal_overlap(std::size_t j) const {
  const auto &idx = basis.ideal_outcome.at(j);
  if (!idx)
    throw Error(ErrorCode::MissingData, "probe " + std::to_string(j + 1) + " of basis '" + basis.label +
                                            "' has no ideal-output outcome");
  return conditional(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(*idx));
}

namespace {
constexpr double kEmptyRowFraction = 1e-14;
} // namespace

ReducedStats reduce(const ProbeBasis &basis, const RMat &counts, RecordMode mode) {
  const auto d = static_cast<Eigen::Index>(basis.dim());
  if (counts.rows() != d || counts.cols() != d)
    throw Error(ErrorCode::DimensionMismatch, "record for basis '" + basis.label + "' is not d x d");
  if ((counts.array() < 0.0).any())
    throw Error(ErrorCode::InvariantViolation, "negative outcome weight");
  const double total = counts.sum();
  if (!(total > 0.0))
    throw Error(ErrorCode::InsufficientData, "basis '" + basis.label + "' has no counts");
  ReducedStats s{basis, RVec::Zero(d), RMat::Zero(d, d), std::vector<bool>(static_cast<std::size_t>(d), false)};
  for (Eigen::Index j = 0; j < d; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    const double row = counts.row(j).sum();
    // exact records carry roundoff-sized rows for probes the channel blocks
    if (!(row > kEmptyRowFraction * total)) {
      if (mode == RecordMode::Sampled && basis.ideal_weight.at(ju) >= kZeroWeight)
        throw Error(ErrorCode::InsufficientData, "probe " + std::to_string(j + 1) + " of basis '" +
                                                     basis.label + "' has no counts");
      s.dropped[ju] = true;
      continue;
    }
    s.success(j) = row / total;
    s.conditional.row(j) = counts.row(j) / row;
  }
  return s;
}

std::vector<ReducedStats> reduce(const MeasurementRecord &record) {
  if (record.bases.size() != record.counts.size())
    throw Error(ErrorCode::Schema, "record has mismatched bases and counts");
  std::vector<ReducedStats> out;
  for (std::size_t b = 0; b < record.bases.size(); ++b)
    out.push_back(reduce(record.bases[b], record.counts[b], record.mode));
  return out;
}

std::optional<ReducedStats> find_stats(const std::vector<ReducedStats> &stats, const std::string &label) {
  for (const auto &s : stats)
    if (s.basis.label == label)
      return s;
  return std::nullopt;
}

} // namespace qfb
