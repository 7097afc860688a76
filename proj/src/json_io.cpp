#include "qfb/json_io.hpp"

#include <fstream>
#include <sstream>

namespace qfb {

namespace {

[[noreturn]] void schema(const std::string &what) { throw Error(ErrorCode::Schema, what); }

const Json &field(const Json &j, const char *key) {
  if (!j.is_object() || !j.contains(key))
    schema(std::string("missing field '") + key + "'");
  return j.at(key);
}

template <class T> T get_as(const Json &j, const char *what) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception &) {
    schema(std::string("field '") + what + "' has the wrong type");
  }
}

RMat real_matrix(const Json &rows, const char *what) {
  if (!rows.is_array())
    schema(std::string("'") + what + "' must be an array of rows");
  const auto n = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index cols = n == 0 ? 0 : static_cast<Eigen::Index>(rows.front().size());
  RMat m(n, cols);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Json &row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      schema(std::string("'") + what + "' is not rectangular");
    for (Eigen::Index c = 0; c < cols; ++c)
      m(i, c) = get_as<double>(row[static_cast<std::size_t>(c)], what);
  }
  return m;
}

Json rows_of(const RMat &m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(m(i, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_of(const RVec &v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out.push_back(v(i));
  return out;
}

} // namespace

Json matrix_to_json(const CMat &m) { return Json{{"re", rows_of(m.real())}, {"im", rows_of(m.imag())}}; }

CMat matrix_from_json(const Json &j) {
  const RMat re = real_matrix(field(j, "re"), "re");
  const RMat im = real_matrix(field(j, "im"), "im");
  if (re.rows() != im.rows() || re.cols() != im.cols())
    schema("'re' and 'im' differ in shape");
  CMat m(re.rows(), re.cols());
  m.real() = re;
  m.imag() = im;
  return m;
}

Json filter_to_json(const QuantumFilter &k) {
  Json j = matrix_to_json(k.kraus());
  j["d"] = k.dim();
  return j;
}

QuantumFilter filter_from_json(const Json &j) {
  const auto d = get_as<std::size_t>(field(j, "d"), "d");
  const CMat m = matrix_from_json(j);
  if (m.rows() != static_cast<Eigen::Index>(d) || m.cols() != static_cast<Eigen::Index>(d))
    schema("filter matrix is not d x d");
  return QuantumFilter(m);
}

Json basis_to_json(const ProbeBasis &b) {
  Json meas = Json::array();
  for (const auto &m : b.measurements)
    meas.push_back(matrix_to_json(m.matrix()));
  Json ideal = Json::array();
  for (const auto &o : b.ideal_outcome)
    ideal.push_back(o ? Json(*o) : Json(nullptr));
  Json weights = Json::array();
  for (double w : b.ideal_weight)
    weights.push_back(w);
  return Json{{"label", b.label},
              {"readout", to_string(b.readout)},
              {"probes", matrix_to_json(b.probes.matrix())},
              {"measurements", std::move(meas)},
              {"ideal_outcome", std::move(ideal)},
              {"ideal_weight", std::move(weights)}};
}

ProbeBasis basis_from_json(const Json &j) {
  try {
    Basis probes(matrix_from_json(field(j, "probes")));
    const std::size_t d = probes.dim();
    const Json &meas = field(j, "measurements");
    const Json &ideal = field(j, "ideal_outcome");
    const Json &weights = field(j, "ideal_weight");
    if (!meas.is_array() || meas.size() != d || !ideal.is_array() || ideal.size() != d || !weights.is_array() ||
        weights.size() != d)
      schema("probe basis needs one measurement, ideal outcome and weight per probe");
    std::vector<Basis> measurements;
    std::vector<std::optional<std::size_t>> outcomes;
    std::vector<double> w;
    for (std::size_t i = 0; i < d; ++i) {
      measurements.emplace_back(matrix_from_json(meas[i]));
      if (measurements.back().dim() != d)
        schema("measurement basis dimension mismatch");
      if (ideal[i].is_null()) {
        outcomes.emplace_back(std::nullopt);
      } else {
        const auto o = get_as<std::size_t>(ideal[i], "ideal_outcome");
        if (o >= d)
          schema("ideal outcome index out of range");
        outcomes.emplace_back(o);
      }
      w.push_back(get_as<double>(weights[i], "ideal_weight"));
    }
    return ProbeBasis{get_as<std::string>(field(j, "label"), "label"),
                      std::move(probes),
                      std::move(measurements),
                      std::move(outcomes),
                      std::move(w),
                      readout_from_string(get_as<std::string>(field(j, "readout"), "readout"))};
  } catch (const Error &e) {
    if (e.code() == ErrorCode::Schema)
      throw;
    schema(std::string("invalid probe basis: ") + e.what());
  }
}

Json record_to_json(const MeasurementRecord &r) {
  Json j{{"mode", r.mode == RecordMode::Exact ? "exact" : "sampled"}};
  if (r.shots)
    j["shots"] = *r.shots;
  Json bases = Json::array();
  for (const auto &b : r.bases)
    bases.push_back(basis_to_json(b));
  j["bases"] = std::move(bases);
  Json f = Json::array();
  for (const auto &c : r.counts)
    f.push_back(rows_of(c));
  j["f"] = std::move(f);
  return j;
}

MeasurementRecord record_from_json(const Json &j) {
  MeasurementRecord r;
  const auto mode = get_as<std::string>(field(j, "mode"), "mode");
  if (mode == "exact")
    r.mode = RecordMode::Exact;
  else if (mode == "sampled")
    r.mode = RecordMode::Sampled;
  else
    schema("mode must be 'exact' or 'sampled'");
  if (j.contains("shots") && !j.at("shots").is_null())
    r.shots = get_as<std::uint64_t>(j.at("shots"), "shots");
  const Json &bases = field(j, "bases");
  const Json &f = field(j, "f");
  if (!bases.is_array() || !f.is_array() || bases.size() != f.size())
    schema("'bases' and 'f' must be arrays of equal length");
  for (std::size_t b = 0; b < bases.size(); ++b) {
    r.bases.push_back(basis_from_json(bases[b]));
    RMat counts = real_matrix(f[b], "f");
    const auto d = static_cast<Eigen::Index>(r.bases.back().dim());
    if (counts.rows() != d || counts.cols() != d)
      schema("outcome block is not d x d");
    r.counts.push_back(std::move(counts));
  }
  return r;
}

Json bounds_to_json(const BoundsReport &r) {
  Json j{{"lower", r.lower},
         {"upper_e", r.upper_e},
         {"upper_f", r.upper_f},
         {"weights_e", vector_of(r.weights_e)},
         {"weights_f", vector_of(r.weights_f)},
         {"kk_omega", r.kk_omega},
         {"correction", r.correction},
         {"delta", r.delta},
         {"lambda_mean", r.lambda_mean},
         {"formula", to_string(r.formula)}};
  j["true_fidelity"] = r.true_fidelity ? Json(*r.true_fidelity) : Json(nullptr);
  return j;
}

Json witness_to_json(const WitnessReport &r) {
  Json hist = Json::array();
  for (const auto &[value, count] : r.histogram)
    hist.push_back(Json{{"eigenvalue", value}, {"multiplicity", count}});
  return Json{{"min_eigenvalue", r.min_eigenvalue},
              {"max_eigenvalue", r.max_eigenvalue},
              {"zero_space_dim", r.zero_space_dim},
              {"histogram", std::move(hist)},
              {"off_diagonal", r.off_diagonal}};
}

Json constraints_to_json(const ConstraintSet &cs) {
  Json list = Json::array();
  for (const auto &c : cs.constraints) {
    Json m = matrix_to_json(c.M);
    list.push_back(Json{{"M", std::move(m)},
                        {"r", c.r},
                        {"basis", c.origin.basis},
                        {"probe", c.origin.probe},
                        {"outcome", c.origin.outcome}});
  }
  return Json{{"d", cs.d}, {"constraints", std::move(list)}};
}

ConstraintSet constraints_from_json(const Json &j) {
  ConstraintSet cs;
  cs.d = get_as<std::size_t>(field(j, "d"), "d");
  const auto n = static_cast<Eigen::Index>(cs.d * cs.d);
  const Json &list = field(j, "constraints");
  if (!list.is_array())
    schema("'constraints' must be an array");
  for (const Json &c : list) {
    Constraint k;
    k.M = matrix_from_json(field(c, "M"));
    if (k.M.rows() != n || k.M.cols() != n)
      schema("constraint matrix is not d^2 x d^2");
    if (hermiticity_defect(k.M) > kCheckTol)
      schema("constraint matrix is not Hermitian");
    k.r = get_as<double>(field(c, "r"), "r");
    if (c.contains("basis"))
      k.origin.basis = get_as<std::string>(c.at("basis"), "basis");
    if (c.contains("probe"))
      k.origin.probe = get_as<std::size_t>(c.at("probe"), "probe");
    if (c.contains("outcome"))
      k.origin.outcome = get_as<std::size_t>(c.at("outcome"), "outcome");
    cs.constraints.push_back(std::move(k));
  }
  return cs;
}

Json solution_to_json(const SdpSolution &s) {
  return Json{{"value", s.value},
              {"status", sdp::to_string(s.status)},
              {"gap", s.gap},
              {"iterations", s.iterations},
              {"primal_residual", s.primal_residual},
              {"max_violation", s.max_violation},
              {"face_dim", s.face_dim},
              {"message", s.message},
              {"A", matrix_to_json(s.A)}};
}

Json read_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error &e) {
    schema("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_json_file(const std::string &path, const Json &j) {
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

} // namespace qfb
