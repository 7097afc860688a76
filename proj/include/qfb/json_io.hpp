#pragma once

// JSON interchange for filters, measurement records, constraint sets and
// reports. Complex matrices are stored as {"re": [[...]], "im": [[...]]},
// row-major. Malformed input raises Error(ErrorCode::Schema).

#include <string>

#include <json.hpp>

#include "qfb/bounds.hpp"
#include "qfb/certificates.hpp"
#include "qfb/sdp.hpp"

namespace qfb {

using Json = nlohmann::json;

Json matrix_to_json(const CMat &m);
CMat matrix_from_json(const Json &j);

/// {"d": int, "re": [[...]], "im": [[...]]}
Json filter_to_json(const QuantumFilter &k);
QuantumFilter filter_from_json(const Json &j);

Json basis_to_json(const ProbeBasis &b);
ProbeBasis basis_from_json(const Json &j);

/// {"mode": "exact"|"sampled", "shots": int?, "bases": [...], "f": [[[...]]]}
/// with one d x d block of outcome weights per basis.
Json record_to_json(const MeasurementRecord &r);
MeasurementRecord record_from_json(const Json &j);

Json bounds_to_json(const BoundsReport &r);
Json witness_to_json(const WitnessReport &r);

Json constraints_to_json(const ConstraintSet &cs);
ConstraintSet constraints_from_json(const Json &j);

Json solution_to_json(const SdpSolution &s);

Json read_json_file(const std::string &path);
void write_json_file(const std::string &path, const Json &j);

} // namespace qfb
