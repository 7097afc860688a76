#include "helpers.hpp"

#include "qfb/json_io.hpp"

using namespace qfb;

TEST_SUITE("json") {

TEST_CASE("filters round-trip exactly through text") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const QuantumFilter k = random_filter(2 + seed % 4, seed);
    const Json j = Json::parse(filter_to_json(k).dump());
    CHECK(j.at("d") == k.dim());
    CHECK(filter_from_json(j).kraus() == k.kraus());
  }
}

TEST_CASE("measurement records round-trip") {
  const QuantumFilter k = ppbs_filter_intensity(0.4);
  const MixtureChannel ch = mixture_channel(k, random_filter(4, 2), 0.7);
  for (const MeasurementRecord &rec :
       {run_ensemble(ch.choi, product_ensemble(k)), run_ensemble(ch.choi, eigen_ensemble(k), 500, 1)}) {
    const Json j = Json::parse(record_to_json(rec).dump());
    CHECK(j.at("f").size() == rec.bases.size());
    CHECK(j.at("f")[0].size() == 4);
    const MeasurementRecord back = record_from_json(j);
    CHECK(back.mode == rec.mode);
    CHECK(back.shots == rec.shots);
    REQUIRE(back.bases.size() == rec.bases.size());
    for (std::size_t b = 0; b < rec.bases.size(); ++b) {
      CHECK(back.counts[b] == rec.counts[b]);
      CHECK(back.bases[b].label == rec.bases[b].label);
      CHECK(back.bases[b].readout == rec.bases[b].readout);
      CHECK(back.bases[b].probes.matrix() == rec.bases[b].probes.matrix());
      CHECK(back.bases[b].ideal_outcome == rec.bases[b].ideal_outcome);
    }
  }
}

TEST_CASE("constraint sets round-trip") {
  const QuantumFilter k = ppbs_filter_intensity(0.7);
  const ConstraintSet cs = assemble_constraints({run_ensemble(k.choi(), product_ensemble(k))});
  const ConstraintSet back = constraints_from_json(Json::parse(constraints_to_json(cs).dump()));
  REQUIRE(back.size() == cs.size());
  CHECK(back.d == 4);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    CHECK(back.constraints[i].M == cs.constraints[i].M);
    CHECK(back.constraints[i].r == cs.constraints[i].r);
    CHECK(back.constraints[i].origin.basis == cs.constraints[i].origin.basis);
  }
}

TEST_CASE("reports carry their components") {
  BoundsReport r;
  r.lower = 0.5;
  r.weights_e = RVec::Ones(2);
  r.weights_f = RVec::Zero(2);
  r.true_fidelity = 0.75;
  const Json j = bounds_to_json(r);
  for (const char *key : {"lower", "upper_e", "upper_f", "weights_e", "weights_f", "kk_omega", "correction",
                          "delta", "lambda_mean", "formula", "true_fidelity"})
    CHECK(j.contains(key));
  CHECK(j.at("formula") == "general");

  SdpSolution s;
  s.A = CMat::Identity(4, 4) / 4.0;
  const Json sj = solution_to_json(s);
  CHECK(matrix_from_json(sj.at("A")) == s.A);
  CHECK(sj.at("status") == "max-iter");

  const Json w = witness_to_json(witness_report(CMat::Identity(2, 2)));
  CHECK(w.at("histogram").size() == 1);
}

TEST_CASE("schema violations") {
  th::check_code([] { filter_from_json(Json{{"d", 2}}); }, ErrorCode::Schema);
  th::check_code([] { filter_from_json(Json{{"d", 3}, {"re", {{1, 0}, {0, 1}}}, {"im", {{0, 0}, {0, 0}}}}); },
                 ErrorCode::Schema);
  th::check_code([] { matrix_from_json(Json{{"re", {{1, 0}, {0}}}, {"im", {{0, 0}, {0, 0}}}}); }, ErrorCode::Schema);
  th::check_code([] { record_from_json(Json{{"mode", "guess"}, {"bases", Json::array()}, {"f", Json::array()}}); },
                 ErrorCode::Schema);
  th::check_code([] { record_from_json(Json{{"mode", "exact"}, {"bases", Json::array()}, {"f", {1}}}); },
                 ErrorCode::Schema);
  th::check_code([] { filter_from_json(Json{{"d", "two"}, {"re", {{1}}}, {"im", {{0}}}}); }, ErrorCode::Schema);
}

}
