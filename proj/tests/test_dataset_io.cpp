// Copyright 2026 The QoE Metrics Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "qoe/analysis.hpp"
#include "qoe/dataset_io.hpp"

using namespace qoe;

namespace {

StudyDataset parse(const std::string& csv, const StudyMetadata& m = default_metadata()) {
  std::istringstream in(csv);
  return parse_ratings_csv(in, m, "test.csv");
}

}  // namespace

TEST_CASE("parse_ratings_csv reads the basic grammar") {
  const auto ds = parse(
      "subject_id,condition_id,rating\n"
      "s1,c1,4\n"
      "s2,c1,2\n");
  REQUIRE(ds.ratings.size() == 2);
  CHECK(ds.subjects_per_condition().at("c1") == 2);
  CHECK(ds.definition.conditions.size() == 1);  // auto-registered
}

TEST_CASE("parse_ratings_csv accepts CRLF and comment lines") {
  const auto ds = parse(
      "# exported from the rating tool\r\n"
      "subject_id,condition_id,rating\r\n"
      "s1,c1,4\r\n"
      "\r\n"
      "# trailing comment\r\n"
      "s2,c1,2\r\n");
  CHECK(ds.ratings.size() == 2);
}

TEST_CASE("parse errors carry the line number") {
  try {
    parse(
        "subject_id,condition_id,rating\n"
        "s1,c1,4\n"
        "s2,c1,abc\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }

  CHECK_THROWS_AS(parse("wrong,header,here\ns1,c1,4\n"), ParseError);
  CHECK_THROWS_AS(parse("subject_id,condition_id,rating\ns1,c1\n"), ParseError);
  CHECK_THROWS_AS(parse("subject_id,condition_id,rating\ns1,c1,inf\n"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
}

TEST_CASE("validation violations surface as ValidationError") {
  CHECK_THROWS_AS(parse("subject_id,condition_id,rating\ns1,c1,9\n"), ValidationError);
  CHECK_THROWS_AS(parse("subject_id,condition_id,rating\ns1,c1,3\ns1,c1,4\n"),
                  ValidationError);
}

TEST_CASE("metadata parsing covers scale, statistics, thresholds and flags") {
  const auto m = parse_metadata(R"({
    "scale": {"kind": "continuous", "lower": 0, "upper": 6},
    "conditions": [{"id": "c1", "attributes": {"content": "w1"}}],
    "statistics": ["mos", "sos", "quantiles"],
    "thresholds": {"gb": 4.5, "pw": 2.0, "te": 1.0},
    "repeated_measures": true
  })", "meta.json");
  CHECK(m.definition.scale == RatingScale::continuous(0, 6));
  REQUIRE(m.definition.conditions.size() == 1);
  CHECK(m.definition.conditions[0].attributes ==
        std::vector<std::pair<std::string, std::string>>{{"content", "w1"}});
  CHECK(m.definition.statistics.count("quantiles") == 1);
  // Observators derived from the requested statistics.
  CHECK(m.definition.observators.count(observators::kSortedSample) == 1);
  CHECK(m.definition.observators.count(observators::kSum) == 1);
  REQUIRE(m.thresholds.has_value());
  CHECK((*m.thresholds)[0] == 4.5);
  CHECK(m.definition.repeated_measures);

  CHECK_THROWS_AS(parse_metadata("{not json", "meta.json"), ParseError);
  CHECK_THROWS_AS(parse_metadata(R"({"scale": {"kind": "fuzzy", "lower": 1, "upper": 5}})",
                                 "meta.json"),
                  IoError);
  CHECK_THROWS_AS(parse_metadata(R"({"scale": {"kind": "discrete", "lower": 5, "upper": 1}})",
                                 "meta.json"),
                  std::invalid_argument);
}

TEST_CASE("default metadata is the 5-point ACR scale with MOS and SOS") {
  const auto m = default_metadata();
  CHECK(m.definition.scale == RatingScale::acr());
  CHECK(m.definition.statistics == std::set<std::string>{"mos", "sos"});
  CHECK_FALSE(m.thresholds.has_value());
}

TEST_CASE("dataset round-trips through write and parse") {
  std::mt19937 rng(4);
  std::uniform_int_distribution<int> cat(1, 5);
  StudyDataset ds;
  ds.definition = default_metadata().definition;
  for (int c = 1; c <= 4; ++c) {
    ds.definition.conditions.push_back({"c" + std::to_string(c), {}});
    for (int s = 1; s <= 10; ++s) {
      ds.ratings.push_back({"s" + std::to_string(s), "c" + std::to_string(c),
                            static_cast<double>(cat(rng))});
    }
  }
  std::ostringstream out;
  write_ratings_csv(ds, out);
  const auto reparsed = parse(out.str());
  CHECK(reparsed.ratings == ds.ratings);
  CHECK(reparsed.definition.scale == ds.definition.scale);

  // Second round trip is byte-identical.
  std::ostringstream out2;
  write_ratings_csv(reparsed, out2);
  CHECK(out.str() == out2.str());
}

TEST_CASE("metadata round-trips through JSON") {
  auto m = default_metadata();
  m.thresholds = {{4.0, 2.0, 1.0}};
  m.definition.conditions.push_back({"c1", {{"content", "w1"}}});
  const auto text = metadata_to_json(m).dump(2);
  const auto reparsed = parse_metadata(text, "roundtrip.json");
  CHECK(reparsed.definition == m.definition);
  CHECK(reparsed.thresholds == m.thresholds);
}

TEST_CASE("continuous-scale ratings keep full precision through the CSV") {
  StudyDataset ds;
  ds.definition = default_metadata().definition;
  ds.definition.scale = RatingScale::continuous(0, 6);
  ds.definition.conditions.push_back({"c1", {}});
  ds.ratings.push_back({"s1", "c1", 0.1 + 0.2});
  ds.ratings.push_back({"s2", "c1", 5.999999999999999});
  std::ostringstream out;
  write_ratings_csv(ds, out);
  StudyMetadata m = default_metadata();
  m.definition.scale = ds.definition.scale;
  const auto reparsed = parse(out.str(), m);
  CHECK(reparsed.ratings[0].value == ds.ratings[0].value);
  CHECK(reparsed.ratings[1].value == ds.ratings[1].value);
}

TEST_CASE("reports are deterministic and numerically stable at 6 digits") {
  const auto ds = parse(
      "subject_id,condition_id,rating\n"
      "s1,c2,4\ns2,c2,2\ns3,c2,3\n"
      "s1,c1,5\ns2,c1,5\ns3,c1,1\n");
  AnalysisOptions opts;
  opts.quantiles = {{1, 2}};
  opts.thetas = {4.0};
  opts.thresholds = emodel::ThresholdSet(4.0, 2.0, 1.0, RatingScale::acr());

  const auto report = analyze_dataset(ds, opts);
  std::ostringstream json1, json2, csv1;
  write_report_json(report, json1);
  write_report_json(analyze_dataset(ds, opts), json2);
  CHECK(json1.str() == json2.str());

  write_report_csv(report, opts, csv1);
  CHECK(csv1.str().rfind("condition,count,mos,sos,standard_error,q_1_2,acc_4,gob,pow,tme\n",
                         0) == 0);

  // Conditions come out ordered by id.
  const auto j = nlohmann::json::parse(json1.str());
  REQUIRE(j["conditions"].size() == 2);
  CHECK(j["conditions"][0]["condition"] == "c1");
  CHECK(j["conditions"][1]["condition"] == "c2");
  CHECK(j["conditions"][1]["mos"] == 3.0);
  CHECK(j.contains("sos_fit"));

  // Parse back and round-trip numerically at 6 significant decimals.
  const double sos_c1 = j["conditions"][0]["sos"].get<double>();
  CHECK(sos_c1 == detail::round_sig6(sos_c1));
}

TEST_CASE("single-rating conditions omit sos in the report") {
  const auto ds = parse("subject_id,condition_id,rating\ns1,c1,4\n");
  const auto report = analyze_dataset(ds, {});
  REQUIRE(report.conditions.size() == 1);
  CHECK(report.conditions[0].mos == 4.0);
  CHECK_FALSE(report.conditions[0].sos.has_value());
  std::ostringstream out;
  write_report_json(report, out);
  const auto j = nlohmann::json::parse(out.str());
  CHECK_FALSE(j["conditions"][0].contains("sos"));
}
