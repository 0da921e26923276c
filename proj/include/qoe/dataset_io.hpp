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
//
// File formats:
//   ratings CSV   — header "subject_id,condition_id,rating", one rating per
//                   line, '#' comment lines ignored, LF or CRLF.
//   metadata JSON — sidecar declaring the scale, optional condition table,
//                   requested statistics, optional thresholds, and the
//                   repeated-measures flag.

#ifndef QOE_DATASET_IO_HPP
#define QOE_DATASET_IO_HPP

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qoe/dataset.hpp"
#include "qoe/scale.hpp"

namespace qoe {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, std::size_t column,
             const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ":" +
                           std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

/// Shortest decimal string that parses back to exactly the same double.
inline std::string format_exact(double v) {
  char buf[32];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

/// Value rounded to 6 significant decimals, for report output.
inline double round_sig6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return std::strtod(buf, nullptr);
}

inline std::string format_sig6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

inline bool parse_double(const std::string& token, double& out) {
  if (token.empty()) return false;
  char* end = nullptr;
  out = std::strtod(token.c_str(), &end);
  return end == token.c_str() + token.size() && std::isfinite(out);
}

}  // namespace detail

/// Parsed study metadata: the statistical definition set plus the optional
/// (gb, pw, te) thresholds declared alongside it.
struct StudyMetadata {
  StatDefinitionSet definition;
  std::optional<std::array<double, 3>> thresholds;
};

/// Defaults used when no sidecar is given: 5-point ACR scale with MOS and SOS.
inline StudyMetadata default_metadata() {
  StudyMetadata m;
  m.definition.scale = RatingScale::acr();
  m.definition.statistics = {"mos", "sos"};
  m.definition.observators = {observators::kSum, observators::kSumOfSquares};
  return m;
}

inline StudyMetadata parse_metadata(const std::string& text, const std::string& source) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(source, 1, static_cast<std::size_t>(e.byte), e.what());
  }
  StudyMetadata m = default_metadata();
  try {
    if (j.contains("scale")) {
      const auto& s = j.at("scale");
      const std::string kind = s.value("kind", "discrete");
      if (kind != "discrete" && kind != "continuous") {
        throw IoError(source + ": scale.kind must be 'discrete' or 'continuous'");
      }
      m.definition.scale =
          RatingScale(kind == "discrete" ? ScaleKind::DiscreteInteger : ScaleKind::Continuous,
                      s.at("lower").get<double>(), s.at("upper").get<double>());
    }
    if (j.contains("conditions")) {
      m.definition.conditions.clear();
      for (const auto& c : j.at("conditions")) {
        ConditionDescriptor d;
        d.id = c.at("id").get<std::string>();
        if (c.contains("attributes")) {
          for (const auto& [k, v] : c.at("attributes").items()) {
            d.attributes.emplace_back(k, v.is_string() ? v.get<std::string>() : v.dump());
          }
        }
        m.definition.conditions.push_back(std::move(d));
      }
    }
    if (j.contains("statistics")) {
      m.definition.statistics.clear();
      for (const auto& s : j.at("statistics")) {
        m.definition.statistics.insert(s.get<std::string>());
      }
    }
    if (j.contains("observators")) {
      m.definition.observators.clear();
      for (const auto& s : j.at("observators")) {
        m.definition.observators.insert(s.get<std::string>());
      }
    } else {
      m.definition.observators.clear();
      for (const auto& stat : m.definition.statistics) {
        for (const auto& o : required_observators(stat)) m.definition.observators.insert(o);
      }
    }
    if (j.contains("thresholds")) {
      const auto& t = j.at("thresholds");
      m.thresholds = {{t.at("gb").get<double>(), t.at("pw").get<double>(),
                       t.at("te").get<double>()}};
    }
    m.definition.repeated_measures = j.value("repeated_measures", false);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(source + ": invalid metadata: " + e.what());
  }
  return m;
}

inline StudyMetadata load_metadata(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open metadata file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_metadata(buf.str(), path);
}

inline nlohmann::ordered_json metadata_to_json(const StudyMetadata& m) {
  nlohmann::ordered_json j;
  j["scale"] = {
      {"kind", m.definition.scale.discrete_integer() ? "discrete" : "continuous"},
      {"lower", m.definition.scale.lower},
      {"upper", m.definition.scale.upper},
  };
  if (!m.definition.conditions.empty()) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : m.definition.conditions) {
      nlohmann::ordered_json cj;
      cj["id"] = c.id;
      if (!c.attributes.empty()) {
        nlohmann::ordered_json attrs;
        for (const auto& [k, v] : c.attributes) attrs[k] = v;
        cj["attributes"] = attrs;
      }
      arr.push_back(cj);
    }
    j["conditions"] = arr;
  }
  j["statistics"] = m.definition.statistics;
  j["observators"] = m.definition.observators;
  if (m.thresholds) {
    j["thresholds"] = {{"gb", (*m.thresholds)[0]},
                       {"pw", (*m.thresholds)[1]},
                       {"te", (*m.thresholds)[2]}};
  }
  j["repeated_measures"] = m.definition.repeated_measures;
  return j;
}

inline void save_metadata(const StudyMetadata& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open metadata file for writing: " + path);
  out << metadata_to_json(m).dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

/// Parses the ratings CSV against the given metadata. Conditions appearing in
/// the data but not declared in the metadata are auto-registered with empty
/// attributes. The returned dataset has been validated.
inline StudyDataset parse_ratings_csv(std::istream& in, const StudyMetadata& metadata,
                                      const std::string& source) {
  StudyDataset ds;
  ds.definition = metadata.definition;

  std::set<std::string> declared;
  for (const auto& c : ds.definition.conditions) declared.insert(c.id);

  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = detail::strip_cr(raw);
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "subject_id,condition_id,rating") {
        throw ParseError(source, line_no, 1,
                         "expected header 'subject_id,condition_id,rating'");
      }
      header_seen = true;
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos ||
        line.find(',', c2 + 1) != std::string::npos) {
      throw ParseError(source, line_no, 1, "expected exactly 3 comma-separated fields");
    }
    Rating r;
    r.subject = line.substr(0, c1);
    r.condition = line.substr(c1 + 1, c2 - c1 - 1);
    const std::string value_token = line.substr(c2 + 1);
    if (r.subject.empty()) throw ParseError(source, line_no, 1, "empty subject_id");
    if (r.condition.empty()) throw ParseError(source, line_no, c1 + 2, "empty condition_id");
    if (!detail::parse_double(value_token, r.value)) {
      throw ParseError(source, line_no, c2 + 2,
                       "rating is not a finite decimal number: '" + value_token + "'");
    }
    if (!declared.count(r.condition)) {
      declared.insert(r.condition);
      ds.definition.conditions.push_back({r.condition, {}});
    }
    ds.ratings.push_back(std::move(r));
  }
  if (!header_seen) {
    throw ParseError(source, line_no == 0 ? 1 : line_no, 1, "missing header line");
  }

  auto violations = validate_dataset(ds);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return ds;
}

/// Loads a dataset from a ratings CSV plus an optional metadata sidecar
/// (empty path = ACR defaults).
inline StudyDataset load_dataset(const std::string& ratings_path,
                                 const std::string& metadata_path = "") {
  const StudyMetadata metadata =
      metadata_path.empty() ? default_metadata() : load_metadata(metadata_path);
  std::ifstream in(ratings_path, std::ios::binary);
  if (!in) throw IoError("cannot open ratings file: " + ratings_path);
  return parse_ratings_csv(in, metadata, ratings_path);
}

inline void write_ratings_csv(const StudyDataset& ds, std::ostream& out) {
  out << "subject_id,condition_id,rating\n";
  for (const auto& r : ds.ratings) {
    out << r.subject << ',' << r.condition << ',' << detail::format_exact(r.value) << '\n';
  }
}

inline void save_dataset(const StudyDataset& ds, const std::string& ratings_path) {
  std::ofstream out(ratings_path, std::ios::binary);
  if (!out) throw IoError("cannot open ratings file for writing: " + ratings_path);
  write_ratings_csv(ds, out);
  if (!out) throw IoError("write failed: " + ratings_path);
}

}  // namespace qoe

#endif  // QOE_DATASET_IO_HPP
