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

#ifndef QOE_DATASET_HPP
#define QOE_DATASET_HPP

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qoe/scale.hpp"

namespace qoe {

/// One opinion score: subject r rated condition c with the given value.
struct Rating {
  std::string subject;
  std::string condition;
  double value = 0.0;

  bool operator==(const Rating& o) const {
    return subject == o.subject && condition == o.condition && value == o.value;
  }
};

/// A test condition with opaque metadata (content, quality level, timing...).
/// The attribute structure is carried but never interpreted by estimators;
/// all computations group by condition id only.
struct ConditionDescriptor {
  std::string id;
  std::vector<std::pair<std::string, std::string>> attributes;

  bool operator==(const ConditionDescriptor& o) const {
    return id == o.id && attributes == o.attributes;
  }
};

namespace observators {
inline constexpr const char* kSum = "sum";
inline constexpr const char* kSumOfSquares = "sum-of-squares";
inline constexpr const char* kSortedSample = "sorted-sample";
}  // namespace observators

/// Observators each named statistic needs before it can be estimated.
inline std::set<std::string> required_observators(const std::string& statistic) {
  if (statistic == "mos") return {observators::kSum};
  if (statistic == "sos" || statistic == "standard-error") {
    return {observators::kSum, observators::kSumOfSquares};
  }
  if (statistic == "quantiles" || statistic == "acceptability" ||
      statistic == "acceptance" || statistic == "gob-pow-tme") {
    return {observators::kSortedSample};
  }
  return {};
}

/// Statistical definition set: scale, test conditions, requested statistics,
/// and the sufficient observators that back their estimators.
struct StatDefinitionSet {
  RatingScale scale;
  std::vector<ConditionDescriptor> conditions;
  std::set<std::string> statistics;
  std::set<std::string> observators;
  bool repeated_measures = false;

  bool operator==(const StatDefinitionSet& o) const {
    return scale == o.scale && conditions == o.conditions &&
           statistics == o.statistics && observators == o.observators &&
           repeated_measures == o.repeated_measures;
  }
};

struct StudyDataset {
  StatDefinitionSet definition;
  std::vector<Rating> ratings;

  /// Per-condition rating counts R_j, keyed by condition id.
  std::map<std::string, std::size_t> subjects_per_condition() const {
    std::map<std::string, std::size_t> counts;
    for (const auto& r : ratings) ++counts[r.condition];
    return counts;
  }

  bool operator==(const StudyDataset& o) const {
    return definition == o.definition && ratings == o.ratings;
  }
};

/// A broken invariant, as data. `where` names the offending rating or
/// condition, `rule` names the violated invariant.
struct Violation {
  std::string where;
  std::string rule;

  bool operator==(const Violation& o) const {
    return where == o.where && rule == o.rule;
  }
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Violation> violations)
      : std::runtime_error(render(violations)), violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const { return violations_; }

 private:
  static std::string render(const std::vector<Violation>& vs) {
    std::string msg = "dataset validation failed:";
    for (const auto& v : vs) msg += "\n  " + v.where + ": " + v.rule;
    return msg;
  }
  std::vector<Violation> violations_;
};

inline std::vector<Violation> validate_dataset(const StudyDataset& ds) {
  std::vector<Violation> out;
  const RatingScale& scale = ds.definition.scale;

  std::set<std::string> known_conditions;
  for (const auto& c : ds.definition.conditions) {
    if (!known_conditions.insert(c.id).second) {
      out.push_back({"condition " + c.id, "duplicate condition id"});
    }
  }

  for (const auto& stat : ds.definition.statistics) {
    for (const auto& need : required_observators(stat)) {
      if (!ds.definition.observators.count(need)) {
        out.push_back({"statistic " + stat, "missing required observator '" + need + "'"});
      }
    }
  }

  std::set<std::pair<std::string, std::string>> seen;
  std::size_t line = 0;
  for (const auto& r : ds.ratings) {
    ++line;
    const std::string where =
        "rating #" + std::to_string(line) + " (" + r.subject + "," + r.condition + ")";
    if (!scale.contains(r.value)) {
      out.push_back({where, "value out of scale range"});
    } else if (!scale.is_valid_value(r.value)) {
      out.push_back({where, "value is not an integer category on a discrete scale"});
    }
    if (!known_conditions.count(r.condition)) {
      out.push_back({where, "condition id not declared in definition set"});
    }
    if (!ds.definition.repeated_measures &&
        !seen.insert({r.subject, r.condition}).second) {
      out.push_back({where, "duplicate (subject, condition) rating"});
    }
  }
  return out;
}

/// Groups ratings by condition id with each sample sorted ascending.
/// Conditions without ratings never appear as keys.
inline std::map<std::string, std::vector<double>> group_by_condition(
    const StudyDataset& ds) {
  auto violations = validate_dataset(ds);
  if (!violations.empty()) {
    throw ValidationError(std::move(violations));
  }
  std::map<std::string, std::vector<double>> groups;
  for (const auto& r : ds.ratings) groups[r.condition].push_back(r.value);
  for (auto& [id, sample] : groups) std::sort(sample.begin(), sample.end());
  return groups;
}

}  // namespace qoe

#endif  // QOE_DATASET_HPP
