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

#ifndef QOE_SCALE_HPP
#define QOE_SCALE_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace qoe {

enum class ScaleKind { DiscreteInteger, Continuous };

/// A quality rating scale: the sample space of the rating variable.
/// Discrete-integer scales have the category set {lower, lower+1, ..., upper}.
struct RatingScale {
  ScaleKind kind = ScaleKind::DiscreteInteger;
  double lower = 1.0;
  double upper = 5.0;

  RatingScale() = default;

  RatingScale(ScaleKind k, double lo, double hi) : kind(k), lower(lo), upper(hi) {
    if (!(lower < upper)) {
      throw std::invalid_argument("RatingScale: lower bound must be below upper bound");
    }
    if (kind == ScaleKind::DiscreteInteger &&
        (std::floor(lower) != lower || std::floor(upper) != upper)) {
      throw std::invalid_argument("RatingScale: discrete scale bounds must be integers");
    }
  }

  static RatingScale discrete(int lo, int hi) {
    return RatingScale(ScaleKind::DiscreteInteger, lo, hi);
  }

  static RatingScale continuous(double lo, double hi) {
    return RatingScale(ScaleKind::Continuous, lo, hi);
  }

  static RatingScale acr() { return discrete(1, 5); }
  static RatingScale binary() { return discrete(0, 1); }

  bool discrete_integer() const { return kind == ScaleKind::DiscreteInteger; }

  double width() const { return upper - lower; }

  bool contains(double u) const { return u >= lower && u <= upper; }

  /// True when u is a valid value on this scale (for discrete scales,
  /// an integer category; for continuous scales, any value in range).
  bool is_valid_value(double u) const {
    if (!contains(u)) return false;
    return kind == ScaleKind::Continuous || std::floor(u) == u;
  }

  bool is_binary() const {
    return kind == ScaleKind::DiscreteInteger && lower == 0.0 && upper == 1.0;
  }

  int category_count() const {
    if (kind != ScaleKind::DiscreteInteger) {
      throw std::logic_error("category_count: scale is not discrete");
    }
    return static_cast<int>(upper - lower) + 1;
  }

  bool operator==(const RatingScale& o) const {
    return kind == o.kind && lower == o.lower && upper == o.upper;
  }
  bool operator!=(const RatingScale& o) const { return !(*this == o); }
};

}  // namespace qoe

#endif  // QOE_SCALE_HPP
