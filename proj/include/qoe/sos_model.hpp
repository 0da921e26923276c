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
// SOS-vs-MOS model: min/max SOS bounds, the SOS hypothesis
// S(u) = sqrt(a) * S+(u), scale normalization and linear transforms, and the
// closed-form least-squares fit of the SOS parameter a.

#ifndef QOE_SOS_MODEL_HPP
#define QOE_SOS_MODEL_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qoe/dataset.hpp"
#include "qoe/estimators.hpp"
#include "qoe/scale.hpp"

namespace qoe {

namespace detail {
inline double sqrt_clamped(double radicand) {
  // Absorbs negative floating-point noise near zero.
  if (radicand < 0.0) {
    if (radicand < -1e-9) {
      throw std::domain_error("negative radicand");
    }
    return 0.0;
  }
  return std::sqrt(radicand);
}

inline void require_on_scale(double u, const RatingScale& scale, const char* op) {
  if (!scale.contains(u)) {
    throw std::domain_error(std::string(op) + ": value outside the rating scale");
  }
}
}  // namespace detail

/// Minimum achievable SOS for a given MOS. Zero on continuous scales; on
/// consecutive-integer discrete scales the mean pins mass to the two
/// neighboring categories, giving
///   S-(u) = sqrt( u(2*floor(u)+1) - floor(u)(floor(u)+1) - u^2 ).
inline double min_sos(double u, const RatingScale& scale) {
  detail::require_on_scale(u, scale, "min_sos");
  if (!scale.discrete_integer()) return 0.0;
  const double fl = std::floor(u);
  return detail::sqrt_clamped(u * (2.0 * fl + 1.0) - fl * (fl + 1.0) - u * u);
}

/// Maximum achievable SOS for a given MOS, attained by the two-point
/// distribution on the scale endpoints:
///   S+(u) = sqrt( -u^2 + (U- + U+)u - U- * U+ ).
inline double max_sos(double u, const RatingScale& scale) {
  detail::require_on_scale(u, scale, "max_sos");
  return detail::sqrt_clamped(-u * u + (scale.lower + scale.upper) * u -
                              scale.lower * scale.upper);
}

/// SOS hypothesis: S(u) = sqrt(a) * S+(u) with diversity parameter a in [0,1].
inline double sos_hypothesis(double u, double a, const RatingScale& scale) {
  if (!(a >= 0.0 && a <= 1.0)) {
    throw std::domain_error("sos_hypothesis: parameter a must lie in [0,1]");
  }
  return std::sqrt(a) * max_sos(u, scale);
}

/// Maps a rating to the normalized [0,1] scale: z = (u - U-) / (U+ - U-).
inline double normalize(double u, const RatingScale& scale) {
  detail::require_on_scale(u, scale, "normalize");
  return (u - scale.lower) / scale.width();
}

/// Linear map between two rating scales, sending endpoints to endpoints.
struct LinearTransform {
  RatingScale from;
  RatingScale to;

  double operator()(double u) const {
    detail::require_on_scale(u, from, "transform_rating");
    return (u - from.lower) / from.width() * to.width() + to.lower;
  }

  LinearTransform inverse() const { return {to, from}; }
};

inline double transform_rating(double u, const LinearTransform& t) { return t(u); }

/// Per-condition moments feeding the SOS-parameter fit, on the original scale.
struct ConditionMoment {
  double mos = 0.0;
  double variance = 0.0;
  std::size_t count = 0;
};

/// One fit input after normalization. Conditions with normalized MOS exactly
/// at a scale endpoint carry no information about a and are flagged.
struct SosFitPoint {
  double z = 0.0;        // normalized MOS
  double variance = 0.0; // normalized variance
  std::size_t count = 0;
  bool degenerate = false;
};

struct SosFit {
  double a = 0.0;       // clamped to [0,1]
  double a_raw = 0.0;   // closed-form value before clamping
  double residual = 0.0; // L(a) at the clamped a
  std::vector<SosFitPoint> points;
};

/// Closed-form least-squares fit of the SOS parameter:
///   a = -sum_c (z_c^2 - z_c) s2_c / sum_c (z_c^2 - z_c)^2
/// over normalized per-condition (MOS, variance) pairs. Variances scale by
/// 1/width^2 under normalization.
inline SosFit fit_sos_parameter(const std::vector<ConditionMoment>& per_condition,
                                const RatingScale& scale) {
  SosFit fit;
  const double w2 = scale.width() * scale.width();
  double numerator = 0.0;
  double denominator = 0.0;
  for (const auto& m : per_condition) {
    if (m.variance < 0.0) {
      throw std::domain_error("fit_sos_parameter: negative variance");
    }
    SosFitPoint p;
    p.z = normalize(m.mos, scale);
    p.variance = m.variance / w2;
    p.count = m.count;
    p.degenerate = (p.z == 0.0 || p.z == 1.0);
    if (!p.degenerate) {
      const double g = p.z * p.z - p.z;  // strictly negative off the endpoints
      numerator += g * p.variance;
      denominator += g * g;
    }
    fit.points.push_back(p);
  }
  if (denominator == 0.0) {
    throw std::domain_error(
        "fit_sos_parameter: no condition with non-degenerate MOS, a is undetermined");
  }
  fit.a_raw = -numerator / denominator;
  fit.a = std::min(1.0, std::max(0.0, fit.a_raw));
  for (const auto& p : fit.points) {
    if (p.degenerate) continue;
    const double model = fit.a * (-p.z * p.z + p.z);
    const double d = model - p.variance;
    fit.residual += d * d;
  }
  return fit;
}

enum class VarianceMode { Population, Sample };

/// Fits the SOS parameter directly from a dataset, computing per-condition
/// MOS and variance first. Population variance is the default; the sample
/// (R-1) estimator needs at least two ratings per condition.
inline SosFit fit_sos_dataset(const StudyDataset& ds,
                              VarianceMode mode = VarianceMode::Population) {
  std::vector<ConditionMoment> moments;
  for (const auto& [id, sample] : group_by_condition(ds)) {
    auto stats = ConditionStats::from_sample(id, sample, ds.definition.scale);
    ConditionMoment m;
    m.mos = mos(stats);
    m.variance = mode == VarianceMode::Population ? population_variance(stats)
                                                  : sample_variance(stats);
    m.count = stats.count;
    moments.push_back(m);
  }
  return fit_sos_parameter(moments, ds.definition.scale);
}

/// Fits a on the dataset as-is and again after transforming every rating to
/// the target scale. The SOS parameter is invariant under linear transforms,
/// so the two values agree to numerical precision.
inline std::pair<double, double> verify_fit_invariance(
    const StudyDataset& ds, const LinearTransform& t,
    VarianceMode mode = VarianceMode::Population) {
  if (ds.definition.scale != t.from) {
    throw std::domain_error("verify_fit_invariance: transform source scale mismatch");
  }
  const double a_original = fit_sos_dataset(ds, mode).a;

  StudyDataset transformed = ds;
  transformed.definition.scale = t.to;
  for (auto& r : transformed.ratings) r.value = t(r.value);
  const double a_transformed = fit_sos_dataset(transformed, mode).a;
  return {a_original, a_transformed};
}

}  // namespace qoe

#endif  // QOE_SOS_MODEL_HPP
