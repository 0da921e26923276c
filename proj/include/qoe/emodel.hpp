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
// E-model transformation laws: Transmission Rating R in [0,100] maps to
// GoB/PoW/TME percentages through normal-CDF laws with thresholds 60/45/36
// and spread 16, and to MOS through a cubic-plus-linear law. The inverse
// MOS -> R map is numerical (bisection over the strictly monotone forward map).

#ifndef QOE_EMODEL_HPP
#define QOE_EMODEL_HPP

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qoe/estimators.hpp"
#include "qoe/scale.hpp"

namespace qoe {
namespace emodel {

/// Standard normal CDF, accurate to well below 1e-12 absolute.
inline double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

namespace detail {
inline void require_rating(double r) {
  if (!(r >= 0.0 && r <= 100.0)) {
    throw std::domain_error("transmission rating must lie in [0,100]");
  }
}
}  // namespace detail

/// Good-or-Better percentage: 100 * Phi((r - 60) / 16).
inline double gob(double r) {
  detail::require_rating(r);
  return 100.0 * std_normal_cdf((r - 60.0) / 16.0);
}

/// Poor-or-Worse percentage: 100 * Phi((45 - r) / 16).
inline double pow(double r) {
  detail::require_rating(r);
  return 100.0 * std_normal_cdf((45.0 - r) / 16.0);
}

/// Terminate-Early percentage: 100 * Phi((36 - r) / 16).
inline double tme(double r) {
  detail::require_rating(r);
  return 100.0 * std_normal_cdf((36.0 - r) / 16.0);
}

/// Transmission Rating to MOS:
///   MOS(r) = 7*(r-60)*(100-r)*r*1e-6 + 0.035*r + 1.
/// The cubic dips slightly below 1 for r in (0, ~6.52) and is strictly
/// increasing above its stationary point at r ~ 3.22, reaching 4.5 at r = 100.
inline double r_to_mos(double r) {
  detail::require_rating(r);
  return 7.0 * (r - 60.0) * (100.0 - r) * r * 1e-6 + 0.035 * r + 1.0;
}

/// Inverse of r_to_mos, by bisection to an interval of 1e-9. For MOS in
/// [1, 4.5] this lands on the increasing branch, so MOS = 1 maps to
/// r ~ 6.52 as in the table. MOS above 4.5 has no Transmission Rating.
inline double mos_to_r(double mos_value) {
  if (!(mos_value >= 1.0 && mos_value <= 4.5)) {
    throw std::domain_error("mos_to_r: MOS must lie in [1, 4.5]");
  }
  double lo = 0.0;
  double hi = 100.0;
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    if (r_to_mos(mid) < mos_value) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// One row of the MOS / R / PoW / GoB / TME table. r is empty for MOS > 4.5,
/// where the Transmission Rating is undefined and the tails saturate.
struct EModelPoint {
  double mos = 0.0;
  std::optional<double> r;
  double gob_pct = 0.0;
  double pow_pct = 0.0;
  double tme_pct = 0.0;
};

inline EModelPoint emodel_point(double mos_value) {
  if (!(mos_value >= 1.0 && mos_value <= 5.0)) {
    throw std::domain_error("emodel_point: MOS must lie in [1, 5]");
  }
  EModelPoint p;
  p.mos = mos_value;
  if (mos_value <= 4.5) {
    const double r = mos_to_r(mos_value);
    p.r = r;
    p.gob_pct = gob(r);
    p.pow_pct = pow(r);
    p.tme_pct = tme(r);
  } else {
    p.gob_pct = 100.0;
    p.pow_pct = 0.0;
    p.tme_pct = 0.0;
  }
  return p;
}

inline std::vector<EModelPoint> emodel_table(const std::vector<double>& mos_values) {
  std::vector<EModelPoint> rows;
  rows.reserve(mos_values.size());
  for (double m : mos_values) rows.push_back(emodel_point(m));
  return rows;
}

/// The canonical 12 MOS rows: ACR half-steps plus the 36/45/60 threshold rows.
inline const std::vector<double>& default_table_mos() {
  static const std::vector<double> rows = {1.0, 1.5,     1.87293, 2.0, 2.31513, 2.5,
                                           3.0, 3.1,     3.5,     4.0, 4.5,     5.0};
  return rows;
}

/// GoB/PoW/TME thresholds on a given rating scale. The E-model values are
/// (60, 45, 36) on [0,100] and (3.1, 2.31513, 1.87293) after the R->MOS map;
/// any study-specific thresholds are accepted as long as te <= pw < gb.
struct ThresholdSet {
  double theta_gb = 60.0;
  double theta_pw = 45.0;
  double theta_te = 36.0;
  RatingScale scale = RatingScale::continuous(0, 100);

  ThresholdSet() = default;
  ThresholdSet(double gb, double pw, double te, RatingScale s)
      : theta_gb(gb), theta_pw(pw), theta_te(te), scale(s) {
    if (!(theta_te <= theta_pw && theta_pw < theta_gb)) {
      throw std::domain_error("ThresholdSet: requires te <= pw < gb");
    }
  }
};

inline ThresholdSet emodel_thresholds_rating_scale() {
  return {60.0, 45.0, 36.0, RatingScale::continuous(0, 100)};
}

inline ThresholdSet emodel_thresholds_mos_scale() {
  return {3.1, 2.31513, 1.87293, RatingScale::continuous(1, 4.5)};
}

/// Rounds thresholds onto a discrete target scale: the GoB threshold rounds
/// up (an "at least good" rating must clear it), PoW and TME round down.
inline ThresholdSet discretize_thresholds(const ThresholdSet& t, const RatingScale& target) {
  if (!target.discrete_integer()) {
    throw std::domain_error("discretize_thresholds: target scale must be discrete");
  }
  return {std::ceil(t.theta_gb), std::floor(t.theta_pw), std::floor(t.theta_te), target};
}

/// Default thresholds for a scale: the E-model values on [0,100] or their
/// discretized (4, 2, 1) counterparts on the 5-point ACR scale.
inline ThresholdSet default_thresholds(const RatingScale& scale) {
  if (scale == RatingScale::acr()) {
    return {4.0, 2.0, 1.0, scale};
  }
  if (scale.lower == 0.0 && scale.upper == 100.0) {
    return {60.0, 45.0, 36.0, scale};
  }
  throw std::domain_error("default_thresholds: no defaults for this scale, pass thresholds");
}

struct TailFractions {
  double gob = 0.0;  // fraction of ratings >= theta_gb
  double pow = 0.0;  // fraction of ratings <= theta_pw
  double tme = 0.0;  // fraction of ratings <= theta_te
};

/// Empirical GoB/PoW/TME from a rated condition. PoW and TME are closed
/// lower tails P(U <= theta), matching the integer-scale forms P(U <= 2)
/// and P(U <= 1).
inline TailFractions estimate_gob_pow_tme(const ConditionStats& stats, const ThresholdSet& t) {
  if (stats.count == 0) {
    throw std::domain_error("estimate_gob_pow_tme: empty sample");
  }
  const double r = static_cast<double>(stats.count);
  auto at_most = [&](double theta) {
    auto it = std::upper_bound(stats.sorted_sample.begin(), stats.sorted_sample.end(), theta);
    return static_cast<double>(it - stats.sorted_sample.begin()) / r;
  };
  TailFractions f;
  f.gob = theta_acceptability(stats, t.theta_gb);
  f.pow = at_most(t.theta_pw);
  f.tme = at_most(t.theta_te);
  return f;
}

struct CurvePoint {
  double mos = 0.0;
  double gob_pct = 0.0;
  double pow_pct = 0.0;
  double neutral_pct = 0.0;  // 100 - gob - pow
};

/// Evenly spaced MOS grid with the GoB, PoW and neutral percentages, as
/// plotted against MOS in the E-model.
inline std::vector<CurvePoint> curve_data(double mos_min, double mos_max, int steps) {
  if (!(mos_min >= 1.0 && mos_min < mos_max && mos_max <= 4.5)) {
    throw std::domain_error("curve_data: requires 1 <= mos_min < mos_max <= 4.5");
  }
  if (steps < 2) {
    throw std::domain_error("curve_data: requires at least 2 steps");
  }
  std::vector<CurvePoint> out;
  out.reserve(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    const double m = mos_min + (mos_max - mos_min) * static_cast<double>(i) /
                                   static_cast<double>(steps - 1);
    const double r = mos_to_r(m);
    CurvePoint p;
    p.mos = m;
    p.gob_pct = gob(r);
    p.pow_pct = pow(r);
    p.neutral_pct = 100.0 - p.gob_pct - p.pow_pct;
    out.push_back(p);
  }
  return out;
}

}  // namespace emodel
}  // namespace qoe

#endif  // QOE_EMODEL_HPP
