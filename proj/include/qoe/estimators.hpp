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
// Per-condition opinion-score statistics: empirical pmf, MOS, SOS, standard
// error, order-statistic quantiles, theta-acceptability and acceptance.

#ifndef QOE_ESTIMATORS_HPP
#define QOE_ESTIMATORS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qoe/scale.hpp"

namespace qoe {

/// Sufficient observators for one test condition: count, sum, sum of squares
/// and the ascending sample. Sums are accumulated in ascending order.
struct ConditionStats {
  std::string condition;
  std::size_t count = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
  std::vector<double> sorted_sample;
  RatingScale scale;

  static ConditionStats from_sample(std::string condition, std::vector<double> sample,
                                    const RatingScale& scale) {
    if (sample.empty()) {
      throw std::invalid_argument("ConditionStats: sample must contain at least one rating");
    }
    std::sort(sample.begin(), sample.end());
    ConditionStats s;
    s.condition = std::move(condition);
    s.count = sample.size();
    for (double u : sample) {
      s.sum += u;
      s.sum_sq += u * u;
    }
    s.sorted_sample = std::move(sample);
    s.scale = scale;
    return s;
  }
};

/// Estimated probability of each opinion score on a discrete scale.
struct EmpiricalPmf {
  RatingScale scale;
  std::map<int, double> probabilities;
};

inline EmpiricalPmf empirical_pmf(const ConditionStats& stats) {
  if (!stats.scale.discrete_integer()) {
    throw std::domain_error("empirical_pmf: requires a discrete-integer scale");
  }
  if (stats.count == 0) {
    throw std::domain_error("empirical_pmf: empty sample");
  }
  EmpiricalPmf pmf;
  pmf.scale = stats.scale;
  for (int u = static_cast<int>(stats.scale.lower); u <= static_cast<int>(stats.scale.upper); ++u) {
    pmf.probabilities[u] = 0.0;
  }
  const double weight = 1.0 / static_cast<double>(stats.count);
  for (double v : stats.sorted_sample) {
    pmf.probabilities.at(static_cast<int>(std::lround(v))) += weight;
  }
  return pmf;
}

/// Mean opinion score: the sample mean (1/R) sum U_i.
inline double mos(const ConditionStats& stats) {
  if (stats.count == 0) {
    throw std::domain_error("mos: empty sample");
  }
  return stats.sum / static_cast<double>(stats.count);
}

/// Standard deviation of opinion scores, unbiased (R-1) estimator:
///   S = sqrt( sum U_i^2 / (R-1) - R/(R-1) * mean^2 ).
/// Radicands above -1e-9 clamp to zero; anything more negative means the
/// observators are inconsistent and is rejected.
inline double sos(const ConditionStats& stats) {
  if (stats.count < 2) {
    throw std::domain_error("sos: needs at least two ratings (R-1 estimator)");
  }
  const double r = static_cast<double>(stats.count);
  const double mean = stats.sum / r;
  const double radicand = stats.sum_sq / (r - 1.0) - (r / (r - 1.0)) * mean * mean;
  if (radicand < 0.0) {
    if (radicand < -1e-9) {
      throw std::domain_error("sos: negative variance, inconsistent observators");
    }
    return 0.0;
  }
  return std::sqrt(radicand);
}

/// Standard error of the MOS estimate: S / sqrt(R).
inline double standard_error(const ConditionStats& stats) {
  return sos(stats) / std::sqrt(static_cast<double>(stats.count));
}

/// Population-variance (R denominator) counterpart of sos()^2, used by the
/// SOS-parameter fit. Defined for R >= 1; a single rating has variance 0.
inline double population_variance(const ConditionStats& stats) {
  if (stats.count == 0) {
    throw std::domain_error("population_variance: empty sample");
  }
  const double r = static_cast<double>(stats.count);
  const double mean = stats.sum / r;
  const double v = stats.sum_sq / r - mean * mean;
  return v < 0.0 ? 0.0 : v;
}

inline double sample_variance(const ConditionStats& stats) {
  const double s = sos(stats);
  return s * s;
}

/// Order-statistic estimate of the n'th q-quantile:
///   Q_{n/q} = U^{(h)},  h = ceil(R*n/q)  (1-based).
inline double quantile(const ConditionStats& stats, int n, int q) {
  if (!(0 < n && n < q)) {
    throw std::domain_error("quantile: requires 0 < n < q");
  }
  if (stats.count == 0) {
    throw std::domain_error("quantile: empty sample");
  }
  const std::size_t num = stats.count * static_cast<std::size_t>(n);
  const std::size_t h = (num + static_cast<std::size_t>(q) - 1) / static_cast<std::size_t>(q);
  return stats.sorted_sample[h == 0 ? 0 : h - 1];
}

/// Fraction of ratings at or above the threshold: |{U_i >= theta}| / R.
inline double theta_acceptability(const ConditionStats& stats, double theta) {
  if (stats.count == 0) {
    throw std::domain_error("theta_acceptability: empty sample");
  }
  auto first = std::lower_bound(stats.sorted_sample.begin(), stats.sorted_sample.end(), theta);
  const auto n_at_or_above = static_cast<double>(stats.sorted_sample.end() - first);
  return n_at_or_above / static_cast<double>(stats.count);
}

/// Acceptance probability estimate on a binary {0,1} scale: the fraction of 1s.
inline double acceptance_rate(const ConditionStats& stats) {
  if (!stats.scale.is_binary()) {
    throw std::domain_error("acceptance_rate: requires a binary {0,1} scale");
  }
  if (stats.count == 0) {
    throw std::domain_error("acceptance_rate: empty sample");
  }
  return stats.sum / static_cast<double>(stats.count);
}

}  // namespace qoe

#endif  // QOE_ESTIMATORS_HPP
