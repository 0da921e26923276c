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

#include <cmath>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "qoe/sos_model.hpp"

using namespace qoe;

namespace {

const RatingScale kAcr = RatingScale::acr();

/// Brute-force min/max std over all two-category distributions {k, k+1}
/// with the given mean, for checking min_sos against its definition.
double min_std_two_category(double mean) {
  const double k = std::floor(mean);
  if (k == mean) return 0.0;
  const double p_hi = mean - k;  // P(k+1)
  const double var = p_hi * (1.0 - p_hi);  // unit-spaced two-point variance
  return std::sqrt(var);
}

StudyDataset dataset_from_samples(const RatingScale& scale,
                                  const std::vector<std::vector<double>>& samples) {
  StudyDataset ds;
  ds.definition.scale = scale;
  ds.definition.statistics = {"mos", "sos"};
  ds.definition.observators = {observators::kSum, observators::kSumOfSquares};
  for (std::size_t c = 0; c < samples.size(); ++c) {
    const std::string id = "c" + std::to_string(c + 1);
    ds.definition.conditions.push_back({id, {}});
    for (std::size_t s = 0; s < samples[c].size(); ++s) {
      ds.ratings.push_back({"s" + std::to_string(s + 1), id, samples[c][s]});
    }
  }
  return ds;
}

std::vector<std::vector<double>> random_samples(std::mt19937& rng, const RatingScale& scale,
                                                int conditions, int subjects) {
  std::vector<std::vector<double>> samples(conditions);
  for (auto& sample : samples) {
    sample.resize(subjects);
    if (scale.discrete_integer()) {
      std::uniform_int_distribution<int> cat(static_cast<int>(scale.lower),
                                             static_cast<int>(scale.upper));
      for (auto& v : sample) v = cat(rng);
    } else {
      std::uniform_real_distribution<double> value(scale.lower, scale.upper);
      for (auto& v : sample) v = value(rng);
    }
  }
  return samples;
}

}  // namespace

TEST_CASE("min_sos on discrete and continuous scales") {
  CHECK(min_sos(3.0, kAcr) == 0.0);
  CHECK(min_sos(1.5, kAcr) == Catch::Approx(0.5).margin(1e-12));
  CHECK(min_sos(2.5, RatingScale::continuous(1, 5)) == 0.0);
  CHECK_THROWS_AS(min_sos(0.5, kAcr), std::domain_error);

  // Oracle: the minimum std over all distributions with a given mean is
  // achieved on the two neighboring categories. Compared as variances since
  // sqrt amplifies grid round-off near integer means.
  for (double u = 1.0; u <= 5.0; u += 0.1) {
    const double got = min_sos(u, kAcr);
    const double want = min_std_two_category(u);
    CHECK(got * got == Catch::Approx(want * want).margin(1e-12));
  }
}

TEST_CASE("max_sos is the two-point endpoint distribution") {
  CHECK(max_sos(3.0, RatingScale::continuous(1, 5)) == Catch::Approx(2.0).margin(1e-12));
  CHECK(max_sos(1.0, RatingScale::continuous(1, 5)) == 0.0);
  CHECK(max_sos(5.0, RatingScale::continuous(1, 5)) == 0.0);
  CHECK(max_sos(0.5, RatingScale::continuous(0, 1)) == Catch::Approx(0.5).margin(1e-12));
  CHECK_THROWS_AS(max_sos(5.5, kAcr), std::domain_error);

  // Oracle: variance of mass p at U+ and 1-p at U- with mean u.
  const RatingScale scale = RatingScale::continuous(1, 5);
  for (double u = 1.0; u <= 5.0; u += 0.05) {
    const double p = (u - scale.lower) / scale.width();
    const double var = p * (1.0 - p) * scale.width() * scale.width();
    CHECK(max_sos(u, scale) == Catch::Approx(std::sqrt(var)).margin(1e-12));
  }
}

TEST_CASE("bounds ordering: 0 <= min_sos <= max_sos, zero at endpoints") {
  for (double u = 1.0; u <= 5.0; u += 0.01) {
    const double lo = min_sos(u, kAcr);
    const double hi = max_sos(u, kAcr);
    CHECK(lo >= 0.0);
    CHECK(lo <= hi + 1e-12);
  }
  CHECK(min_sos(1.0, kAcr) == 0.0);
  CHECK(max_sos(1.0, kAcr) == 0.0);
  CHECK(min_sos(5.0, kAcr) == 0.0);
  CHECK(max_sos(5.0, kAcr) == 0.0);
}

TEST_CASE("sos_hypothesis scales max_sos by sqrt(a)") {
  const RatingScale scale = RatingScale::continuous(1, 5);
  CHECK(sos_hypothesis(2.7, 1.0, scale) == max_sos(2.7, scale));
  CHECK(sos_hypothesis(2.7, 0.0, scale) == 0.0);
  CHECK(sos_hypothesis(3.0, 0.25, scale) == Catch::Approx(1.0).margin(1e-12));
  CHECK_THROWS_AS(sos_hypothesis(3.0, 1.5, scale), std::domain_error);
  CHECK_THROWS_AS(sos_hypothesis(3.0, -0.1, scale), std::domain_error);
}

TEST_CASE("normalize maps the scale onto [0,1]") {
  CHECK(normalize(1.0, RatingScale::continuous(1, 5)) == 0.0);
  CHECK(normalize(5.0, RatingScale::continuous(1, 5)) == 1.0);
  CHECK(normalize(3.0, RatingScale::continuous(0, 6)) == 0.5);
  CHECK_THROWS_AS(normalize(7.0, RatingScale::continuous(0, 6)), std::domain_error);
}

TEST_CASE("transform_rating maps endpoints and round-trips") {
  const LinearTransform t{RatingScale::continuous(0, 6), RatingScale::continuous(1, 5)};
  CHECK(transform_rating(0.0, t) == 1.0);
  CHECK(transform_rating(6.0, t) == 5.0);
  CHECK(transform_rating(3.0, t) == Catch::Approx(3.0).margin(1e-12));
  CHECK_THROWS_AS(transform_rating(6.5, t), std::domain_error);

  const auto inv = t.inverse();
  for (double u = 0.0; u <= 6.0; u += 0.1) {
    CHECK(inv(t(u)) == Catch::Approx(u).margin(1e-12));
  }
}

TEST_CASE("fit on binary p=0.5 gives a = 1") {
  const auto fit = fit_sos_parameter({{0.5, 0.25, 0}}, RatingScale::binary());
  CHECK(fit.a == Catch::Approx(1.0).margin(1e-12));
  CHECK(fit.residual == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("fit recovers the generator parameter on hypothesis data") {
  const RatingScale scale = RatingScale::continuous(1, 5);
  for (double a : {0.1, 0.3, 0.7, 1.0}) {
    std::vector<ConditionMoment> moments;
    for (double u = 1.2; u <= 4.9; u += 0.3) {
      const double s = sos_hypothesis(u, a, scale);
      moments.push_back({u, s * s, 0});
    }
    const auto fit = fit_sos_parameter(moments, scale);
    CHECK(fit.a == Catch::Approx(a).margin(1e-12));
    CHECK(fit.residual == Catch::Approx(0.0).margin(1e-12));
  }
}

TEST_CASE("fit with all-zero variances gives a = 0") {
  const auto fit =
      fit_sos_parameter({{2.0, 0.0, 0}, {3.0, 0.0, 0}, {4.0, 0.0, 0}}, kAcr);
  CHECK(fit.a == 0.0);
}

TEST_CASE("degenerate conditions are flagged and ignored") {
  const auto fit = fit_sos_parameter({{1.0, 0.0, 0}, {3.0, 1.0, 0}, {5.0, 0.0, 0}}, kAcr);
  REQUIRE(fit.points.size() == 3);
  CHECK(fit.points[0].degenerate);
  CHECK_FALSE(fit.points[1].degenerate);
  CHECK(fit.points[2].degenerate);

  CHECK_THROWS_AS(fit_sos_parameter({{1.0, 0.0, 0}, {5.0, 0.0, 0}}, kAcr),
                  std::domain_error);
}

TEST_CASE("raw a outside [0,1] is clamped and reported") {
  // Variance above the scale maximum forces a_raw > 1.
  const auto fit = fit_sos_parameter({{3.0, 5.0, 0}}, kAcr);
  CHECK(fit.a_raw > 1.0);
  CHECK(fit.a == 1.0);
}

TEST_CASE("closed form beats a dense grid of candidate parameters") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> mos_dist(1.1, 4.9);
  std::uniform_real_distribution<double> noise(0.0, 1.0);
  std::vector<ConditionMoment> moments;
  for (int c = 0; c < 12; ++c) {
    const double u = mos_dist(rng);
    const double s_max = max_sos(u, kAcr);
    const double s = noise(rng) * s_max * 0.8;
    moments.push_back({u, s * s, 0});
  }
  const auto fit = fit_sos_parameter(moments, kAcr);

  auto loss = [&](double a) {
    double total = 0.0;
    for (const auto& p : fit.points) {
      if (p.degenerate) continue;
      const double d = a * (-p.z * p.z + p.z) - p.variance;
      total += d * d;
    }
    return total;
  };
  const double best = loss(fit.a);
  for (int i = 0; i <= 1000; ++i) {
    CHECK(loss(i / 1000.0) >= best - 1e-15);
  }
}

TEST_CASE("binary-scale datasets always fit a = 1") {
  std::mt19937 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    std::bernoulli_distribution coin(0.1 + 0.08 * (trial % 10));
    std::vector<std::vector<double>> samples(4);
    for (auto& sample : samples) {
      sample.resize(25);
      for (auto& v : sample) v = coin(rng) ? 1.0 : 0.0;
    }
    // Ensure at least one mixed condition.
    samples[0][0] = 0.0;
    samples[0][1] = 1.0;
    const auto ds = dataset_from_samples(RatingScale::binary(), samples);
    const auto fit = fit_sos_dataset(ds, VarianceMode::Population);
    CHECK(fit.a == Catch::Approx(1.0).margin(1e-9));
  }
}

TEST_CASE("fit invariance under linear scale transforms") {
  std::mt19937 rng(53);

  SECTION("identity transform is bit-identical") {
    const auto ds = dataset_from_samples(
        RatingScale::continuous(0, 6), random_samples(rng, RatingScale::continuous(0, 6), 6, 20));
    const LinearTransform identity{ds.definition.scale, ds.definition.scale};
    const auto [a0, a1] = verify_fit_invariance(ds, identity);
    CHECK(a0 == a1);
  }

  SECTION("[0,6] -> [1,5]") {
    for (int trial = 0; trial < 10; ++trial) {
      const auto ds = dataset_from_samples(
          RatingScale::continuous(0, 6),
          random_samples(rng, RatingScale::continuous(0, 6), 8, 15));
      const LinearTransform t{ds.definition.scale, RatingScale::continuous(1, 5)};
      const auto [a0, a1] = verify_fit_invariance(ds, t);
      CHECK(std::abs(a0 - a1) <= 1e-9);
    }
  }

  SECTION("[1,5] -> [0,100] on a two-condition dataset") {
    const auto ds = dataset_from_samples(
        RatingScale::continuous(1, 5), random_samples(rng, RatingScale::continuous(1, 5), 2, 30));
    const LinearTransform t{ds.definition.scale, RatingScale::continuous(0, 100)};
    const auto [a0, a1] = verify_fit_invariance(ds, t);
    CHECK(std::abs(a0 - a1) <= 1e-9);
  }

  SECTION("source scale mismatch is rejected") {
    const auto ds = dataset_from_samples(
        RatingScale::continuous(1, 5), random_samples(rng, RatingScale::continuous(1, 5), 2, 5));
    const LinearTransform t{RatingScale::continuous(0, 6), RatingScale::continuous(1, 5)};
    CHECK_THROWS_AS(verify_fit_invariance(ds, t), std::domain_error);
  }
}
