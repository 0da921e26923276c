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
// Whole-study analysis: per-condition estimates plus the study-level SOS fit,
// serialized to JSON or CSV with deterministic ordering and 6 significant
// decimals.

#ifndef QOE_ANALYSIS_HPP
#define QOE_ANALYSIS_HPP

#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qoe/dataset.hpp"
#include "qoe/dataset_io.hpp"
#include "qoe/emodel.hpp"
#include "qoe/estimators.hpp"
#include "qoe/sos_model.hpp"

namespace qoe {

struct QuantileSpec {
  int n = 1;
  int q = 2;

  std::string label() const { return std::to_string(n) + "/" + std::to_string(q); }
};

struct AnalysisOptions {
  std::vector<QuantileSpec> quantiles;
  std::vector<double> thetas;
  std::optional<emodel::ThresholdSet> thresholds;
  VarianceMode variance_mode = VarianceMode::Population;
};

struct ConditionReport {
  std::string condition;
  std::size_t count = 0;
  double mos = 0.0;
  std::optional<double> sos;             // absent when R < 2
  std::optional<double> standard_error;  // absent when R < 2
  std::vector<std::pair<QuantileSpec, double>> quantiles;
  std::vector<std::pair<double, double>> acceptability;  // (theta, fraction)
  std::optional<emodel::TailFractions> tails;
};

struct AnalysisReport {
  std::vector<ConditionReport> conditions;  // ordered by condition id
  std::optional<SosFit> sos_fit;
  std::string sos_fit_note;  // set when the fit is undetermined
};

inline AnalysisReport analyze_dataset(const StudyDataset& ds, const AnalysisOptions& opts) {
  AnalysisReport report;
  std::vector<ConditionMoment> moments;
  for (const auto& [id, sample] : group_by_condition(ds)) {
    auto stats = ConditionStats::from_sample(id, sample, ds.definition.scale);
    ConditionReport cr;
    cr.condition = id;
    cr.count = stats.count;
    cr.mos = mos(stats);
    if (stats.count >= 2) {
      cr.sos = sos(stats);
      cr.standard_error = standard_error(stats);
    }
    for (const auto& spec : opts.quantiles) {
      cr.quantiles.emplace_back(spec, quantile(stats, spec.n, spec.q));
    }
    for (double theta : opts.thetas) {
      cr.acceptability.emplace_back(theta, theta_acceptability(stats, theta));
    }
    if (opts.thresholds) {
      cr.tails = emodel::estimate_gob_pow_tme(stats, *opts.thresholds);
    }
    ConditionMoment m;
    m.mos = cr.mos;
    m.variance = opts.variance_mode == VarianceMode::Population
                     ? population_variance(stats)
                     : (stats.count >= 2 ? sample_variance(stats) : 0.0);
    m.count = stats.count;
    moments.push_back(m);

    report.conditions.push_back(std::move(cr));
  }
  try {
    report.sos_fit = fit_sos_parameter(moments, ds.definition.scale);
  } catch (const std::domain_error& e) {
    report.sos_fit_note = e.what();
  }
  return report;
}

namespace detail {

inline nlohmann::ordered_json report_to_json(const AnalysisReport& report) {
  nlohmann::ordered_json j;
  auto conditions = nlohmann::ordered_json::array();
  for (const auto& c : report.conditions) {
    nlohmann::ordered_json cj;
    cj["condition"] = c.condition;
    cj["count"] = c.count;
    cj["mos"] = round_sig6(c.mos);
    if (c.sos) cj["sos"] = round_sig6(*c.sos);
    if (c.standard_error) cj["standard_error"] = round_sig6(*c.standard_error);
    if (!c.quantiles.empty()) {
      nlohmann::ordered_json qj;
      for (const auto& [spec, value] : c.quantiles) qj[spec.label()] = round_sig6(value);
      cj["quantiles"] = qj;
    }
    if (!c.acceptability.empty()) {
      nlohmann::ordered_json aj;
      for (const auto& [theta, value] : c.acceptability) {
        aj[format_sig6(theta)] = round_sig6(value);
      }
      cj["acceptability"] = aj;
    }
    if (c.tails) {
      cj["gob"] = round_sig6(c.tails->gob);
      cj["pow"] = round_sig6(c.tails->pow);
      cj["tme"] = round_sig6(c.tails->tme);
    }
    conditions.push_back(std::move(cj));
  }
  j["conditions"] = std::move(conditions);
  if (report.sos_fit) {
    const auto& f = *report.sos_fit;
    nlohmann::ordered_json fj;
    fj["a"] = round_sig6(f.a);
    fj["a_raw"] = round_sig6(f.a_raw);
    fj["residual"] = round_sig6(f.residual);
    std::size_t used = 0;
    for (const auto& p : f.points) {
      if (!p.degenerate) ++used;
    }
    fj["conditions_used"] = used;
    fj["conditions_degenerate"] = f.points.size() - used;
    j["sos_fit"] = std::move(fj);
  } else if (!report.sos_fit_note.empty()) {
    j["sos_fit_note"] = report.sos_fit_note;
  }
  return j;
}

}  // namespace detail

inline void write_report_json(const AnalysisReport& report, std::ostream& out) {
  out << detail::report_to_json(report).dump(2) << '\n';
}

inline void write_report_csv(const AnalysisReport& report, const AnalysisOptions& opts,
                             std::ostream& out) {
  out << "condition,count,mos,sos,standard_error";
  for (const auto& spec : opts.quantiles) {
    out << ",q_" << spec.n << "_" << spec.q;
  }
  for (double theta : opts.thetas) {
    out << ",acc_" << detail::format_sig6(theta);
  }
  if (opts.thresholds) out << ",gob,pow,tme";
  out << '\n';
  for (const auto& c : report.conditions) {
    out << c.condition << ',' << c.count << ',' << detail::format_sig6(c.mos) << ',';
    if (c.sos) out << detail::format_sig6(*c.sos);
    out << ',';
    if (c.standard_error) out << detail::format_sig6(*c.standard_error);
    for (const auto& [spec, value] : c.quantiles) {
      out << ',' << detail::format_sig6(value);
    }
    for (const auto& [theta, value] : c.acceptability) {
      out << ',' << detail::format_sig6(value);
    }
    if (c.tails) {
      out << ',' << detail::format_sig6(c.tails->gob) << ','
          << detail::format_sig6(c.tails->pow) << ',' << detail::format_sig6(c.tails->tme);
    }
    out << '\n';
  }
  if (report.sos_fit) {
    const auto& f = *report.sos_fit;
    out << "# sos_fit a=" << detail::format_sig6(f.a) << " a_raw=" << detail::format_sig6(f.a_raw)
        << " residual=" << detail::format_sig6(f.residual) << '\n';
  } else if (!report.sos_fit_note.empty()) {
    out << "# sos_fit unavailable: " << report.sos_fit_note << '\n';
  }
}

enum class ReportFormat { Json, Csv };

inline void write_report(const AnalysisReport& report, const AnalysisOptions& opts,
                         const std::string& path, ReportFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open report file for writing: " + path);
  if (format == ReportFormat::Json) {
    write_report_json(report, out);
  } else {
    write_report_csv(report, opts, out);
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace qoe

#endif  // QOE_ANALYSIS_HPP
