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
// qoe — command-line front end for rating-dataset analysis, SOS-parameter
// fitting, E-model tables/curves and scale transforms.
//
// Exit codes: 0 success, 1 domain/validation error, 2 I/O or parse error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qoe/qoe.hpp"

namespace {

using nlohmann::ordered_json;

qoe::RatingScale parse_scale(const std::string& spec) {
  // lo:hi[:discrete]
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  if (parts.size() < 2 || parts.size() > 3) {
    throw std::domain_error("scale must be 'lo:hi' or 'lo:hi:discrete': " + spec);
  }
  double lo = 0.0;
  double hi = 0.0;
  if (!qoe::detail::parse_double(parts[0], lo) || !qoe::detail::parse_double(parts[1], hi)) {
    throw std::domain_error("scale bounds must be numbers: " + spec);
  }
  bool discrete = false;
  if (parts.size() == 3) {
    if (parts[2] == "discrete") {
      discrete = true;
    } else if (parts[2] != "continuous") {
      throw std::domain_error("scale kind must be 'discrete' or 'continuous': " + spec);
    }
  }
  return qoe::RatingScale(discrete ? qoe::ScaleKind::DiscreteInteger : qoe::ScaleKind::Continuous,
                          lo, hi);
}

qoe::QuantileSpec parse_quantile(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) {
    throw std::domain_error("quantile must be 'n/q', e.g. 1/2: " + s);
  }
  qoe::QuantileSpec spec;
  try {
    spec.n = std::stoi(s.substr(0, slash));
    spec.q = std::stoi(s.substr(slash + 1));
  } catch (const std::exception&) {
    throw std::domain_error("quantile must be 'n/q' with integers: " + s);
  }
  if (!(0 < spec.n && spec.n < spec.q)) {
    throw std::domain_error("quantile needs 0 < n < q: " + s);
  }
  return spec;
}

std::array<double, 3> parse_thresholds(const std::string& s) {
  std::array<double, 3> out{};
  std::stringstream ss(s);
  std::string part;
  std::size_t i = 0;
  while (std::getline(ss, part, ',')) {
    if (i >= 3 || !qoe::detail::parse_double(part, out[i])) {
      throw std::domain_error("thresholds must be 'gb,pw,te': " + s);
    }
    ++i;
  }
  if (i != 3) throw std::domain_error("thresholds must be 'gb,pw,te': " + s);
  return out;
}

/// Writes to the given path, or to stdout when the path is empty.
void emit(const std::string& output, const std::string& text) {
  if (output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output, std::ios::binary);
  if (!out) throw qoe::IoError("cannot open output file: " + output);
  out << text;
  if (!out) throw qoe::IoError("write failed: " + output);
}

std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

struct CommonFlags {
  std::string metadata;
  std::string output;
  std::string format = "json";
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_metadata = true) {
  if (with_metadata) {
    cmd->add_option("--metadata", flags.metadata, "Study metadata sidecar (JSON)");
  }
  cmd->add_option("--output", flags.output, "Output file (default: stdout)");
  cmd->add_option("--format", flags.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
}

int run_analyze(const std::string& ratings, const CommonFlags& flags,
                const std::vector<std::string>& quantiles, const std::vector<double>& thetas,
                const std::string& thresholds, const std::string& variance) {
  const qoe::StudyMetadata metadata =
      flags.metadata.empty() ? qoe::default_metadata() : qoe::load_metadata(flags.metadata);
  std::ifstream in(ratings, std::ios::binary);
  if (!in) throw qoe::IoError("cannot open ratings file: " + ratings);
  qoe::StudyDataset ds = qoe::parse_ratings_csv(in, metadata, ratings);

  qoe::AnalysisOptions opts;
  for (const auto& s : quantiles) opts.quantiles.push_back(parse_quantile(s));
  opts.thetas = thetas;
  opts.variance_mode =
      variance == "sample" ? qoe::VarianceMode::Sample : qoe::VarianceMode::Population;
  std::optional<std::array<double, 3>> th;
  if (!thresholds.empty()) {
    th = parse_thresholds(thresholds);
  } else if (metadata.thresholds) {
    th = metadata.thresholds;
  }
  if (th) {
    opts.thresholds = qoe::emodel::ThresholdSet((*th)[0], (*th)[1], (*th)[2],
                                                ds.definition.scale);
  }

  const qoe::AnalysisReport report = qoe::analyze_dataset(ds, opts);
  std::ostringstream out;
  if (flags.format == "json") {
    qoe::write_report_json(report, out);
  } else {
    qoe::write_report_csv(report, opts, out);
  }
  emit(flags.output, out.str());
  return 0;
}

int run_fit_sos(const std::string& ratings, const CommonFlags& flags,
                const std::string& variance) {
  qoe::StudyDataset ds = qoe::load_dataset(ratings, flags.metadata);
  const auto mode =
      variance == "sample" ? qoe::VarianceMode::Sample : qoe::VarianceMode::Population;
  const qoe::SosFit fit = qoe::fit_sos_dataset(ds, mode);

  ordered_json j;
  j["a"] = qoe::detail::round_sig6(fit.a);
  j["a_raw"] = qoe::detail::round_sig6(fit.a_raw);
  j["residual"] = qoe::detail::round_sig6(fit.residual);
  auto points = ordered_json::array();
  for (const auto& p : fit.points) {
    points.push_back({{"z", qoe::detail::round_sig6(p.z)},
                      {"variance", qoe::detail::round_sig6(p.variance)},
                      {"count", p.count},
                      {"degenerate", p.degenerate}});
  }
  j["points"] = points;
  emit(flags.output, j.dump(2) + "\n");
  return 0;
}

std::string table_row_csv(const qoe::emodel::EModelPoint& p) {
  std::string row = format_fixed(p.mos, 5) + ",";
  row += p.r ? format_fixed(*p.r, 2) : "undefined";
  row += "," + format_fixed(p.pow_pct, 3) + "," + format_fixed(p.gob_pct, 3) + "," +
         format_fixed(p.tme_pct, 3);
  return row;
}

int run_emodel_table(bool default_rows, const std::vector<double>& mos_values,
                     const CommonFlags& flags) {
  std::vector<double> rows = mos_values;
  if (default_rows) {
    if (!mos_values.empty()) {
      throw std::domain_error("--default-rows and --mos are mutually exclusive");
    }
    rows = qoe::emodel::default_table_mos();
  }
  if (rows.empty()) {
    throw std::domain_error("emodel-table: pass --default-rows or --mos values");
  }
  const auto table = qoe::emodel::emodel_table(rows);
  std::ostringstream out;
  if (flags.format == "csv") {
    out << "mos,r,pow,gob,tme\n";
    for (const auto& p : table) out << table_row_csv(p) << '\n';
  } else {
    auto arr = ordered_json::array();
    for (const auto& p : table) {
      ordered_json row;
      row["mos"] = p.mos;
      if (p.r) {
        row["r"] = qoe::detail::round_sig6(*p.r);
      } else {
        row["r"] = nullptr;
      }
      row["pow"] = qoe::detail::round_sig6(p.pow_pct);
      row["gob"] = qoe::detail::round_sig6(p.gob_pct);
      row["tme"] = qoe::detail::round_sig6(p.tme_pct);
      arr.push_back(row);
    }
    out << arr.dump(2) << '\n';
  }
  emit(flags.output, out.str());
  return 0;
}

int run_emodel_convert(const std::optional<double>& mos_value, const std::optional<double>& r_value,
                       const CommonFlags& flags) {
  if (mos_value.has_value() == r_value.has_value()) {
    throw std::domain_error("emodel-convert: pass exactly one of --mos or --r");
  }
  ordered_json j;
  if (r_value) {
    const double r = *r_value;
    j["r"] = r;
    j["mos"] = qoe::detail::round_sig6(qoe::emodel::r_to_mos(r));
    j["pow"] = qoe::detail::round_sig6(qoe::emodel::pow(r));
    j["gob"] = qoe::detail::round_sig6(qoe::emodel::gob(r));
    j["tme"] = qoe::detail::round_sig6(qoe::emodel::tme(r));
  } else {
    const auto p = qoe::emodel::emodel_point(*mos_value);
    j["mos"] = p.mos;
    if (p.r) {
      j["r"] = qoe::detail::round_sig6(*p.r);
    } else {
      j["r"] = nullptr;
    }
    j["pow"] = qoe::detail::round_sig6(p.pow_pct);
    j["gob"] = qoe::detail::round_sig6(p.gob_pct);
    j["tme"] = qoe::detail::round_sig6(p.tme_pct);
  }
  emit(flags.output, j.dump(2) + "\n");
  return 0;
}

int run_transform(const std::string& ratings, const std::string& from_spec,
                  const std::string& to_spec, const CommonFlags& flags,
                  const std::string& output_metadata, bool verify) {
  qoe::StudyMetadata metadata =
      flags.metadata.empty() ? qoe::default_metadata() : qoe::load_metadata(flags.metadata);
  if (!from_spec.empty()) {
    const qoe::RatingScale from = parse_scale(from_spec);
    if (!flags.metadata.empty() && from != metadata.definition.scale) {
      throw std::domain_error("--from disagrees with the metadata scale");
    }
    metadata.definition.scale = from;
  }
  std::ifstream in(ratings, std::ios::binary);
  if (!in) throw qoe::IoError("cannot open ratings file: " + ratings);
  qoe::StudyDataset ds = qoe::parse_ratings_csv(in, metadata, ratings);

  const qoe::LinearTransform t{ds.definition.scale, parse_scale(to_spec)};

  qoe::StudyDataset out = ds;
  out.definition.scale = t.to;
  for (auto& r : out.ratings) r.value = t(r.value);

  std::ostringstream csv;
  qoe::write_ratings_csv(out, csv);
  emit(flags.output, csv.str());

  if (!output_metadata.empty()) {
    qoe::StudyMetadata out_meta = metadata;
    out_meta.definition.scale = t.to;
    qoe::save_metadata(out_meta, output_metadata);
  }

  if (verify) {
    const auto [a_original, a_transformed] = qoe::verify_fit_invariance(ds, t);
    ordered_json j;
    j["a_original"] = a_original;
    j["a_transformed"] = a_transformed;
    std::cerr << j.dump() << '\n';
  }
  return 0;
}

int run_curve_data(double mos_min, double mos_max, int steps, const CommonFlags& flags) {
  const auto curve = qoe::emodel::curve_data(mos_min, mos_max, steps);
  std::ostringstream out;
  if (flags.format == "json") {
    auto arr = ordered_json::array();
    for (const auto& p : curve) {
      arr.push_back({{"mos", qoe::detail::round_sig6(p.mos)},
                     {"gob", qoe::detail::round_sig6(p.gob_pct)},
                     {"pow", qoe::detail::round_sig6(p.pow_pct)},
                     {"neutral", qoe::detail::round_sig6(p.neutral_pct)}});
    }
    out << arr.dump(2) << '\n';
  } else {
    out << "mos,gob_pct,pow_pct,neutral_pct\n";
    for (const auto& p : curve) {
      out << format_fixed(p.mos, 5) << ',' << format_fixed(p.gob_pct, 3) << ','
          << format_fixed(p.pow_pct, 3) << ',' << format_fixed(p.neutral_pct, 3) << '\n';
    }
  }
  emit(flags.output, out.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QoE metrics toolkit: MOS/SOS analysis, SOS-parameter fitting, "
               "E-model tables and rating-scale transforms"};
  app.require_subcommand(1);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Per-condition statistics plus the SOS fit");
  std::string analyze_ratings;
  CommonFlags analyze_flags;
  std::vector<std::string> quantiles;
  std::vector<double> thetas;
  std::string thresholds;
  std::string variance = "population";
  analyze->add_option("ratings", analyze_ratings, "Ratings CSV")->required();
  add_common(analyze, analyze_flags);
  analyze->add_option("--quantiles", quantiles, "Quantiles as n/q (e.g. 1/2 9/10)")
      ->delimiter(',');
  analyze->add_option("--theta", thetas, "Acceptability thresholds")->delimiter(',');
  analyze->add_option("--thresholds", thresholds, "GoB/PoW/TME thresholds as gb,pw,te");
  analyze->add_option("--variance", variance, "Variance estimator for the SOS fit")
      ->check(CLI::IsMember({"population", "sample"}));

  // fit-sos
  auto* fit = app.add_subcommand("fit-sos", "Fit the SOS parameter a");
  std::string fit_ratings;
  CommonFlags fit_flags;
  std::string fit_variance = "population";
  fit->add_option("ratings", fit_ratings, "Ratings CSV")->required();
  add_common(fit, fit_flags);
  fit->add_option("--variance", fit_variance, "Variance estimator")
      ->check(CLI::IsMember({"population", "sample"}));

  // emodel-table
  auto* table = app.add_subcommand("emodel-table", "MOS / R / PoW / GoB / TME table");
  bool default_rows = false;
  std::vector<double> table_mos;
  CommonFlags table_flags;
  table_flags.format = "csv";
  table->add_flag("--default-rows", default_rows, "Emit the canonical 12 rows");
  table->add_option("--mos", table_mos, "MOS values in [1,5]")->delimiter(',');
  add_common(table, table_flags, /*with_metadata=*/false);

  // emodel-convert
  auto* convert = app.add_subcommand("emodel-convert", "Convert between MOS and Transmission Rating");
  std::optional<double> convert_mos;
  std::optional<double> convert_r;
  CommonFlags convert_flags;
  convert->add_option("--mos", convert_mos, "MOS in [1,5]");
  convert->add_option("--r", convert_r, "Transmission Rating in [0,100]");
  add_common(convert, convert_flags, /*with_metadata=*/false);

  // transform
  auto* transform = app.add_subcommand("transform", "Linearly transform ratings to another scale");
  std::string transform_ratings;
  std::string from_spec;
  std::string to_spec;
  std::string output_metadata;
  bool verify = false;
  CommonFlags transform_flags;
  transform->add_option("ratings", transform_ratings, "Ratings CSV")->required();
  transform->add_option("--from", from_spec, "Source scale lo:hi[:discrete]");
  transform->add_option("--to", to_spec, "Target scale lo:hi[:discrete]")->required();
  transform->add_option("--output-metadata", output_metadata, "Rewritten metadata sidecar path");
  transform->add_flag("--verify", verify, "Fit a before and after; report both");
  add_common(transform, transform_flags);

  // curve-data
  auto* curve = app.add_subcommand("curve-data", "MOS vs GoB/PoW/neutral curve points");
  double mos_min = 1.0;
  double mos_max = 4.5;
  int steps = 101;
  CommonFlags curve_flags;
  curve_flags.format = "csv";
  curve->add_option("--mos-min", mos_min, "Lower MOS bound");
  curve->add_option("--mos-max", mos_max, "Upper MOS bound");
  curve->add_option("--steps", steps, "Number of grid points");
  add_common(curve, curve_flags, /*with_metadata=*/false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*analyze) {
      return run_analyze(analyze_ratings, analyze_flags, quantiles, thetas, thresholds, variance);
    }
    if (*fit) return run_fit_sos(fit_ratings, fit_flags, fit_variance);
    if (*table) return run_emodel_table(default_rows, table_mos, table_flags);
    if (*convert) return run_emodel_convert(convert_mos, convert_r, convert_flags);
    if (*transform) {
      return run_transform(transform_ratings, from_spec, to_spec, transform_flags,
                           output_metadata, verify);
    }
    if (*curve) return run_curve_data(mos_min, mos_max, steps, curve_flags);
  } catch (const qoe::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const qoe::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const qoe::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
