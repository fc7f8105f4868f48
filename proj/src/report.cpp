#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <system_error>

#include "tempcast/pipeline.hpp"

namespace tempcast {

ReportJson json_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

double number_from_json(const ReportJson& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
  }
  throw Error(ErrorCode::kParseError, "expected a number, got " + j.dump());
}

namespace {

ReportJson vector_json(const Eigen::VectorXd& v) {
  ReportJson out = ReportJson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(json_number(v(i)));
  return out;
}

Eigen::VectorXd vector_from_json(const ReportJson& j) {
  if (!j.is_array()) throw Error(ErrorCode::kParseError, "expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number_from_json(j[i]);
  return v;
}

const ReportJson& field(const ReportJson& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::kParseError, std::string("missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

ReportJson config_to_json(const PipelineConfig& cfg) {
  ReportJson j;
  if (cfg.input_path) {
    j["input"] = cfg.input_path->generic_string();
  } else {
    const auto& s = cfg.synth;
    j["input"] = nullptr;
    j["synth"] = {{"n_days", s.n_days},
                  {"base_temp", json_number(s.base_temp)},
                  {"seasonal_amplitude", json_number(s.seasonal_amplitude)},
                  {"ar_coefficient", json_number(s.ar_coefficient)},
                  {"noise_sd", json_number(s.noise_sd)},
                  {"seed", s.seed},
                  {"start_date", format_iso_date(s.start_date)}};
  }
  j["lag_depth"] = cfg.lag_depth;
  j["corr_threshold"] = json_number(cfg.corr_threshold);
  j["alpha"] = json_number(cfg.alpha);
  j["test_fraction"] = json_number(cfg.test_fraction);
  j["split"] = std::string(to_string(cfg.split_strategy));
  j["seed"] = cfg.seed;
  return j;
}

ReportJson correlation_to_json(const CorrelationReport& r) {
  ReportJson entries = ReportJson::array();
  for (const auto& e : r.entries) {
    ReportJson item;
    item["feature"] = e.feature;
    item["r"] = json_number(e.r);
    item["abs_r"] = json_number(std::abs(e.r));
    item["constant"] = e.constant;
    entries.push_back(std::move(item));
  }
  ReportJson j;
  j["threshold"] = json_number(r.threshold);
  j["entries"] = std::move(entries);
  j["kept"] = r.kept;
  j["dropped"] = r.dropped;
  j["constant_features"] = r.constant_features;
  return j;
}

ReportJson trace_to_json(const EliminationTrace& t) {
  ReportJson steps = ReportJson::array();
  for (const auto& s : t.steps) {
    ReportJson item;
    item["removed_feature"] = s.removed_feature;
    item["p_value"] = json_number(s.p_value);
    item["surviving_count"] = s.surviving_count;
    steps.push_back(std::move(item));
  }
  ReportJson j;
  j["alpha"] = json_number(t.alpha);
  j["steps"] = std::move(steps);
  j["final_features"] = t.final_features;
  return j;
}

ReportJson fit_to_json(const RegressionFit& fit) {
  ReportJson j;
  j["feature_names"] = fit.feature_names;
  j["intercept"] = json_number(fit.intercept);
  j["coefficients"] = vector_json(fit.coefficients);
  j["std_errors"] = vector_json(fit.std_errors);
  j["t_stats"] = vector_json(fit.t_stats);
  j["p_values"] = vector_json(fit.p_values);
  j["r_squared"] = json_number(fit.r_squared);
  j["adj_r_squared"] = json_number(fit.adj_r_squared);
  j["f_statistic"] = json_number(fit.f_statistic);
  j["f_pvalue"] = json_number(fit.f_pvalue);
  j["residual_sum_squares"] = json_number(fit.residual_sum_squares);
  j["n_obs"] = fit.n_obs;
  j["df_resid"] = fit.df_resid;
  return j;
}

RegressionFit fit_from_json(const ReportJson& j) {
  RegressionFit fit;
  try {
    fit.feature_names = field(j, "feature_names").get<std::vector<std::string>>();
    fit.n_obs = field(j, "n_obs").get<Eigen::Index>();
    fit.df_resid = field(j, "df_resid").get<Eigen::Index>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  fit.intercept = number_from_json(field(j, "intercept"));
  fit.coefficients = vector_from_json(field(j, "coefficients"));
  fit.std_errors = vector_from_json(field(j, "std_errors"));
  fit.t_stats = vector_from_json(field(j, "t_stats"));
  fit.p_values = vector_from_json(field(j, "p_values"));
  fit.r_squared = number_from_json(field(j, "r_squared"));
  fit.adj_r_squared = number_from_json(field(j, "adj_r_squared"));
  fit.f_statistic = number_from_json(field(j, "f_statistic"));
  fit.f_pvalue = number_from_json(field(j, "f_pvalue"));
  fit.residual_sum_squares = number_from_json(field(j, "residual_sum_squares"));

  const auto p = static_cast<Eigen::Index>(fit.feature_names.size());
  if (fit.coefficients.size() != p || fit.std_errors.size() != p + 1 || fit.t_stats.size() != p + 1 ||
      fit.p_values.size() != p + 1) {
    throw Error(ErrorCode::kParseError, "fit vectors have inconsistent lengths");
  }
  return fit;
}

ReportJson evaluation_to_json(const EvaluationReport& e) {
  ReportJson pairs = ReportJson::array();
  for (const auto& [actual, predicted] : e.pairs) pairs.push_back(ReportJson::array({json_number(actual), json_number(predicted)}));
  ReportJson j;
  j["mae"] = json_number(e.mae);
  j["n_test"] = e.n_test;
  j["pairs"] = std::move(pairs);
  return j;
}

ReportJson dataset_to_json(const SupervisedDataset& ds) {
  ReportJson dates = ReportJson::array();
  for (const auto d : ds.dates) dates.push_back(format_iso_date(d));
  ReportJson rows = ReportJson::array();
  for (Eigen::Index i = 0; i < ds.size(); ++i) rows.push_back(vector_json(ds.rows.row(i).transpose()));
  ReportJson j;
  j["feature_names"] = ds.feature_names;
  j["dates"] = std::move(dates);
  j["target"] = vector_json(ds.target);
  j["rows"] = std::move(rows);
  return j;
}

SupervisedDataset dataset_from_json(const ReportJson& j) {
  SupervisedDataset ds;
  try {
    ds.feature_names = field(j, "feature_names").get<std::vector<std::string>>();
    for (const auto& d : field(j, "dates")) {
      Date date;
      if (!parse_iso_date(d.get<std::string>(), date)) throw Error(ErrorCode::kParseError, "bad date " + d.dump());
      ds.dates.push_back(date);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  ds.target = vector_from_json(field(j, "target"));
  const auto& rows = field(j, "rows");
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(ds.feature_names.size());
  if (ds.target.size() != n || static_cast<Eigen::Index>(ds.dates.size()) != n) {
    throw Error(ErrorCode::kParseError, "dataset row, target and date counts differ");
  }
  ds.rows.resize(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd row = vector_from_json(rows[static_cast<std::size_t>(i)]);
    if (row.size() != p) throw Error(ErrorCode::kParseError, "dataset row has the wrong width");
    ds.rows.row(i) = row.transpose();
  }
  return ds;
}

ReportJson report_to_json(const PipelineConfig& cfg, const RunResult& result) {
  ReportJson j;
  j["config"] = config_to_json(cfg);
  const auto& d = result.ingest;
  j["ingest"] = {{"rows_read", d.rows_read},
                 {"observations", result.observation_count},
                 {"dropped", {{"missing_value", d.missing_value},
                              {"unparseable", d.unparseable},
                              {"invariant_violation", d.invariant_violation},
                              {"duplicate_date", d.duplicate_date}}}};
  j["dataset"] = {{"rows", result.supervised_rows}, {"features", result.feature_count}};
  j["correlation"] = correlation_to_json(result.correlation);
  j["split"] = {{"strategy", std::string(to_string(cfg.split_strategy))},
                {"seed", cfg.seed},
                {"test_fraction", json_number(cfg.test_fraction)},
                {"train_rows", result.train_rows},
                {"test_rows", result.test_set.size()}};
  j["elimination"] = trace_to_json(result.trace);
  j["fit"] = fit_to_json(result.fit);
  j["summary"] = summarize(result.fit);
  j["evaluation"] = evaluation_to_json(result.evaluation);
  j["test_set"] = dataset_to_json(result.test_set);
  return j;
}

std::string dump_report(const ReportJson& j) { return j.dump(2) + "\n"; }

ReportJson read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFileNotFound, path.string());
  try {
    return ReportJson::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
}

std::string render_correlation_table(const CorrelationReport& r) {
  std::size_t width = 8;
  for (const auto& e : r.entries) width = std::max(width, e.feature.size() + 2);
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-*s %10s %10s  %s\n", static_cast<int>(width), "feature", "r", "|r|", "verdict");
  out += buf;
  for (const auto& e : r.entries) {
    const char* verdict = e.constant ? "dropped (constant)" : (std::abs(e.r) >= r.threshold ? "kept" : "dropped");
    if (e.constant) {
      std::snprintf(buf, sizeof buf, "%-*s %10s %10s  %s\n", static_cast<int>(width), e.feature.c_str(), "n/a", "n/a",
                    verdict);
    } else {
      std::snprintf(buf, sizeof buf, "%-*s %10.6f %10.6f  %s\n", static_cast<int>(width), e.feature.c_str(), e.r,
                    std::abs(e.r), verdict);
    }
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "threshold |r| >= %g: %zu kept, %zu dropped\n", r.threshold, r.kept.size(),
                r.dropped.size());
  out += buf;
  return out;
}

std::string render_trace(const EliminationTrace& t) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "backward elimination, alpha = %g\n", t.alpha);
  out += buf;
  if (t.steps.empty()) out += "no feature removed\n";
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const auto& s = t.steps[i];
    std::snprintf(buf, sizeof buf, "%4zu  removed %-20s p = %#.6g, %zu remaining\n", i + 1, s.removed_feature.c_str(),
                  s.p_value, s.surviving_count);
    out += buf;
  }
  out += "final features (" + std::to_string(t.final_features.size()) + "):";
  for (const auto& f : t.final_features) out += " " + f;
  out += "\n";
  return out;
}

void write_files(const std::filesystem::path& dir, const std::vector<std::pair<std::string, std::string>>& files) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorCode::kUnwritableDirectory, dir.string() + (ec ? ": " + ec.message() : ""));
  }

  std::vector<fs::path> staged;
  auto discard = [&] {
    for (const auto& p : staged) fs::remove(p, ec);
  };
  for (const auto& [name, contents] : files) {
    const fs::path tmp = dir / (name + ".partial");
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (out) {
      staged.push_back(tmp);
      out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
      out.close();
    }
    if (!out) {
      discard();
      throw Error(ErrorCode::kUnwritableDirectory, "cannot write " + (dir / name).string());
    }
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    fs::rename(staged[i], dir / files[i].first, ec);
    if (ec) {
      discard();
      throw Error(ErrorCode::kUnwritableDirectory, "cannot rename into " + (dir / files[i].first).string());
    }
  }
}

}  // namespace tempcast
