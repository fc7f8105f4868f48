// Command-line front end for the temperature forecasting pipeline.
//
// Usage example:
//   tempcast synth --n-days 1000 --out weather.csv
//   tempcast run --input weather.csv --out results/
//   tempcast evaluate --model results/report.json

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "tempcast/pipeline.hpp"

namespace {

using tempcast::PipelineConfig;

struct CliOptions {
  PipelineConfig cfg;
  std::string input;
  std::string schema_file;
  std::vector<std::string> column_overrides;
  std::string split = "random";
  std::string out;
};

void add_synth_flags(CLI::App& cmd, tempcast::SynthParams& synth) {
  cmd.add_option("--n-days", synth.n_days, "Days of synthetic weather")->capture_default_str();
  cmd.add_option("--noise-sd", synth.noise_sd, "Innovation standard deviation of the temperature anomaly (C)")
      ->capture_default_str();
  cmd.add_option("--ar", synth.ar_coefficient, "AR(1) coefficient of the anomaly")->capture_default_str();
  cmd.add_option("--amplitude", synth.seasonal_amplitude, "Seasonal amplitude (C)")->capture_default_str();
  cmd.add_option("--base-temp", synth.base_temp, "Annual mean temperature (C)")->capture_default_str();
}

void add_pipeline_flags(CLI::App& cmd, CliOptions& o) {
  cmd.add_option("--input", o.input, "Daily weather CSV; synthetic data is generated when omitted");
  cmd.add_option("--schema", o.schema_file, "JSON object mapping field names to CSV columns");
  cmd.add_option("--column", o.column_overrides, "Column override, field=column (repeatable)");
  cmd.add_option("--lag-depth", o.cfg.lag_depth, "Days of history per row")->capture_default_str();
  cmd.add_option("--corr-threshold", o.cfg.corr_threshold, "Minimum |r| against the target")->capture_default_str();
  cmd.add_option("--alpha", o.cfg.alpha, "Significance level for backward elimination")->capture_default_str();
  cmd.add_option("--test-fraction", o.cfg.test_fraction, "Share of rows held out")->capture_default_str();
  cmd.add_option("--split", o.split, "random or chronological")
      ->check(CLI::IsMember({"random", "chronological"}))
      ->capture_default_str();
  cmd.add_option("--seed", o.cfg.seed, "Seed for the split and the synthetic generator")->capture_default_str();
  add_synth_flags(cmd, o.cfg.synth);
}

void finalize(CliOptions& o) {
  if (!o.input.empty()) o.cfg.input_path = o.input;
  if (!o.schema_file.empty()) o.cfg.schema = tempcast::CsvSchema::from_json_file(o.schema_file);
  for (const auto& spec : o.column_overrides) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
      throw tempcast::Error(tempcast::ErrorCode::kInvalidParameters, "--column expects field=column, got '" + spec + "'");
    }
    o.cfg.schema.set(spec.substr(0, eq), spec.substr(eq + 1));
  }
  o.cfg.split_strategy = tempcast::parse_split_strategy(o.split);
  o.cfg.synth.seed = o.cfg.seed;
}

void print_ingest(const tempcast::RunResult& r) {
  const auto& d = r.ingest;
  std::fprintf(stderr, "observations: %zu (read %zu, dropped %zu: %zu missing, %zu unparseable, %zu invalid, %zu duplicate)\n",
               r.observation_count, d.rows_read, d.dropped(), d.missing_value, d.unparseable, d.invariant_violation,
               d.duplicate_date);
  std::fprintf(stderr, "supervised rows: %ld with %ld lag features; train %ld, test %ld\n",
               static_cast<long>(r.supervised_rows), static_cast<long>(r.feature_count), static_cast<long>(r.train_rows),
               static_cast<long>(r.test_set.size()));
}

int cmd_synth(const tempcast::SynthParams& synth, const std::string& out) {
  const std::string csv = tempcast::observations_to_csv(tempcast::generate_synthetic(synth));
  if (out.empty()) {
    std::cout << csv;
  } else {
    const std::filesystem::path path(out);
    tempcast::write_files(path.has_parent_path() ? path.parent_path() : ".", {{path.filename().string(), csv}});
  }
  return 0;
}

int cmd_run(const CliOptions& o) {
  PipelineConfig cfg = o.cfg;
  cfg.output_dir = o.out.empty() ? "tempcast-out" : o.out;
  const auto result = tempcast::run_pipeline(cfg);
  print_ingest(result);
  std::cout << tempcast::render_correlation_table(result.correlation) << "\n"
            << tempcast::render_trace(result.trace) << "\n"
            << tempcast::summarize(result.fit) << "\n";
  std::printf("test MAE: %.6f C over %zu rows\n", result.evaluation.mae, result.evaluation.n_test);
  std::printf("wrote %s\n", cfg.output_dir.string().c_str());
  return 0;
}

int cmd_select(const CliOptions& o) {
  const auto result = tempcast::run_pipeline(o.cfg);
  print_ingest(result);
  std::cout << tempcast::render_correlation_table(result.correlation) << "\n" << tempcast::render_trace(result.trace);
  if (!o.out.empty()) {
    tempcast::ReportJson j;
    j["config"] = tempcast::config_to_json(o.cfg);
    j["correlation"] = tempcast::correlation_to_json(result.correlation);
    j["elimination"] = tempcast::trace_to_json(result.trace);
    tempcast::write_files(o.out, {{"selection.json", tempcast::dump_report(j)}});
  }
  return 0;
}

int cmd_train(const CliOptions& o) {
  const auto result = tempcast::run_pipeline(o.cfg);
  print_ingest(result);
  const std::string summary = tempcast::summarize(result.fit);
  std::cout << summary;
  if (!o.out.empty()) {
    tempcast::ReportJson j;
    j["config"] = tempcast::config_to_json(o.cfg);
    j["fit"] = tempcast::fit_to_json(result.fit);
    j["test_set"] = tempcast::dataset_to_json(result.test_set);
    tempcast::write_files(o.out, {{"model.json", tempcast::dump_report(j)}, {"summary.txt", summary}});
  }
  return 0;
}

int cmd_evaluate(const std::string& model_path, const CliOptions& o) {
  const auto doc = tempcast::read_json_file(model_path);
  const auto fit = tempcast::fit_from_json(doc.contains("fit") ? doc.at("fit") : doc);

  tempcast::SupervisedDataset data;
  if (!o.input.empty()) {
    const auto obs = tempcast::ingest_csv(o.input, o.cfg.schema).observations;
    data = tempcast::build_lag_features(obs, o.cfg.lag_depth).select_columns(fit.feature_names);
  } else if (doc.contains("test_set")) {
    data = tempcast::dataset_from_json(doc.at("test_set"));
  } else {
    throw tempcast::Error(tempcast::ErrorCode::kInvalidParameters, "no --input given and the model file has no test_set");
  }

  const auto report = tempcast::evaluate(fit, data);
  std::printf("MAE: %.6f C over %zu rows\n", report.mae, report.n_test);
  if (o.input.empty() && doc.contains("evaluation")) {
    const double stored = tempcast::number_from_json(doc.at("evaluation").at("mae"));
    std::printf("stored MAE: %.6f C (difference %.3g)\n", stored, report.mae - stored);
  }
  if (!o.out.empty()) tempcast::export_scatter(report, o.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Next-day mean temperature regression with correlation and p-value feature selection"};
  app.require_subcommand(1);

  CliOptions run_opts, select_opts, train_opts, eval_opts;
  tempcast::SynthParams synth;
  std::string synth_out, model_path;

  auto* run = app.add_subcommand("run", "Full pipeline: select, train, evaluate, write the report bundle");
  add_pipeline_flags(*run, run_opts);
  run->add_option("--out", run_opts.out, "Output directory (default tempcast-out)");

  auto* synth_cmd = app.add_subcommand("synth", "Write synthetic daily weather as CSV");
  add_synth_flags(*synth_cmd, synth);
  synth_cmd->add_option("--seed", synth.seed, "Generator seed")->capture_default_str();
  synth_cmd->add_option("--out", synth_out, "Output CSV file (default stdout)");

  auto* select = app.add_subcommand("select", "Show correlation filtering and backward elimination");
  add_pipeline_flags(*select, select_opts);
  select->add_option("--out", select_opts.out, "Directory for selection.json");

  auto* train = app.add_subcommand("train", "Fit the selected model and print its summary");
  add_pipeline_flags(*train, train_opts);
  train->add_option("--out", train_opts.out, "Directory for model.json and summary.txt");

  auto* evaluate = app.add_subcommand("evaluate", "Score a stored model on its test set or on a CSV");
  evaluate->add_option("--model", model_path, "model.json or report.json")->required();
  evaluate->add_option("--input", eval_opts.input, "Daily weather CSV to score");
  evaluate->add_option("--schema", eval_opts.schema_file, "JSON object mapping field names to CSV columns");
  evaluate->add_option("--column", eval_opts.column_overrides, "Column override, field=column (repeatable)");
  evaluate->add_option("--lag-depth", eval_opts.cfg.lag_depth, "Days of history per row")->capture_default_str();
  evaluate->add_option("--out", eval_opts.out, "Directory for scatter.csv and scatter.svg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CliOptions* active = *run ? &run_opts : *select ? &select_opts : *train ? &train_opts : *evaluate ? &eval_opts : nullptr;
  try {
    if (active != nullptr) {
      finalize(*active);
      if (active != &eval_opts) active->cfg.validate();
    }
  } catch (const tempcast::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*synth_cmd) return cmd_synth(synth, synth_out);
    if (*run) return cmd_run(run_opts);
    if (*select) return cmd_select(select_opts);
    if (*train) return cmd_train(train_opts);
    return cmd_evaluate(model_path, eval_opts);
  } catch (const tempcast::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
