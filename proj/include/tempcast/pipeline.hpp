#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tempcast/datamodel.hpp"
#include "tempcast/error.hpp"
#include "tempcast/regression.hpp"
#include "tempcast/selection.hpp"

namespace tempcast {

// ---------------------------------------------------------------------------
// Synthetic weather

/// Daily mean temperature is base + amplitude * sin(2 pi day / 365) plus an
/// AR(1) anomaly with Gaussian innovations of standard deviation noise_sd.
/// The remaining measurements are derived from it with seeded jitter.
struct SynthParams {
  std::size_t n_days = 1000;
  double base_temp = 15.0;
  double seasonal_amplitude = 10.0;
  double ar_coefficient = 0.7;
  double noise_sd = 2.0;
  std::uint64_t seed = 42;
  Date start_date = Date{std::chrono::year{2016} / 1 / 1};
};

/// Deterministic in `p`. Requires n_days >= lag_depth + 10.
std::vector<DailyObservation> generate_synthetic(const SynthParams& p, int lag_depth = 3);

// ---------------------------------------------------------------------------
// Evaluation

struct EvaluationReport {
  double mae = 0.0;
  std::size_t n_test = 0;
  std::vector<std::pair<double, double>> pairs;  // (actual, predicted)
};

/// Mean absolute error over (actual, predicted) pairs.
double mean_absolute_error(const std::vector<std::pair<double, double>>& pairs);

/// Predicts every row of `test`; its columns must equal fit.feature_names.
EvaluationReport evaluate(const RegressionFit& fit, const SupervisedDataset& test);

std::string scatter_csv(const EvaluationReport& report);
std::string scatter_svg(const EvaluationReport& report);

/// Writes scatter.csv and scatter.svg into `dir`, creating it if needed.
void export_scatter(const EvaluationReport& report, const std::filesystem::path& dir);

// ---------------------------------------------------------------------------
// Orchestration

struct PipelineConfig {
  std::optional<std::filesystem::path> input_path;  // synthetic data when empty
  CsvSchema schema;
  SynthParams synth;
  int lag_depth = 3;
  double corr_threshold = 0.6;
  double alpha = 0.05;
  double test_fraction = 0.2;
  SplitStrategy split_strategy = SplitStrategy::kSeededRandom;
  std::uint64_t seed = 42;
  std::filesystem::path output_dir;  // nothing is written when empty

  /// Throws kInvalidParameters on out-of-range values.
  void validate() const;
};

/// A pipeline failure, tagged with the stage that raised it.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.code(), "stage '" + stage + "' failed: " + cause.detail()), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct RunResult {
  IngestDiagnostics ingest;
  std::size_t observation_count = 0;
  Eigen::Index supervised_rows = 0;
  Eigen::Index feature_count = 0;
  CorrelationReport correlation;
  Eigen::Index train_rows = 0;
  EliminationTrace trace;
  RegressionFit fit;
  EvaluationReport evaluation;
  SupervisedDataset test_set;  // restricted to the final features
};

/// Selection, training and evaluation on an already-built lag dataset:
/// correlation filter on all rows, split, elimination and fit on the
/// training rows only, evaluation on the test rows.
RunResult run_on_dataset(const SupervisedDataset& ds, const PipelineConfig& cfg);

/// Loads or generates observations per the config.
IngestResult load_observations(const PipelineConfig& cfg);

/// The full pipeline. When cfg.output_dir is set the bundle (report.json,
/// summary.txt, scatter.csv, scatter.svg) is written only after every stage
/// succeeded. Stage failures surface as StageError.
RunResult run_pipeline(const PipelineConfig& cfg);

// ---------------------------------------------------------------------------
// Reports

using ReportJson = nlohmann::ordered_json;

/// Finite values rounded to 12 significant digits; non-finite values as
/// the strings "inf", "-inf", "nan".
ReportJson json_number(double v);
double number_from_json(const ReportJson& j);

ReportJson config_to_json(const PipelineConfig& cfg);
ReportJson correlation_to_json(const CorrelationReport& r);
ReportJson trace_to_json(const EliminationTrace& t);
ReportJson fit_to_json(const RegressionFit& fit);
ReportJson evaluation_to_json(const EvaluationReport& e);
ReportJson dataset_to_json(const SupervisedDataset& ds);
ReportJson report_to_json(const PipelineConfig& cfg, const RunResult& result);

RegressionFit fit_from_json(const ReportJson& j);
SupervisedDataset dataset_from_json(const ReportJson& j);

/// report.json text: two-space indent, trailing newline.
std::string dump_report(const ReportJson& j);
ReportJson read_json_file(const std::filesystem::path& path);

/// Ascending-|r| listing with the kept/dropped verdict per feature.
std::string render_correlation_table(const CorrelationReport& r);
std::string render_trace(const EliminationTrace& t);

/// Writes `files` (name, contents) into `dir`. Every file is staged under a
/// temporary name first and renamed once all writes succeeded.
void write_files(const std::filesystem::path& dir, const std::vector<std::pair<std::string, std::string>>& files);

}  // namespace tempcast
