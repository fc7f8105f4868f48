#include "tempcast/pipeline.hpp"

#include <cmath>

namespace tempcast {

namespace {

template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e);
  }
}

}  // namespace

void PipelineConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::kInvalidParameters, what);
  };
  require(lag_depth >= 1, "lag depth must be >= 1");
  require(corr_threshold > 0.0 && corr_threshold < 1.0, "correlation threshold must lie in (0, 1)");
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  require(test_fraction > 0.0 && test_fraction < 1.0, "test fraction must lie in (0, 1)");
}

IngestResult load_observations(const PipelineConfig& cfg) {
  if (cfg.input_path) return stage("ingest", [&] { return ingest_csv(*cfg.input_path, cfg.schema); });
  return stage("generate", [&] {
    IngestResult r;
    r.observations = generate_synthetic(cfg.synth, cfg.lag_depth);
    r.diagnostics.rows_read = r.observations.size();
    return r;
  });
}

RunResult run_on_dataset(const SupervisedDataset& ds, const PipelineConfig& cfg) {
  stage("config", [&] { cfg.validate(); });

  RunResult result;
  result.supervised_rows = ds.size();
  result.feature_count = ds.feature_count();

  FilterResult filtered = stage("correlation_filter", [&] { return correlation_filter(ds, cfg.corr_threshold); });
  result.correlation = std::move(filtered.report);

  const SplitDataset parts =
      stage("split", [&] { return split(filtered.dataset, cfg.test_fraction, cfg.split_strategy, cfg.seed); });
  result.train_rows = parts.train.size();

  EliminationResult selected = stage("backward_eliminate", [&] { return backward_eliminate(parts.train, cfg.alpha); });
  result.trace = std::move(selected.trace);
  result.fit = std::move(selected.fit);

  result.test_set = stage("evaluate", [&] { return parts.test.select_columns(result.trace.final_features); });
  result.evaluation = stage("evaluate", [&] { return evaluate(result.fit, result.test_set); });
  return result;
}

RunResult run_pipeline(const PipelineConfig& cfg) {
  stage("config", [&] { cfg.validate(); });
  const IngestResult loaded = load_observations(cfg);
  const SupervisedDataset ds =
      stage("build_lag_features", [&] { return build_lag_features(loaded.observations, cfg.lag_depth); });

  RunResult result = run_on_dataset(ds, cfg);
  result.ingest = loaded.diagnostics;
  result.observation_count = loaded.observations.size();

  if (!cfg.output_dir.empty()) {
    stage("write", [&] {
      write_files(cfg.output_dir, {{"report.json", dump_report(report_to_json(cfg, result))},
                                   {"summary.txt", summarize(result.fit)},
                                   {"scatter.csv", scatter_csv(result.evaluation)},
                                   {"scatter.svg", scatter_svg(result.evaluation)}});
    });
  }
  return result;
}

}  // namespace tempcast
