#pragma once

#include <Eigen/Dense>

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace tempcast {

using Date = std::chrono::sys_days;

/// Parses YYYY-MM-DD. Returns false on anything else, including
/// out-of-range calendar dates.
bool parse_iso_date(std::string_view text, Date& out);
std::string format_iso_date(Date date);

enum class BaseFeature : std::size_t {
  kMeanTemp,
  kMaxTemp,
  kMinTemp,
  kMeanDewPoint,
  kMaxDewPoint,
  kMinDewPoint,
  kMeanHumidity,
  kPrecipitation,
  kMeanPressure,
  kMeanWindSpeed,
};

inline constexpr std::size_t kBaseFeatureCount = 10;

/// Canonical names, in BaseFeature order. These are also the default CSV
/// column names and the stems of the lag feature labels.
inline constexpr std::array<std::string_view, kBaseFeatureCount> kBaseFeatureNames = {
    "meantempm",  "maxtempm",  "mintempm",  "meandewptm",    "maxdewptm",
    "mindewptm",  "meanhumidity", "precipm", "meanpressurem", "meanwindspdm",
};

inline constexpr std::string_view kTargetName = "meantempm";

/// One day of weather. Temperatures and dew points in degrees C, humidity in
/// percent, precipitation in mm, pressure in hPa, wind in km/h.
struct DailyObservation {
  Date date{};
  std::array<double, kBaseFeatureCount> values{};

  double& operator[](BaseFeature f) { return values[static_cast<std::size_t>(f)]; }
  double operator[](BaseFeature f) const { return values[static_cast<std::size_t>(f)]; }

  double mean_temp() const { return (*this)[BaseFeature::kMeanTemp]; }

  friend bool operator==(const DailyObservation&, const DailyObservation&) = default;
};

/// Empty string when the observation satisfies the physical invariants
/// (ordered min/mean/max, humidity in [0, 100], non-negative precipitation
/// and wind, positive pressure); otherwise a description of the first
/// violation.
std::string check_invariants(const DailyObservation& obs);

/// Maps each base feature (and the date) to a CSV column header.
struct CsvSchema {
  std::string date_column = "date";
  std::array<std::string, kBaseFeatureCount> columns = [] {
    std::array<std::string, kBaseFeatureCount> out;
    for (std::size_t i = 0; i < kBaseFeatureCount; ++i) out[i] = std::string(kBaseFeatureNames[i]);
    return out;
  }();

  /// Remaps one field; `field` is "date" or a base feature name. Throws
  /// kInvalidParameters for unknown fields.
  void set(std::string_view field, std::string column);
  /// Reads a JSON object of field -> column overrides.
  static CsvSchema from_json_file(const std::filesystem::path& path);
};

struct IngestDiagnostics {
  std::size_t rows_read = 0;
  std::size_t missing_value = 0;       // empty cell in a required column
  std::size_t unparseable = 0;         // bad number, bad date, short row
  std::size_t invariant_violation = 0; // e.g. min > max
  std::size_t duplicate_date = 0;      // later rows sharing an earlier date

  std::size_t dropped() const { return missing_value + unparseable + invariant_violation + duplicate_date; }
};

struct IngestResult {
  std::vector<DailyObservation> observations;  // sorted by date
  IngestDiagnostics diagnostics;
};

IngestResult ingest_csv(const std::filesystem::path& path, const CsvSchema& schema = {});
IngestResult ingest_csv_text(std::string_view text, const CsvSchema& schema = {});

/// Writes observations in the default schema; used by the synthetic
/// generator's CLI and by tests.
std::string observations_to_csv(const std::vector<DailyObservation>& obs);

/// Design-matrix view: row i is the lag window for the day dates[i], and
/// target[i] is that day's mean temperature.
struct SupervisedDataset {
  std::vector<std::string> feature_names;
  Eigen::MatrixXd rows;
  Eigen::VectorXd target;
  std::vector<Date> dates;

  Eigen::Index size() const { return rows.rows(); }
  Eigen::Index feature_count() const { return rows.cols(); }

  /// Index of `name` in feature_names, or -1.
  Eigen::Index column_index(std::string_view name) const;

  /// Keeps the named columns in the order given. Throws kColumnMismatch on
  /// an unknown name.
  SupervisedDataset select_columns(const std::vector<std::string>& names) const;
  SupervisedDataset select_rows(const std::vector<Eigen::Index>& indices) const;
};

std::string lag_feature_name(BaseFeature feature, int lag);

/// Builds base_k features for k = 1..lag_depth, lag-major (all base features
/// at lag 1, then lag 2, ...). Days whose lag window is not lag_depth
/// consecutive calendar days are skipped.
SupervisedDataset build_lag_features(const std::vector<DailyObservation>& obs, int lag_depth);

enum class SplitStrategy { kSeededRandom, kChronological };

std::string_view to_string(SplitStrategy s);
SplitStrategy parse_split_strategy(std::string_view text);

struct SplitDataset {
  SupervisedDataset train;
  SupervisedDataset test;
  std::uint64_t seed = 0;
  SplitStrategy strategy = SplitStrategy::kSeededRandom;
};

/// round(test_fraction * n) with ties rounded up.
Eigen::Index test_size(Eigen::Index n, double test_fraction);

/// Row indices assigned to the test set, ascending. Pure function of
/// (n, test_fraction, strategy, seed).
std::vector<Eigen::Index> test_indices(Eigen::Index n, double test_fraction, SplitStrategy strategy,
                                       std::uint64_t seed);

/// Partitions rows; both halves keep the source's row order.
SplitDataset split(const SupervisedDataset& ds, double test_fraction, SplitStrategy strategy, std::uint64_t seed);

}  // namespace tempcast
