#include "tempcast/datamodel.hpp"

#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "tempcast/error.hpp"

namespace tempcast {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  s = s.substr(first, last - first + 1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == ',' && !quoted) {
      fields.push_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  fields.push_back(trim(line.substr(start)));
  return fields;
}

bool parse_double(std::string_view text, double& out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

bool parse_int(std::string_view text, int& out) {
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::size_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
  // Rejection sampling keeps the draw unbiased and identical across
  // standard libraries, unlike std::uniform_int_distribution.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t value;
  do {
    value = rng();
  } while (value >= limit);
  return static_cast<std::size_t>(value % bound);
}

}  // namespace

bool parse_iso_date(std::string_view text, Date& out) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return false;
  int y = 0, m = 0, d = 0;
  if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), m) || !parse_int(text.substr(8, 2), d)) {
    return false;
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return false;
  out = Date{ymd};
  return true;
}

std::string format_iso_date(Date date) {
  const std::chrono::year_month_day ymd{date};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::string check_invariants(const DailyObservation& o) {
  using F = BaseFeature;
  if (!(o[F::kMinTemp] <= o[F::kMeanTemp] && o[F::kMeanTemp] <= o[F::kMaxTemp])) {
    return "temperature not ordered min <= mean <= max";
  }
  if (!(o[F::kMinDewPoint] <= o[F::kMeanDewPoint] && o[F::kMeanDewPoint] <= o[F::kMaxDewPoint])) {
    return "dew point not ordered min <= mean <= max";
  }
  if (!(o[F::kMeanHumidity] >= 0.0 && o[F::kMeanHumidity] <= 100.0)) return "humidity outside [0, 100]";
  if (!(o[F::kPrecipitation] >= 0.0)) return "negative precipitation";
  if (!(o[F::kMeanPressure] > 0.0)) return "non-positive pressure";
  if (!(o[F::kMeanWindSpeed] >= 0.0)) return "negative wind speed";
  return {};
}

void CsvSchema::set(std::string_view field, std::string column) {
  if (field == "date") {
    date_column = std::move(column);
    return;
  }
  for (std::size_t i = 0; i < kBaseFeatureCount; ++i) {
    if (kBaseFeatureNames[i] == field) {
      columns[i] = std::move(column);
      return;
    }
  }
  throw Error(ErrorCode::kInvalidParameters, "unknown schema field '" + std::string(field) + "'");
}

CsvSchema CsvSchema::from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFileNotFound, path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kParseError, path.string() + ": schema must be a JSON object");
  CsvSchema schema;
  for (const auto& [field, column] : j.items()) {
    if (!column.is_string()) throw Error(ErrorCode::kParseError, "schema value for '" + field + "' must be a string");
    schema.set(field, column.get<std::string>());
  }
  return schema;
}

IngestResult ingest_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileNotFound, path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ingest_csv_text(buffer.str(), schema);
}

IngestResult ingest_csv_text(std::string_view text, const CsvSchema& schema) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::vector<std::string_view> lines;
  for (std::size_t pos = 0; pos <= text.size();) {
    auto next = text.find('\n', pos);
    if (next == std::string_view::npos) next = text.size();
    const auto line = text.substr(pos, next - pos);
    if (!trim(line).empty()) lines.push_back(line);
    pos = next + 1;
  }
  if (lines.empty()) throw Error(ErrorCode::kHeaderMissingRequiredColumn, "no header row");

  const auto header = split_fields(lines.front());
  auto locate = [&](const std::string& name) -> std::size_t {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw Error(ErrorCode::kHeaderMissingRequiredColumn, "required column '" + name + "' not in header");
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t date_col = locate(schema.date_column);
  std::array<std::size_t, kBaseFeatureCount> value_cols{};
  for (std::size_t i = 0; i < kBaseFeatureCount; ++i) value_cols[i] = locate(schema.columns[i]);

  IngestResult result;
  auto& diag = result.diagnostics;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    ++diag.rows_read;
    const auto fields = split_fields(lines[li]);
    auto cell = [&](std::size_t col) -> std::string_view { return col < fields.size() ? fields[col] : std::string_view{}; };

    bool missing = cell(date_col).empty();
    for (const auto col : value_cols) missing = missing || cell(col).empty();
    if (missing) {
      ++diag.missing_value;
      continue;
    }

    DailyObservation obs;
    bool ok = parse_iso_date(cell(date_col), obs.date);
    for (std::size_t i = 0; ok && i < kBaseFeatureCount; ++i) ok = parse_double(cell(value_cols[i]), obs.values[i]);
    if (!ok) {
      ++diag.unparseable;
      continue;
    }
    if (!check_invariants(obs).empty()) {
      ++diag.invariant_violation;
      continue;
    }
    result.observations.push_back(obs);
  }

  auto& obs = result.observations;
  std::stable_sort(obs.begin(), obs.end(), [](const auto& a, const auto& b) { return a.date < b.date; });
  const auto last = std::unique(obs.begin(), obs.end(), [](const auto& a, const auto& b) { return a.date == b.date; });
  diag.duplicate_date = static_cast<std::size_t>(obs.end() - last);
  obs.erase(last, obs.end());

  if (obs.empty()) {
    throw Error(ErrorCode::kZeroUsableRows,
                "no usable rows (" + std::to_string(diag.rows_read) + " read, " + std::to_string(diag.dropped()) +
                    " dropped)");
  }
  return result;
}

std::string observations_to_csv(const std::vector<DailyObservation>& obs) {
  std::string out = "date";
  for (const auto name : kBaseFeatureNames) {
    out += ',';
    out += name;
  }
  out += '\n';
  char buf[64];
  for (const auto& o : obs) {
    out += format_iso_date(o.date);
    for (const double v : o.values) {
      std::snprintf(buf, sizeof buf, ",%.10g", v);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

Eigen::Index SupervisedDataset::column_index(std::string_view name) const {
  const auto it = std::find(feature_names.begin(), feature_names.end(), name);
  return it == feature_names.end() ? -1 : static_cast<Eigen::Index>(it - feature_names.begin());
}

SupervisedDataset SupervisedDataset::select_columns(const std::vector<std::string>& names) const {
  std::vector<Eigen::Index> cols;
  cols.reserve(names.size());
  for (const auto& name : names) {
    const auto idx = column_index(name);
    if (idx < 0) throw Error(ErrorCode::kColumnMismatch, "dataset has no column '" + name + "'");
    cols.push_back(idx);
  }
  SupervisedDataset out;
  out.feature_names = names;
  out.rows = rows(Eigen::all, cols);
  out.target = target;
  out.dates = dates;
  return out;
}

SupervisedDataset SupervisedDataset::select_rows(const std::vector<Eigen::Index>& indices) const {
  SupervisedDataset out;
  out.feature_names = feature_names;
  out.rows = rows(indices, Eigen::all);
  out.target = target(indices);
  out.dates.reserve(indices.size());
  for (const auto i : indices) out.dates.push_back(dates[static_cast<std::size_t>(i)]);
  return out;
}

std::string lag_feature_name(BaseFeature feature, int lag) {
  return std::string(kBaseFeatureNames[static_cast<std::size_t>(feature)]) + "_" + std::to_string(lag);
}

SupervisedDataset build_lag_features(const std::vector<DailyObservation>& obs, int lag_depth) {
  if (lag_depth < 1) throw Error(ErrorCode::kInvalidParameters, "lag depth must be >= 1");
  const auto depth = static_cast<std::size_t>(lag_depth);
  if (obs.size() <= depth) {
    throw Error(ErrorCode::kTooFewObservations, std::to_string(obs.size()) + " observations for lag depth " +
                                                     std::to_string(lag_depth));
  }
  for (std::size_t i = 1; i < obs.size(); ++i) {
    if (!(obs[i - 1].date < obs[i].date)) {
      throw Error(ErrorCode::kNonMonotonicDates, "dates not strictly increasing at " + format_iso_date(obs[i].date));
    }
  }

  std::vector<std::size_t> anchors;
  for (std::size_t i = depth; i < obs.size(); ++i) {
    // Strictly increasing dates: a span of exactly `depth` days over `depth`
    // steps means every step is one day.
    if (obs[i].date - obs[i - depth].date == std::chrono::days{lag_depth}) anchors.push_back(i);
  }
  if (anchors.empty()) {
    throw Error(ErrorCode::kTooFewObservations,
                "no day has " + std::to_string(lag_depth) + " consecutive predecessors");
  }

  SupervisedDataset ds;
  for (int lag = 1; lag <= lag_depth; ++lag) {
    for (std::size_t f = 0; f < kBaseFeatureCount; ++f) {
      ds.feature_names.push_back(lag_feature_name(static_cast<BaseFeature>(f), lag));
    }
  }
  const auto n = static_cast<Eigen::Index>(anchors.size());
  ds.rows.resize(n, static_cast<Eigen::Index>(kBaseFeatureCount * depth));
  ds.target.resize(n);
  ds.dates.reserve(anchors.size());
  for (Eigen::Index r = 0; r < n; ++r) {
    const std::size_t i = anchors[static_cast<std::size_t>(r)];
    ds.target(r) = obs[i].mean_temp();
    ds.dates.push_back(obs[i].date);
    for (std::size_t lag = 1; lag <= depth; ++lag) {
      const auto& past = obs[i - lag];
      for (std::size_t f = 0; f < kBaseFeatureCount; ++f) {
        ds.rows(r, static_cast<Eigen::Index>((lag - 1) * kBaseFeatureCount + f)) = past.values[f];
      }
    }
  }
  return ds;
}

std::string_view to_string(SplitStrategy s) {
  return s == SplitStrategy::kChronological ? "chronological" : "random";
}

SplitStrategy parse_split_strategy(std::string_view text) {
  if (text == "random" || text == "seeded-random") return SplitStrategy::kSeededRandom;
  if (text == "chronological") return SplitStrategy::kChronological;
  throw Error(ErrorCode::kInvalidParameters, "unknown split strategy '" + std::string(text) + "'");
}

Eigen::Index test_size(Eigen::Index n, double test_fraction) {
  return static_cast<Eigen::Index>(std::floor(test_fraction * static_cast<double>(n) + 0.5));
}

std::vector<Eigen::Index> test_indices(Eigen::Index n, double test_fraction, SplitStrategy strategy,
                                       std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidParameters, "test fraction must lie in (0, 1)");
  }
  const Eigen::Index k = test_size(n, test_fraction);
  if (n < 2 || k < 1 || k >= n) {
    throw Error(ErrorCode::kDegenerateSplit, "splitting " + std::to_string(n) + " rows with fraction " +
                                                 std::to_string(test_fraction) + " leaves an empty side");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  if (strategy == SplitStrategy::kChronological) {
    return {order.end() - k, order.end()};
  }
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[bounded_draw(rng, i + 1)]);
  std::vector<Eigen::Index> picked(order.begin(), order.begin() + k);
  std::sort(picked.begin(), picked.end());
  return picked;
}

SplitDataset split(const SupervisedDataset& ds, double test_fraction, SplitStrategy strategy, std::uint64_t seed) {
  const auto test_rows = test_indices(ds.size(), test_fraction, strategy, seed);
  std::vector<Eigen::Index> train_rows;
  train_rows.reserve(static_cast<std::size_t>(ds.size()) - test_rows.size());
  auto next_test = test_rows.begin();
  for (Eigen::Index i = 0; i < ds.size(); ++i) {
    if (next_test != test_rows.end() && *next_test == i) {
      ++next_test;
    } else {
      train_rows.push_back(i);
    }
  }
  return {ds.select_rows(train_rows), ds.select_rows(test_rows), seed, strategy};
}

}  // namespace tempcast
