#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>

#include "tempcast/datamodel.hpp"
#include "tempcast/error.hpp"
#include "tempcast/pipeline.hpp"

using namespace tempcast;
using std::chrono::days;

namespace {

Date day(int offset) { return Date{std::chrono::year{2020} / 3 / 1} + days{offset}; }

DailyObservation make_obs(Date date, double mean) {
  DailyObservation o;
  o.date = date;
  o[BaseFeature::kMeanTemp] = mean;
  o[BaseFeature::kMaxTemp] = mean + 4;
  o[BaseFeature::kMinTemp] = mean - 4;
  o[BaseFeature::kMeanDewPoint] = mean - 5;
  o[BaseFeature::kMaxDewPoint] = mean - 3;
  o[BaseFeature::kMinDewPoint] = mean - 7;
  o[BaseFeature::kMeanHumidity] = 60;
  o[BaseFeature::kPrecipitation] = 0.5;
  o[BaseFeature::kMeanPressure] = 1012;
  o[BaseFeature::kMeanWindSpeed] = 10;
  return o;
}

std::vector<DailyObservation> consecutive(int count, int start = 0) {
  std::vector<DailyObservation> out;
  for (int i = 0; i < count; ++i) out.push_back(make_obs(day(start + i), 10.0 + i));
  return out;
}

std::string csv_of(const std::vector<DailyObservation>& obs) { return observations_to_csv(obs); }

}  // namespace

TEST_CASE("ISO dates parse and print") {
  Date d;
  REQUIRE(parse_iso_date("2016-02-29", d));
  CHECK(format_iso_date(d) == "2016-02-29");
  CHECK_FALSE(parse_iso_date("2015-02-29", d));
  CHECK_FALSE(parse_iso_date("2015-2-28", d));
  CHECK_FALSE(parse_iso_date("2015-13-01", d));
  CHECK_FALSE(parse_iso_date("20150101xx", d));
}

TEST_CASE("ingest drops rows with blank required values") {
  SynthParams params;
  const auto obs = generate_synthetic(params);
  REQUIRE(obs.size() == 1000);
  std::string text = csv_of(obs);

  // Blank the precipitation cell on three data rows.
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto next = text.find('\n', pos);
    lines.push_back(text.substr(pos, next - pos));
    pos = next + 1;
  }
  for (const std::size_t row : {5u, 400u, 999u}) {
    auto& line = lines[row];
    std::size_t start = 0;
    for (int commas = 0; commas < 8; ++commas) start = line.find(',', start) + 1;
    const auto end = line.find(',', start);
    line.erase(start, end - start);
  }
  std::string edited;
  for (const auto& l : lines) edited += l + "\n";

  const auto result = ingest_csv_text(edited);
  CHECK(result.observations.size() == 997);
  CHECK(result.diagnostics.rows_read == 1000);
  CHECK(result.diagnostics.missing_value == 3);
  CHECK(result.diagnostics.dropped() == 3);
}

TEST_CASE("ingest edge cases") {
  const std::string header = csv_of({}).substr(0, csv_of({}).find('\n') + 1);

  SUBCASE("empty data section") {
    try {
      ingest_csv_text(header);
      FAIL("expected zero-usable-rows");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kZeroUsableRows);
    }
  }
  SUBCASE("single valid row") {
    const auto r = ingest_csv_text(csv_of({make_obs(day(0), 12.5)}));
    REQUIRE(r.observations.size() == 1);
    CHECK(r.observations[0].mean_temp() == 12.5);
    CHECK(r.diagnostics.dropped() == 0);
  }
  SUBCASE("missing column") {
    try {
      ingest_csv_text("date,meantempm\n2020-01-01,3\n");
      FAIL("expected header error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kHeaderMissingRequiredColumn);
    }
  }
  SUBCASE("file not found") {
    try {
      ingest_csv("/nonexistent/weather.csv");
      FAIL("expected file-not-found");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kFileNotFound);
    }
  }
  SUBCASE("bad numbers, bad dates, broken invariants and duplicates are counted") {
    auto bad_invariant = make_obs(day(3), 10);
    bad_invariant[BaseFeature::kMinTemp] = 20;
    std::string text = csv_of({make_obs(day(1), 1), make_obs(day(0), 0), bad_invariant, make_obs(day(1), 9)});
    text += "2020-03-09,abc,1,1,1,1,1,50,0,1000,5\n";
    text += "2020-03-10x,1,2,0,1,2,0,50,0,1000,5\n";
    const auto r = ingest_csv_text(text);
    REQUIRE(r.observations.size() == 2);
    CHECK(r.observations[0].date == day(0));
    CHECK(r.observations[1].mean_temp() == 1);  // first of the duplicates wins
    CHECK(r.diagnostics.unparseable == 2);
    CHECK(r.diagnostics.invariant_violation == 1);
    CHECK(r.diagnostics.duplicate_date == 1);
  }
}

TEST_CASE("schema remaps column names") {
  std::string text = csv_of(consecutive(2));
  text.replace(text.find("meantempm"), 9, "TempAvg");
  text.replace(0, 4, "Day");
  CHECK_THROWS_AS(ingest_csv_text(text), Error);

  CsvSchema schema;
  schema.set("meantempm", "TempAvg");
  schema.set("date", "Day");
  CHECK(ingest_csv_text(text, schema).observations.size() == 2);
  CHECK_THROWS_AS(schema.set("nonsense", "x"), Error);

  const auto path = std::filesystem::temp_directory_path() / "tempcast_schema_test.json";
  std::ofstream(path) << R"({"date": "Day", "meantempm": "TempAvg"})";
  CHECK(ingest_csv_text(text, CsvSchema::from_json_file(path)).observations.size() == 2);
  std::filesystem::remove(path);
}

TEST_CASE("lag features on consecutive days") {
  const auto ds = build_lag_features(consecutive(5), 3);
  CHECK(ds.size() == 2);
  CHECK(ds.feature_count() == 30);
  CHECK(ds.feature_names.front() == "meantempm_1");
  CHECK(ds.feature_names[10] == "meantempm_2");
  CHECK(ds.feature_names.back() == "meanwindspdm_3");
  CHECK(ds.dates[0] == day(3));
  CHECK(ds.target(0) == 13.0);
  CHECK(ds.rows(0, ds.column_index("meantempm_1")) == 12.0);
  CHECK(ds.rows(0, ds.column_index("meantempm_3")) == 10.0);
  CHECK(ds.rows(1, ds.column_index("maxtempm_2")) == 16.0);
  const std::set<std::string> unique(ds.feature_names.begin(), ds.feature_names.end());
  CHECK(unique.size() == ds.feature_names.size());
}

TEST_CASE("lag windows crossing a gap are excluded") {
  // Four days, skip one, then three more: only the fourth day has three
  // consecutive predecessors.
  auto obs = consecutive(4);
  for (int i = 5; i < 8; ++i) obs.push_back(make_obs(day(i), 10.0 + i));
  const auto ds = build_lag_features(obs, 3);
  REQUIRE(ds.size() == 1);
  CHECK(ds.dates[0] == day(3));
}

TEST_CASE("lag builder errors") {
  try {
    build_lag_features(consecutive(3), 3);
    FAIL("expected too-few-observations");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kTooFewObservations);
  }
  auto shuffled = consecutive(6);
  std::swap(shuffled[1], shuffled[4]);
  try {
    build_lag_features(shuffled, 3);
    FAIL("expected non-monotonic-dates");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNonMonotonicDates);
  }
  CHECK_THROWS_AS(build_lag_features(consecutive(6), 0), Error);
}

TEST_CASE("lag column _1 equals the previous row's target") {
  SynthParams params;
  params.n_days = 300;
  const auto obs = generate_synthetic(params);
  const auto ds = build_lag_features(obs, 3);
  CHECK(ds.size() == 297);
  const auto lag1 = ds.column_index("meantempm_1");
  for (Eigen::Index i = 1; i < ds.size(); ++i) {
    REQUIRE(ds.dates[static_cast<std::size_t>(i)] - ds.dates[static_cast<std::size_t>(i - 1)] == days{1});
    CHECK(ds.rows(i, lag1) == ds.target(i - 1));
  }
}

TEST_CASE("synthetic CSV round trip yields n - 3 rows") {
  SynthParams params;
  params.n_days = 120;
  const auto text = observations_to_csv(generate_synthetic(params));
  const auto ingested = ingest_csv_text(text);
  CHECK(ingested.diagnostics.dropped() == 0);
  CHECK(build_lag_features(ingested.observations, 3).size() == 117);
}

TEST_CASE("split sizes and strategies") {
  CHECK(test_size(997, 0.2) == 199);
  CHECK(test_size(10, 0.25) == 3);  // 2.5 rounds up
  CHECK(test_size(10, 0.2) == 2);

  const auto ds = build_lag_features(consecutive(13), 3);
  REQUIRE(ds.size() == 10);
  const auto chrono = split(ds, 0.2, SplitStrategy::kChronological, 0);
  REQUIRE(chrono.test.size() == 2);
  CHECK(chrono.test.dates[0] == ds.dates[8]);
  CHECK(chrono.test.dates[1] == ds.dates[9]);
  CHECK(chrono.train.size() == 8);

  const auto a = split(ds, 0.2, SplitStrategy::kSeededRandom, 42);
  const auto b = split(ds, 0.2, SplitStrategy::kSeededRandom, 42);
  CHECK(a.test.dates == b.test.dates);
  CHECK(a.train.dates == b.train.dates);

  try {
    split(ds, 0.01, SplitStrategy::kSeededRandom, 1);
    FAIL("expected degenerate split");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateSplit);
  }
  CHECK_THROWS_AS(split(ds, 1.0, SplitStrategy::kSeededRandom, 1), Error);
  CHECK(parse_split_strategy("chronological") == SplitStrategy::kChronological);
  CHECK_THROWS_AS(parse_split_strategy("sideways"), Error);
}

TEST_CASE("split always partitions the rows") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<Eigen::Index> pick_n(2, 400);
  std::uniform_real_distribution<double> pick_fraction(0.01, 0.99);
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::Index n = pick_n(rng);
    const double fraction = pick_fraction(rng);
    const Eigen::Index k = test_size(n, fraction);
    if (k < 1 || k >= n) continue;
    const auto strategy = trial % 2 ? SplitStrategy::kChronological : SplitStrategy::kSeededRandom;
    const auto test = test_indices(n, fraction, strategy, rng());
    REQUIRE(static_cast<Eigen::Index>(test.size()) == k);
    CHECK(std::is_sorted(test.begin(), test.end()));
    CHECK(std::adjacent_find(test.begin(), test.end()) == test.end());
    CHECK(test.front() >= 0);
    CHECK(test.back() < n);
  }
}
