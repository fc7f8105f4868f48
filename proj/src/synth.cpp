#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "tempcast/pipeline.hpp"

namespace tempcast {

namespace {

// Gaussian draws built directly on the engine output so a seed yields the
// same series with any standard library.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal(double mean, double sd) {
    if (has_spare_) {
      has_spare_ = false;
      return mean + sd * spare_;
    }
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return mean + sd * radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace

std::vector<DailyObservation> generate_synthetic(const SynthParams& p, int lag_depth) {
  if (lag_depth < 1) throw Error(ErrorCode::kInvalidParameters, "lag depth must be >= 1");
  if (p.n_days < static_cast<std::size_t>(lag_depth) + 10) {
    throw Error(ErrorCode::kInvalidParameters,
                "n_days must be at least lag depth + 10 (" + std::to_string(lag_depth + 10) + ")");
  }
  if (!(p.noise_sd >= 0.0) || !std::isfinite(p.noise_sd)) throw Error(ErrorCode::kInvalidParameters, "noise_sd must be >= 0");
  if (!(std::abs(p.ar_coefficient) < 1.0)) throw Error(ErrorCode::kInvalidParameters, "ar coefficient must lie in (-1, 1)");
  if (!std::isfinite(p.base_temp) || !std::isfinite(p.seasonal_amplitude)) {
    throw Error(ErrorCode::kInvalidParameters, "base temperature and amplitude must be finite");
  }

  using F = BaseFeature;
  GaussianSource rng(p.seed);
  // Start the anomaly from its stationary distribution.
  double anomaly = rng.normal(0.0, p.noise_sd / std::sqrt(1.0 - p.ar_coefficient * p.ar_coefficient));
  double humidity = 70.0;
  double pressure = 1013.0;

  std::vector<DailyObservation> out(p.n_days);
  for (std::size_t day = 0; day < p.n_days; ++day) {
    if (day > 0) anomaly = p.ar_coefficient * anomaly + rng.normal(0.0, p.noise_sd);
    const double season = p.seasonal_amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(day) / 365.0);

    auto& o = out[day];
    o.date = p.start_date + std::chrono::days{static_cast<long>(day)};
    o[F::kMeanTemp] = p.base_temp + season + anomaly;
    o[F::kMaxTemp] = o[F::kMeanTemp] + std::abs(rng.normal(4.0, 1.5));
    o[F::kMinTemp] = o[F::kMeanTemp] - std::abs(rng.normal(4.0, 1.5));

    humidity = std::clamp(70.0 + 0.6 * (humidity - 70.0) + rng.normal(0.0, 8.0), 15.0, 100.0);
    o[F::kMeanHumidity] = humidity;
    // Dew point depression shrinks as air approaches saturation.
    o[F::kMeanDewPoint] = o[F::kMeanTemp] - (100.0 - humidity) / 5.0 + rng.normal(0.0, 0.8);
    o[F::kMaxDewPoint] = o[F::kMeanDewPoint] + std::abs(rng.normal(2.0, 1.0));
    o[F::kMinDewPoint] = o[F::kMeanDewPoint] - std::abs(rng.normal(2.0, 1.0));

    const double rain_draw = rng.uniform();
    const double rain_amount = -5.0 * std::log1p(-rng.uniform());
    o[F::kPrecipitation] = rain_draw < 0.3 ? rain_amount : 0.0;
    pressure = 1013.0 + 0.8 * (pressure - 1013.0) + rng.normal(0.0, 4.0);
    o[F::kMeanPressure] = pressure;
    o[F::kMeanWindSpeed] = std::abs(rng.normal(12.0, 5.0));
  }
  return out;
}

}  // namespace tempcast
