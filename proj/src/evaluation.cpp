#include <algorithm>
#include <cmath>
#include <cstdio>

#include "tempcast/pipeline.hpp"

namespace tempcast {

double mean_absolute_error(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.empty()) throw Error(ErrorCode::kInsufficientObservations, "no pairs to score");
  double total = 0.0;
  for (const auto& [actual, predicted] : pairs) total += std::abs(actual - predicted);
  return total / static_cast<double>(pairs.size());
}

EvaluationReport evaluate(const RegressionFit& fit, const SupervisedDataset& test) {
  if (test.feature_names != fit.feature_names) {
    throw Error(ErrorCode::kColumnMismatch, "test columns do not match the fitted features");
  }
  if (test.size() == 0) throw Error(ErrorCode::kInsufficientObservations, "empty test set");
  const Eigen::VectorXd predicted = predict_rows(fit, test.rows);
  EvaluationReport report;
  report.n_test = static_cast<std::size_t>(test.size());
  report.pairs.reserve(report.n_test);
  for (Eigen::Index i = 0; i < test.size(); ++i) report.pairs.emplace_back(test.target(i), predicted(i));
  report.mae = mean_absolute_error(report.pairs);
  return report;
}

std::string scatter_csv(const EvaluationReport& report) {
  std::string out = "actual,predicted\n";
  char buf[96];
  for (const auto& [actual, predicted] : report.pairs) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f\n", actual, predicted);
    out += buf;
  }
  return out;
}

std::string scatter_svg(const EvaluationReport& report) {
  if (report.pairs.empty()) throw Error(ErrorCode::kInsufficientObservations, "no pairs to plot");
  double lo = report.pairs.front().first;
  double hi = lo;
  for (const auto& [a, p] : report.pairs) {
    lo = std::min({lo, a, p});
    hi = std::max({hi, a, p});
  }
  const double pad = std::max(0.5, 0.05 * (hi - lo));
  lo = std::floor(lo - pad);
  hi = std::ceil(hi + pad);

  // Shared scale on both axes so y = x is the diagonal.
  constexpr double kSize = 480.0;
  constexpr double kMargin = 60.0;
  const double span = hi - lo;
  auto sx = [&](double v) { return kMargin + (v - lo) / span * kSize; };
  auto sy = [&](double v) { return kMargin + kSize - (v - lo) / span * kSize; };

  std::string svg;
  char buf[256];
  const double total = kSize + 2 * kMargin;
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n",
                total, total, total, total);
  svg += buf;
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"none\" stroke=\"black\"/>\n", kMargin,
                kMargin, kSize, kSize);
  svg += buf;

  const double step = span > 40 ? 10.0 : (span > 15 ? 5.0 : (span > 6 ? 2.0 : 1.0));
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9; v += step) {
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" font-size=\"11\" text-anchor=\"middle\">%g</text>\n"
                  "<text x=\"%.2f\" y=\"%.2f\" font-size=\"11\" text-anchor=\"end\">%g</text>\n",
                  sx(v), kMargin + kSize + 16, v, kMargin - 6, sy(v) + 4, v);
    svg += buf;
  }
  std::snprintf(buf, sizeof buf,
                "<line class=\"reference\" x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"red\" "
                "stroke-dasharray=\"6,4\"/>\n",
                sx(lo), sy(lo), sx(hi), sy(hi));
  svg += buf;
  for (const auto& [actual, predicted] : report.pairs) {
    std::snprintf(buf, sizeof buf,
                  "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2.5\" fill=\"steelblue\" fill-opacity=\"0.7\"/>\n", sx(actual),
                  sy(predicted));
    svg += buf;
  }
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.2f\" y=\"%.2f\" font-size=\"13\" text-anchor=\"middle\">Actual (\xC2\xB0"
                "C)</text>\n",
                kMargin + kSize / 2, total - 18);
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"18\" y=\"%.2f\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 %.2f)\">"
                "Predicted (\xC2\xB0"
                "C)</text>\n",
                kMargin + kSize / 2, kMargin + kSize / 2);
  svg += buf;
  svg += "</svg>\n";
  return svg;
}

void export_scatter(const EvaluationReport& report, const std::filesystem::path& dir) {
  if (report.pairs.empty()) throw Error(ErrorCode::kInsufficientObservations, "no pairs to export");
  write_files(dir, {{"scatter.csv", scatter_csv(report)}, {"scatter.svg", scatter_svg(report)}});
}

}  // namespace tempcast
