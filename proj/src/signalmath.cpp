#include "mmsev/signalmath.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mmsev/error.hpp"

namespace mmsev::signalmath {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

std::vector<double> dct2(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n == 0) fail(Errc::empty_input, "dct2 of empty series");
  std::vector<double> out(n, 0.0);
  const double s0 = std::sqrt(1.0 / static_cast<double>(n));
  const double sk = std::sqrt(2.0 / static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    double sum = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      sum += series[t] * std::cos(kPi * (2.0 * static_cast<double>(t) + 1.0) *
                                  static_cast<double>(k) /
                                  (2.0 * static_cast<double>(n)));
    }
    out[k] = (k == 0 ? s0 : sk) * sum;
  }
  return out;
}

std::vector<double> top_k_dct(std::span<const double> series, std::size_t k) {
  if (k == 0) fail(Errc::invalid_config, "top_k_dct requires k >= 1");
  const std::vector<double> coeffs = dct2(series);
  std::vector<std::size_t> order(coeffs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ma = std::fabs(coeffs[a]);
    const double mb = std::fabs(coeffs[b]);
    if (ma != mb) return ma > mb;
    return a < b;
  });
  std::vector<double> out(k, 0.0);
  for (std::size_t i = 0; i < k && i < order.size(); ++i) out[i] = coeffs[order[i]];
  return out;
}

std::vector<double> first_k_dct(std::span<const double> series, std::size_t k) {
  if (k == 0) fail(Errc::invalid_config, "first_k_dct requires k >= 1");
  const std::vector<double> coeffs = dct2(series);
  std::vector<double> out(k, 0.0);
  for (std::size_t i = 0; i < k && i < coeffs.size(); ++i) out[i] = coeffs[i];
  return out;
}

std::vector<double> delta(std::span<const double> series, std::size_t window) {
  const std::size_t n = series.size();
  if (n == 0) fail(Errc::empty_input, "delta of empty series");
  if (window == 0) fail(Errc::invalid_config, "delta window must be >= 1");

  double denom = 0.0;
  for (std::size_t j = 1; j <= window; ++j)
    denom += static_cast<double>(j) * static_cast<double>(j);
  denom *= 2.0;

  // Replicate padding: x_{-1} = x_0, x_n = x_{n-1}.
  auto at = [&](std::ptrdiff_t t) -> double {
    if (t < 0) return series[0];
    if (t >= static_cast<std::ptrdiff_t>(n)) return series[n - 1];
    return series[static_cast<std::size_t>(t)];
  };

  std::vector<double> out(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    double num = 0.0;
    for (std::size_t j = 1; j <= window; ++j) {
      num += static_cast<double>(j) *
             (at(static_cast<std::ptrdiff_t>(t) + static_cast<std::ptrdiff_t>(j)) -
              at(static_cast<std::ptrdiff_t>(t) - static_cast<std::ptrdiff_t>(j)));
    }
    out[t] = num / denom;
  }
  return out;
}

StatSet stat_descriptors(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n == 0) fail(Errc::empty_input, "stat_descriptors of empty series");

  StatSet s;
  double sum = 0.0;
  for (double v : series) sum += v;
  s.mean = sum / static_cast<double>(n);

  std::vector<double> sorted(series.begin(), series.end());
  std::sort(sorted.begin(), sorted.end());
  s.median = (n % 2 == 1) ? sorted[n / 2]
                          : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

  double ss = 0.0;      // sum of squared deviations
  double sq = 0.0;      // sum of squares
  double peak = 0.0;
  for (double v : series) {
    const double d = v - s.mean;
    ss += d * d;
    sq += v * v;
    peak = std::max(peak, std::fabs(v));
  }
  s.std = std::sqrt(ss / static_cast<double>(n));
  const double rms = std::sqrt(sq / static_cast<double>(n));
  s.peak_to_rms = (rms == 0.0) ? 0.0 : peak / rms;
  return s;
}

}  // namespace mmsev::signalmath
