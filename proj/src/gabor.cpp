#include "teager/gabor.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "teager/error.hpp"
#include "teager/tkeo.hpp"

namespace teager {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

GaborFilter make_filter(double center_hz, double sigma_f_hz, double fs_hz,
                        std::optional<std::size_t> max_kernel_length) {
  double sigma_t = 1.0 / (kTwoPi * sigma_f_hz);
  auto half = static_cast<std::size_t>(std::ceil(4.0 * sigma_t * fs_hz));
  if (max_kernel_length && 2 * half + 1 > *max_kernel_length) {
    if (*max_kernel_length < 3) {
      throw Error(ErrorKind::parameter, "build_filterbank: kernel cap must allow at least 3 taps");
    }
    half = (*max_kernel_length - 1) / 2;
    sigma_t = static_cast<double>(half) / (4.0 * fs_hz);
    sigma_f_hz = 1.0 / (kTwoPi * sigma_t);
  }

  std::vector<double> kernel(2 * half + 1);
  const double inv_two_var = 1.0 / (2.0 * sigma_t * sigma_t);
  for (std::size_t i = 0; i < kernel.size(); ++i) {
    const double t = (static_cast<double>(i) - static_cast<double>(half)) / fs_hz;
    kernel[i] = std::exp(-t * t * inv_two_var) * std::cos(kTwoPi * center_hz * t);
  }
  GaborFilter f{center_hz, sigma_f_hz, fs_hz, std::move(kernel)};
  const double gain = f.response(center_hz);
  if (!(std::abs(gain) > 0.0)) {
    throw Error(ErrorKind::design, "build_filterbank: zero gain at center frequency");
  }
  for (auto& h : f.kernel) h /= gain;
  return f;
}

}  // namespace

double GaborFilter::response(double f_hz) const {
  const auto half = static_cast<std::ptrdiff_t>(half_length());
  const double w = kTwoPi * f_hz / fs_hz;
  double acc = kernel[static_cast<std::size_t>(half)];
  for (std::ptrdiff_t m = 1; m <= half; ++m) {
    acc += 2.0 * kernel[static_cast<std::size_t>(half + m)] * std::cos(w * static_cast<double>(m));
  }
  return acc;
}

GaborFilterbank::GaborFilterbank(FrequencyBand band, std::vector<GaborFilter> filters)
    : band_(std::move(band)), filters_(std::move(filters)) {
  if (filters_.empty()) throw Error(ErrorKind::parameter, "GaborFilterbank: no filters");
  for (std::size_t k = 1; k < filters_.size(); ++k) {
    if (!(filters_[k].center_hz > filters_[k - 1].center_hz)) {
      throw Error(ErrorKind::parameter, "GaborFilterbank: centers must be strictly increasing");
    }
  }
}

GaborFilterbank build_filterbank(const FrequencyBand& band, int n_filters, double fs_hz,
                                 std::optional<std::size_t> max_kernel_length) {
  if (n_filters < 1) throw Error(ErrorKind::parameter, "build_filterbank: n_filters must be >= 1");
  if (!(fs_hz > 0.0)) throw Error(ErrorKind::parameter, "build_filterbank: fs must be positive");
  if (!(band.f_high_hz() < fs_hz / 2.0)) {
    throw Error(ErrorKind::design, "build_filterbank: band '" + band.name() + "' reaches Nyquist (" +
                                       std::to_string(fs_hz / 2.0) + " Hz)");
  }
  const double step = (band.f_high_hz() - band.f_low_hz()) / static_cast<double>(n_filters);
  std::vector<GaborFilter> filters;
  filters.reserve(static_cast<std::size_t>(n_filters));
  for (int k = 0; k < n_filters; ++k) {
    const double center = band.f_low_hz() + static_cast<double>(k) * step;
    filters.push_back(make_filter(center, step / 2.0, fs_hz, max_kernel_length));
  }
  return GaborFilterbank(band, std::move(filters));
}

TimeSeries apply_filter(const GaborFilter& filter, const TimeSeries& x) {
  const std::size_t n = x.size();
  const std::size_t k = filter.kernel.size();
  if (n < k) {
    throw Error(ErrorKind::too_short, "apply_filter: signal of " + std::to_string(n) +
                                          " samples is shorter than the " + std::to_string(k) +
                                          "-tap kernel");
  }
  const auto half = static_cast<std::ptrdiff_t>(filter.half_length());
  const auto len = static_cast<std::ptrdiff_t>(n);
  const auto xs = x.samples();
  const double* h = filter.kernel.data();
  std::vector<double> y(n, 0.0);
  for (std::ptrdiff_t i = 0; i < len; ++i) {
    // y[i] = sum_j h[j] x[i + half - j], restricted to the signal support.
    const std::ptrdiff_t j_lo = std::max<std::ptrdiff_t>(0, i + half - (len - 1));
    const std::ptrdiff_t j_hi = std::min<std::ptrdiff_t>(2 * half, i + half);
    double acc = 0.0;
    for (std::ptrdiff_t j = j_lo; j <= j_hi; ++j) {
      acc += h[j] * xs[static_cast<std::size_t>(i + half - j)];
    }
    y[static_cast<std::size_t>(i)] = acc;
  }
  return TimeSeries(std::move(y), x.sample_rate_hz());
}

SubbandSelection select_max_energy_subband(const GaborFilterbank& bank, const TimeSeries& x) {
  std::vector<double> means;
  means.reserve(bank.n_filters());
  std::optional<TimeSeries> best;
  std::size_t best_index = 0;
  for (std::size_t k = 0; k < bank.n_filters(); ++k) {
    TimeSeries y = apply_filter(bank.filters()[k], x);
    means.push_back(mean_tkeo(tkeo(y)));
    if (k == 0 || means[k] > means[best_index]) {
      best_index = k;
      best = std::move(y);
    }
  }
  const double best_mean = means[best_index];
  return SubbandSelection{best_index, std::move(*best), best_mean, std::move(means)};
}

}  // namespace teager
