#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "teager/core.hpp"

namespace teager {

// Gaussian-windowed cosine FIR, symmetric (linear phase), scaled so that the
// magnitude response at center_hz is exactly one.
struct GaborFilter {
  double center_hz;
  double sigma_f_hz;  // frequency-domain Gaussian std
  double fs_hz;
  std::vector<double> kernel;

  std::size_t half_length() const { return kernel.size() / 2; }
  // Zero-phase (real) response of the centered kernel at f_hz.
  double response(double f_hz) const;
};

class GaborFilterbank {
 public:
  GaborFilterbank(FrequencyBand band, std::vector<GaborFilter> filters);

  const FrequencyBand& band() const { return band_; }
  const std::vector<GaborFilter>& filters() const { return filters_; }
  std::size_t n_filters() const { return filters_.size(); }
  double step_hz() const { return band_.width_hz() / static_cast<double>(filters_.size()); }

 private:
  FrequencyBand band_;
  std::vector<GaborFilter> filters_;
};

// N filters centered at f_low + k * df, df = (f_high - f_low) / N, k < N, each
// with sigma_f = df / 2 and support 2 * ceil(4 sigma_t fs) + 1 taps where
// sigma_t = 1 / (2 pi sigma_f).
//
// When max_kernel_length is given and the natural support exceeds it, sigma_t
// is shrunk until 4 sigma_t fits inside the cap (sigma_f widens accordingly),
// so the filter stays Gaussian and can run on short windows.
GaborFilterbank build_filterbank(const FrequencyBand& band,
                                 int n_filters,
                                 double fs_hz,
                                 std::optional<std::size_t> max_kernel_length = std::nullopt);

// Centered (zero-phase) convolution with zero-padded edges; output has the
// input's length and rate. Requires x to be at least as long as the kernel.
TimeSeries apply_filter(const GaborFilter& filter, const TimeSeries& x);

struct SubbandSelection {
  std::size_t index;
  TimeSeries narrowband;
  double mean_energy;
  std::vector<double> subband_mean_energies;
};

// Filters x with every filter, takes the mean TKEO of each output and keeps
// the argmax (lowest index on ties).
SubbandSelection select_max_energy_subband(const GaborFilterbank& bank, const TimeSeries& x);

}  // namespace teager
