#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "teager/core.hpp"

namespace teager {

// H(z) = (b0 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2)
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

struct IirFilter {
  std::vector<Biquad> sections;
  double fs_hz;
  std::string description;

  std::complex<double> response(double f_hz) const;
  double magnitude(double f_hz) const { return std::abs(response(f_hz)); }
  // Moduli of all section poles; stable iff every entry is < 1.
  std::vector<double> pole_radii() const;
};

// Order-`order` Butterworth bandpass (order poles in total, order / 2
// biquads) through the bilinear transform with prewarped edges. The edges
// sit at -3 dB and the gain at the analog center frequency is one.
IirFilter design_butter_bandpass(const FrequencyBand& band, int order, double fs_hz);

IirFilter design_highpass(double cutoff_hz, int order, double fs_hz);

// Second-order notch, -3 dB width freq / q.
IirFilter design_notch(double freq_hz, double q, double fs_hz);

// Causal cascade in transposed direct form II, zero initial state.
TimeSeries apply_iir(const IirFilter& filter, const TimeSeries& x);

struct PsdEstimate {
  std::vector<double> freqs_hz;  // 0 .. Nyquist
  std::vector<double> power;     // one-sided density, units^2 / Hz
  double resolution_hz;

  // Bins 1 .. floor(fs / 2), i.e. DC dropped. With a one-second segment this
  // is floor(fs / 2) values at 1 Hz spacing.
  std::vector<double> feature_view(double fs_hz) const;
  std::vector<double> feature_freqs(double fs_hz) const;
  // Rectangle-rule integral of the density over all bins.
  double total_power() const;
};

struct WelchOptions {
  std::optional<std::size_t> segment_length;  // default round(fs)
  double overlap = 0.5;
};

// Hann-windowed, averaged periodograms with density scaling.
PsdEstimate welch_psd(const TimeSeries& x, const WelchOptions& options = {});

std::size_t psd_feature_count(double fs_hz);

}  // namespace teager
