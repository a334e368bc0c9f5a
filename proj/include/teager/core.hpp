#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace teager {

// Uniformly sampled real-valued signal. Samples are finite; the rate is
// strictly positive. Immutable after construction.
class TimeSeries {
 public:
  TimeSeries(std::vector<double> samples, double sample_rate_hz);

  std::span<const double> samples() const { return samples_; }
  const std::vector<double>& values() const { return samples_; }
  double sample_rate_hz() const { return sample_rate_hz_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  double operator[](std::size_t i) const { return samples_[i]; }

 private:
  std::vector<double> samples_;
  double sample_rate_hz_;
};

struct Channel {
  std::string name;
  TimeSeries series;
};

// Multichannel recording. All channels share one rate and one length, and
// channel names are unique and non-empty.
class Recording {
 public:
  explicit Recording(std::vector<Channel> channels);

  const std::vector<Channel>& channels() const { return channels_; }
  std::size_t channel_count() const { return channels_.size(); }
  std::size_t sample_count() const;
  double sample_rate_hz() const;
  std::vector<std::string> channel_names() const;

 private:
  std::vector<Channel> channels_;
};

class FrequencyBand {
 public:
  FrequencyBand(std::string name, double f_low_hz, double f_high_hz);

  const std::string& name() const { return name_; }
  double f_low_hz() const { return f_low_hz_; }
  double f_high_hz() const { return f_high_hz_; }
  double width_hz() const { return f_high_hz_ - f_low_hz_; }
  bool contains(double f_hz) const { return f_hz >= f_low_hz_ && f_hz <= f_high_hz_; }
  bool overlaps(const FrequencyBand& other) const;

  friend bool operator==(const FrequencyBand&, const FrequencyBand&) = default;

 private:
  std::string name_;
  double f_low_hz_;
  double f_high_hz_;
};

struct BandSet {
  std::vector<FrequencyBand> canonical;  // Delta, Theta, Alpha, Beta, Gamma
  FrequencyBand broadband;

  const FrequencyBand& find(std::string_view name) const;
};

// Delta 0.5-3, Theta 4-7, Alpha 8-12, Beta 13-30, Gamma 30-50 Hz, plus the
// 0.5-100 Hz broadband range. Gaps between bands are kept as printed.
BandSet canonical_band_set();

struct ClampedBand {
  FrequencyBand band;
  bool clamped;
};

// Bands reaching Nyquist are pulled down to 0.45 * fs. The caller decides
// whether to warn on `clamped`.
ClampedBand clamp_to_nyquist(const FrequencyBand& band, double fs_hz);

class WindowSpec {
 public:
  WindowSpec(double window_seconds, double overlap_fraction);

  double window_seconds() const { return window_seconds_; }
  double overlap_fraction() const { return overlap_fraction_; }

  // floor(window_seconds * fs); throws a parameter error below 3 samples.
  std::size_t window_samples(double fs_hz) const;
  // round(window_samples * (1 - overlap)); throws when it would be zero.
  std::size_t hop_samples(double fs_hz) const;

 private:
  double window_seconds_;
  double overlap_fraction_;
};

// Splits into full windows; a trailing partial window is dropped. Throws an
// empty_result error when the series is shorter than one window and a
// parameter error when the window is malformed for this rate.
std::vector<TimeSeries> segment_windows(const TimeSeries& series, const WindowSpec& spec);

// Window count floor((L - W) / hop) + 1, or 0 if L < W.
std::size_t window_count(std::size_t length, std::size_t window, std::size_t hop);

std::vector<Recording> segment_recording(const Recording& recording, const WindowSpec& spec);

}  // namespace teager
