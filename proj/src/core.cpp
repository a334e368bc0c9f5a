#include "teager/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "teager/error.hpp"

namespace teager {

TimeSeries::TimeSeries(std::vector<double> samples, double sample_rate_hz)
    : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz) {
  if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_)) {
    throw Error(ErrorKind::parameter, "TimeSeries: sample rate must be positive and finite");
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i])) {
      throw Error(ErrorKind::parameter,
                  "TimeSeries: non-finite sample at index " + std::to_string(i));
    }
  }
}

Recording::Recording(std::vector<Channel> channels) : channels_(std::move(channels)) {
  if (channels_.empty()) throw Error(ErrorKind::parameter, "Recording: no channels");
  std::set<std::string> seen;
  for (const auto& ch : channels_) {
    if (ch.name.empty()) {
      throw Error(ErrorKind::parameter, "Recording: empty channel name");
    }
    if (!seen.insert(ch.name).second) {
      throw Error(ErrorKind::parameter, "Recording: duplicate channel name '" + ch.name + "'");
    }
    const auto& first = channels_.front().series;
    if (ch.series.sample_rate_hz() != first.sample_rate_hz()) {
      throw Error(ErrorKind::parameter, "Recording: channel '" + ch.name + "' has a different sample rate");
    }
    if (ch.series.size() != first.size()) {
      throw Error(ErrorKind::parameter, "Recording: channel '" + ch.name + "' has a different length");
    }
  }
}

std::size_t Recording::sample_count() const { return channels_.front().series.size(); }

double Recording::sample_rate_hz() const {
  return channels_.front().series.sample_rate_hz();
}

std::vector<std::string> Recording::channel_names() const {
  std::vector<std::string> names;
  names.reserve(channels_.size());
  for (const auto& ch : channels_) names.push_back(ch.name);
  return names;
}

FrequencyBand::FrequencyBand(std::string name, double f_low_hz, double f_high_hz)
    : name_(std::move(name)), f_low_hz_(f_low_hz), f_high_hz_(f_high_hz) {
  if (!(f_low_hz_ > 0.0) || !(f_low_hz_ < f_high_hz_) || !std::isfinite(f_high_hz_)) {
    throw Error(ErrorKind::parameter, "FrequencyBand '" + name_ + "': require 0 < f_low < f_high");
  }
}

bool FrequencyBand::overlaps(const FrequencyBand& other) const {
  return f_low_hz_ < other.f_high_hz_ && other.f_low_hz_ < f_high_hz_;
}

const FrequencyBand& BandSet::find(std::string_view name) const {
  if (name == broadband.name()) return broadband;
  for (const auto& b : canonical) {
    if (b.name() == name) return b;
  }
  throw Error(ErrorKind::parameter, "unknown band '" + std::string(name) + "'");
}

BandSet canonical_band_set() {
  return BandSet{
      {
          FrequencyBand("delta", 0.5, 3.0),
          FrequencyBand("theta", 4.0, 7.0),
          FrequencyBand("alpha", 8.0, 12.0),
          FrequencyBand("beta", 13.0, 30.0),
          FrequencyBand("gamma", 30.0, 50.0),
      },
      FrequencyBand("broadband", 0.5, 100.0),
  };
}

ClampedBand clamp_to_nyquist(const FrequencyBand& band, double fs_hz) {
  const double nyquist = fs_hz / 2.0;
  if (band.f_high_hz() < nyquist) return {band, false};
  const double high = 0.45 * fs_hz;
  if (!(band.f_low_hz() < high)) {
    throw Error(ErrorKind::design, "band '" + band.name() + "' lies entirely above 0.45*fs");
  }
  return {FrequencyBand(band.name(), band.f_low_hz(), high), true};
}

WindowSpec::WindowSpec(double window_seconds, double overlap_fraction)
    : window_seconds_(window_seconds), overlap_fraction_(overlap_fraction) {
  if (!(window_seconds_ > 0.0) || !std::isfinite(window_seconds_)) {
    throw Error(ErrorKind::parameter, "WindowSpec: window_seconds must be positive");
  }
  if (!(overlap_fraction_ >= 0.0 && overlap_fraction_ < 1.0)) {
    throw Error(ErrorKind::parameter, "WindowSpec: overlap must lie in [0, 1)");
  }
}

std::size_t WindowSpec::window_samples(double fs_hz) const {
  // The small epsilon keeps products like 0.29 * 100 from flooring to 28.
  const double raw = window_seconds_ * fs_hz;
  const auto n = static_cast<std::size_t>(std::floor(raw + 1e-9 * std::max(1.0, raw)));
  if (n < 3) {
    throw Error(ErrorKind::parameter, "WindowSpec: window shorter than 3 samples at this rate");
  }
  return n;
}

std::size_t WindowSpec::hop_samples(double fs_hz) const {
  const auto w = static_cast<double>(window_samples(fs_hz));
  const auto hop = static_cast<std::size_t>(std::llround(w * (1.0 - overlap_fraction_)));
  if (hop < 1) {
    throw Error(ErrorKind::parameter, "WindowSpec: overlap leaves no sample advance");
  }
  return hop;
}

std::size_t window_count(std::size_t length, std::size_t window, std::size_t hop) {
  if (length < window || hop == 0) return 0;
  return (length - window) / hop + 1;
}

std::vector<TimeSeries> segment_windows(const TimeSeries& series, const WindowSpec& spec) {
  const double fs = series.sample_rate_hz();
  const std::size_t w = spec.window_samples(fs);
  const std::size_t hop = spec.hop_samples(fs);
  const std::size_t count = window_count(series.size(), w, hop);
  if (count == 0) {
    throw Error(ErrorKind::empty_result,
                "segment_windows: series of " + std::to_string(series.size()) +
                    " samples is shorter than one window of " + std::to_string(w));
  }
  std::vector<TimeSeries> out;
  out.reserve(count);
  const auto s = series.samples();
  for (std::size_t k = 0; k < count; ++k) {
    const auto first = s.begin() + static_cast<std::ptrdiff_t>(k * hop);
    out.emplace_back(std::vector<double>(first, first + static_cast<std::ptrdiff_t>(w)), fs);
  }
  return out;
}

std::vector<Recording> segment_recording(const Recording& recording, const WindowSpec& spec) {
  std::vector<std::vector<TimeSeries>> per_channel;
  per_channel.reserve(recording.channel_count());
  for (const auto& ch : recording.channels()) {
    per_channel.push_back(segment_windows(ch.series, spec));
  }
  std::vector<Recording> out;
  if (per_channel.empty()) return out;
  const std::size_t count = per_channel.front().size();
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<Channel> chans;
    chans.reserve(per_channel.size());
    for (std::size_t c = 0; c < per_channel.size(); ++c) {
      chans.push_back(Channel{recording.channels()[c].name, per_channel[c][k]});
    }
    out.emplace_back(std::move(chans));
  }
  return out;
}

}  // namespace teager
