#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "teager/core.hpp"
#include "teager/features.hpp"

namespace teager::cli {

struct PipelineConfig {
  BandSet bands = canonical_band_set();
  int n_filters = 25;
  WindowSpec window{4.0, 0.0};
  std::optional<double> notch_hz;
  std::optional<double> highpass_hz;
  FeatureMode feature_mode = FeatureMode::tkeo;
  BandMode band_mode = BandMode::fused;
  std::optional<double> fs_override;
  std::uint64_t seed = 0;

  double notch_q = 30.0;
  int highpass_order = 4;

  FeatureConfig feature_config() const;
  // Throws a config error if a knob is invalid at sample rate fs_hz.
  void validate(double fs_hz) const;
};

// Flat "key = value" text, one field per line, '#' starts a comment.
// Keys: window_seconds, overlap, n_filters, notch_hz, highpass_hz,
// feature_mode, band_mode, fs_override, seed.
std::map<std::string, std::string> parse_key_values(const std::string& text, const std::string& origin);

// Applies key/value pairs on top of `base`; unknown keys are config errors.
PipelineConfig apply_settings(PipelineConfig base, const std::map<std::string, std::string>& settings);

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base = {});

// Text in the same key/value format; load_config(render) round-trips.
std::string render_config(const PipelineConfig& config);

}  // namespace teager::cli
