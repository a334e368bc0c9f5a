#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "teager/core.hpp"
#include "teager/desa.hpp"
#include "teager/gabor.hpp"
#include "teager/spectral.hpp"

namespace teager {

enum class FeatureMode { tkeo, energy, psd, combined };
enum class BandMode { raw, fused };

const char* to_string(FeatureMode mode);
const char* to_string(BandMode mode);
FeatureMode parse_feature_mode(std::string_view text);
BandMode parse_band_mode(std::string_view text);

// TKEO descriptors of one band of one channel window.
struct BandDescriptors {
  double m_tkeo = 0.0;  // mean energy of the selected subband
  double m_re = 0.0;    // filled by relative_energies
  double m_iam = 0.0;   // mean envelope over valid samples
  double v_ifm = 0.0;   // population variance of Omega over valid samples
  double selected_center_hz = 0.0;
  std::size_t selected_index = 0;
  double invalid_fraction = 0.0;
  bool degenerate = false;
};

// Uses a filterbank whose kernels are capped to the window length.
BandDescriptors tkeo_band_descriptors(const TimeSeries& window, const FrequencyBand& band, int n_filters,
                                      const DesaOptions& desa = {});
BandDescriptors tkeo_band_descriptors(const TimeSeries& window, const GaborFilterbank& bank,
                                      const DesaOptions& desa = {});

// Relative share of each band. Input must hold exactly the five canonical
// band names; negative entries count as zero; a total below 1e-30 gives 0.2
// everywhere.
std::map<std::string, double> relative_energies(const std::map<std::string, double>& per_band);

struct BaselineDescriptors {
  std::vector<double> psd;  // floor(fs / 2) Welch values, DC dropped
  double m_se = 0.0;        // mean of x^2
  double m_rse = 0.0;       // filled from the five-band m_se set
};

// With a band the window is first isolated by a Butterworth bandpass of the
// given order; without one the raw window is used.
BaselineDescriptors baseline_descriptors(const TimeSeries& window, const std::optional<FrequencyBand>& band,
                                         int butter_order = 10);

struct FeatureConfig {
  int n_filters = 25;
  FeatureMode feature_mode = FeatureMode::tkeo;
  BandMode band_mode = BandMode::fused;
  int butter_order = 10;
  DesaOptions desa;
};

struct FeatureVector {
  std::vector<std::string> names;
  std::vector<double> values;
  std::string layout_id;
};

// Per-window feature assembly with filterbanks and Butterworth designs built
// once for a fixed (rate, window length). Thread-safe after construction.
//
// Layout: channel-major, then band (delta..gamma, or "raw"), then descriptor.
// Names follow <channel>__<band|raw>__<descriptor>.
class FeatureExtractor {
 public:
  FeatureExtractor(FeatureConfig config, double fs_hz, std::size_t window_length);

  const FeatureConfig& config() const { return config_; }
  double fs_hz() const { return fs_hz_; }
  std::size_t window_length() const { return window_length_; }
  // Bands used for extraction, after Nyquist clamping.
  const std::vector<FrequencyBand>& bands() const { return bands_; }
  // Human-readable notes about clamped bands.
  const std::vector<std::string>& warnings() const { return warnings_; }

  std::vector<std::string> feature_names(const std::vector<std::string>& channel_names) const;
  std::string layout_id(std::size_t feature_count) const;

  FeatureVector extract(const Recording& window) const;

 private:
  std::vector<std::string> descriptor_names() const;
  std::vector<double> channel_features(const TimeSeries& x) const;

  FeatureConfig config_;
  double fs_hz_;
  std::size_t window_length_;
  std::vector<FrequencyBand> bands_;
  std::vector<GaborFilterbank> banks_;
  std::vector<IirFilter> bandpasses_;
  std::vector<std::string> warnings_;
};

FeatureVector assemble(const Recording& window, const FeatureConfig& config);

struct RowKey {
  std::string recording_id;
  std::size_t window_index = 0;
  std::optional<std::string> label;
  std::optional<std::string> group;
};

// Rectangular feature table sharing one layout.
struct FeatureMatrix {
  std::vector<std::string> names;
  std::string layout_id;
  std::vector<std::vector<double>> rows;
  std::vector<RowKey> keys;

  std::size_t row_count() const { return rows.size(); }
  std::size_t feature_count() const { return names.size(); }
  void append(const FeatureVector& v, RowKey key);
  // Index of a named column; throws a layout error if absent.
  std::size_t column(std::string_view name) const;
};

}  // namespace teager
