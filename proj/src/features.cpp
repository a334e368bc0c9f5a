#include "teager/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "teager/error.hpp"
#include "teager/tkeo.hpp"

namespace teager {

namespace {

constexpr double kRelativeFloor = 1e-30;

bool wants_tkeo(FeatureMode m) { return m == FeatureMode::tkeo || m == FeatureMode::combined; }
bool wants_psd(FeatureMode m) { return m == FeatureMode::psd || m == FeatureMode::combined; }
bool wants_energy(FeatureMode m) { return m == FeatureMode::energy || m == FeatureMode::combined; }

// Shares of each entry in the total, negatives floored at zero.
std::vector<double> relative_shares(const std::vector<double>& values) {
  std::vector<double> out(values.size());
  double total = 0.0;
  for (double v : values) total += std::max(v, 0.0);
  if (total < kRelativeFloor) {
    std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(values.size()));
    return out;
  }
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = std::max(values[i], 0.0) / total;
  return out;
}

std::string format_hz(double f) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", f);
  return buf;
}

}  // namespace

const char* to_string(FeatureMode mode) {
  switch (mode) {
    case FeatureMode::tkeo: return "tkeo";
    case FeatureMode::energy: return "energy";
    case FeatureMode::psd: return "psd";
    case FeatureMode::combined: return "combined";
  }
  return "?";
}

const char* to_string(BandMode mode) { return mode == BandMode::raw ? "raw" : "fused"; }

FeatureMode parse_feature_mode(std::string_view text) {
  for (auto m : {FeatureMode::tkeo, FeatureMode::energy, FeatureMode::psd, FeatureMode::combined}) {
    if (text == to_string(m)) return m;
  }
  throw Error(ErrorKind::config, "unknown feature mode '" + std::string(text) +
                                     "' (expected tkeo, energy, psd or combined)");
}

BandMode parse_band_mode(std::string_view text) {
  if (text == "raw") return BandMode::raw;
  if (text == "fused") return BandMode::fused;
  throw Error(ErrorKind::config, "unknown band mode '" + std::string(text) + "' (expected raw or fused)");
}

BandDescriptors tkeo_band_descriptors(const TimeSeries& window, const GaborFilterbank& bank,
                                      const DesaOptions& desa) {
  BandDescriptors d;
  SubbandSelection sel = select_max_energy_subband(bank, window);
  d.m_tkeo = sel.mean_energy;
  d.selected_index = sel.index;
  d.selected_center_hz = bank.filters()[sel.index].center_hz;

  Demodulation demod = [&]() -> Demodulation {
    try {
      return desa1(sel.narrowband, desa);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::degenerate) throw;
      return Demodulation{TimeSeries({}, window.sample_rate_hz()), TimeSeries({}, window.sample_rate_hz()), {}, 2};
    }
  }();
  if (demod.size() == 0) {
    d.degenerate = true;
    d.invalid_fraction = 1.0;
    return d;
  }

  double env_sum = 0.0, freq_sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < demod.size(); ++i) {
    if (!demod.valid[i]) continue;
    env_sum += demod.envelope[i];
    freq_sum += demod.inst_freq_rad[i];
    ++n;
  }
  const double freq_mean = freq_sum / static_cast<double>(n);
  double var = 0.0;
  for (std::size_t i = 0; i < demod.size(); ++i) {
    if (!demod.valid[i]) continue;
    const double dv = demod.inst_freq_rad[i] - freq_mean;
    var += dv * dv;
  }
  d.m_iam = env_sum / static_cast<double>(n);
  d.v_ifm = var / static_cast<double>(n);
  d.invalid_fraction = demod.invalid_fraction();
  return d;
}

BandDescriptors tkeo_band_descriptors(const TimeSeries& window, const FrequencyBand& band, int n_filters,
                                      const DesaOptions& desa) {
  const auto bank = build_filterbank(band, n_filters, window.sample_rate_hz(), window.size());
  return tkeo_band_descriptors(window, bank, desa);
}

std::map<std::string, double> relative_energies(const std::map<std::string, double>& per_band) {
  const BandSet bands = canonical_band_set();
  std::vector<double> values;
  for (const auto& b : bands.canonical) {
    const auto it = per_band.find(b.name());
    if (it == per_band.end()) {
      throw Error(ErrorKind::layout, "relative_energies: missing band '" + b.name() + "'");
    }
    values.push_back(it->second);
  }
  if (per_band.size() != bands.canonical.size()) {
    throw Error(ErrorKind::layout, "relative_energies: expected exactly the five canonical bands");
  }
  const auto shares = relative_shares(values);
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < shares.size(); ++i) out[bands.canonical[i].name()] = shares[i];
  return out;
}

BaselineDescriptors baseline_descriptors(const TimeSeries& window, const std::optional<FrequencyBand>& band,
                                         int butter_order) {
  const TimeSeries isolated =
      band ? apply_iir(design_butter_bandpass(*band, butter_order, window.sample_rate_hz()), window) : window;
  BaselineDescriptors d;
  d.psd = welch_psd(isolated).feature_view(window.sample_rate_hz());
  double sq = 0.0;
  for (double v : isolated.samples()) sq += v * v;
  d.m_se = sq / static_cast<double>(isolated.size());
  return d;
}

FeatureExtractor::FeatureExtractor(FeatureConfig config, double fs_hz, std::size_t window_length)
    : config_(std::move(config)), fs_hz_(fs_hz), window_length_(window_length) {
  if (config_.n_filters < 1) throw Error(ErrorKind::config, "FeatureExtractor: n_filters must be >= 1");
  if (window_length_ < 5) throw Error(ErrorKind::parameter, "FeatureExtractor: window shorter than 5 samples");
  const BandSet set = canonical_band_set();
  const std::vector<FrequencyBand> wanted =
      config_.band_mode == BandMode::fused ? set.canonical : std::vector<FrequencyBand>{set.broadband};
  for (const auto& b : wanted) {
    auto [band, clamped] = clamp_to_nyquist(b, fs_hz_);
    if (clamped) {
      warnings_.push_back("band '" + b.name() + "' upper edge " + format_hz(b.f_high_hz()) +
                          " Hz clamped to " + format_hz(band.f_high_hz()) + " Hz at fs " + format_hz(fs_hz_) +
                          " Hz");
    }
    bands_.push_back(band);
  }
  if (wants_tkeo(config_.feature_mode)) {
    for (const auto& b : bands_) banks_.push_back(build_filterbank(b, config_.n_filters, fs_hz_, window_length_));
  }
  if ((wants_psd(config_.feature_mode) || wants_energy(config_.feature_mode)) &&
      config_.band_mode == BandMode::fused) {
    for (const auto& b : bands_) bandpasses_.push_back(design_butter_bandpass(b, config_.butter_order, fs_hz_));
  }
  if (wants_psd(config_.feature_mode) && window_length_ < static_cast<std::size_t>(std::llround(fs_hz_))) {
    throw Error(ErrorKind::parameter, "FeatureExtractor: PSD features need windows of at least one second");
  }
}

std::vector<std::string> FeatureExtractor::descriptor_names() const {
  const bool fused = config_.band_mode == BandMode::fused;
  std::vector<std::string> names;
  if (wants_tkeo(config_.feature_mode)) {
    names.push_back("m_tkeo");
    if (fused) names.push_back("m_re");
    names.push_back("m_iam");
    names.push_back("v_ifm");
  }
  if (wants_psd(config_.feature_mode)) {
    const std::size_t count = psd_feature_count(fs_hz_);
    const double resolution = fs_hz_ / static_cast<double>(std::llround(fs_hz_));
    for (std::size_t k = 1; k <= count; ++k) {
      names.push_back("psd_" + format_hz(static_cast<double>(k) * resolution) + "hz");
    }
  }
  if (wants_energy(config_.feature_mode)) {
    names.push_back("m_se");
    if (fused) names.push_back("m_rse");
  }
  return names;
}

std::vector<std::string> FeatureExtractor::feature_names(const std::vector<std::string>& channel_names) const {
  const auto descriptors = descriptor_names();
  std::vector<std::string> names;
  names.reserve(channel_names.size() * bands_.size() * descriptors.size());
  for (const auto& ch : channel_names) {
    for (const auto& b : bands_) {
      const std::string band_label = config_.band_mode == BandMode::fused ? b.name() : "raw";
      for (const auto& d : descriptors) names.push_back(ch + "__" + band_label + "__" + d);
    }
  }
  return names;
}

std::string FeatureExtractor::layout_id(std::size_t feature_count) const {
  return std::string(to_string(config_.feature_mode)) + "/" + to_string(config_.band_mode) + "/" +
         std::to_string(feature_count);
}

std::vector<double> FeatureExtractor::channel_features(const TimeSeries& x) const {
  const bool fused = config_.band_mode == BandMode::fused;
  const std::size_t nb = bands_.size();
  std::vector<BandDescriptors> tk(nb);
  std::vector<BaselineDescriptors> bl(nb);

  if (wants_tkeo(config_.feature_mode)) {
    for (std::size_t b = 0; b < nb; ++b) tk[b] = tkeo_band_descriptors(x, banks_[b], config_.desa);
    if (fused) {
      std::vector<double> m(nb);
      for (std::size_t b = 0; b < nb; ++b) m[b] = tk[b].m_tkeo;
      const auto re = relative_shares(m);
      for (std::size_t b = 0; b < nb; ++b) tk[b].m_re = re[b];
    }
  }
  if (wants_psd(config_.feature_mode) || wants_energy(config_.feature_mode)) {
    for (std::size_t b = 0; b < nb; ++b) {
      const TimeSeries isolated = fused ? apply_iir(bandpasses_[b], x) : x;
      bl[b] = baseline_descriptors(isolated, std::nullopt);
    }
    if (fused) {
      std::vector<double> m(nb);
      for (std::size_t b = 0; b < nb; ++b) m[b] = bl[b].m_se;
      const auto rse = relative_shares(m);
      for (std::size_t b = 0; b < nb; ++b) bl[b].m_rse = rse[b];
    }
  }

  std::vector<double> out;
  for (std::size_t b = 0; b < nb; ++b) {
    if (wants_tkeo(config_.feature_mode)) {
      out.push_back(tk[b].m_tkeo);
      if (fused) out.push_back(tk[b].m_re);
      out.push_back(tk[b].m_iam);
      out.push_back(tk[b].v_ifm);
    }
    if (wants_psd(config_.feature_mode)) out.insert(out.end(), bl[b].psd.begin(), bl[b].psd.end());
    if (wants_energy(config_.feature_mode)) {
      out.push_back(bl[b].m_se);
      if (fused) out.push_back(bl[b].m_rse);
    }
  }
  return out;
}

FeatureVector FeatureExtractor::extract(const Recording& window) const {
  if (window.sample_rate_hz() != fs_hz_ || window.sample_count() != window_length_) {
    throw Error(ErrorKind::layout, "FeatureExtractor: window rate/length differs from the extractor's");
  }
  FeatureVector v;
  v.names = feature_names(window.channel_names());
  v.values.reserve(v.names.size());
  for (const auto& ch : window.channels()) {
    const auto values = channel_features(ch.series);
    v.values.insert(v.values.end(), values.begin(), values.end());
  }
  v.layout_id = layout_id(v.names.size());
  return v;
}

FeatureVector assemble(const Recording& window, const FeatureConfig& config) {
  return FeatureExtractor(config, window.sample_rate_hz(), window.sample_count()).extract(window);
}

void FeatureMatrix::append(const FeatureVector& v, RowKey key) {
  if (v.names.size() != v.values.size()) {
    throw Error(ErrorKind::layout, "FeatureMatrix: names and values differ in length");
  }
  if (rows.empty() && names.empty()) {
    names = v.names;
    layout_id = v.layout_id;
  } else if (v.layout_id != layout_id || v.names != names) {
    throw Error(ErrorKind::layout, "FeatureMatrix: row layout '" + v.layout_id + "' differs from '" +
                                       layout_id + "'");
  }
  rows.push_back(v.values);
  keys.push_back(std::move(key));
}

std::size_t FeatureMatrix::column(std::string_view name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw Error(ErrorKind::layout, "FeatureMatrix: no column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - names.begin());
}

}  // namespace teager
