#include "teager/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "teager/error.hpp"

namespace teager {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::parameter, "AmFmSpec: " + what);
}

}  // namespace

void validate(const AmFmSpec& spec, double fs_hz) {
  require(fs_hz > 0.0 && std::isfinite(fs_hz), "sample rate must be positive");
  require(spec.carrier_hz > 0.0, "carrier_hz must be positive");
  require(spec.am_depth >= 0.0 && spec.am_depth < 1.0, "am_depth must lie in [0, 1)");
  require(spec.am_hz >= 0.0, "am_hz must be non-negative");
  require(spec.fm_deviation_hz >= 0.0, "fm_deviation_hz must be non-negative");
  require(spec.fm_hz >= 0.0, "fm_hz must be non-negative");
  require(spec.amplitude > 0.0, "amplitude must be positive");
  require(spec.duration_s > 0.0, "duration_s must be positive");
  require(spec.noise_std >= 0.0, "noise_std must be non-negative");
  require(!(spec.fm_hz == 0.0 && spec.fm_deviation_hz > 0.0),
          "fm_deviation_hz > 0 requires fm_hz > 0");
  require(spec.carrier_hz + spec.fm_deviation_hz < fs_hz / 2.0,
          "carrier + deviation must be below Nyquist");
  require(spec.am_hz <= spec.carrier_hz / 5.0, "am_hz must not exceed carrier / 5");
  require(spec.fm_hz <= spec.carrier_hz / 5.0, "fm_hz must not exceed carrier / 5");
}

AmFmSignal gen_am_fm(const AmFmSpec& spec, double fs_hz, std::uint64_t seed) {
  validate(spec, fs_hz);
  const double raw = spec.duration_s * fs_hz;
  const auto n = static_cast<std::size_t>(std::floor(raw + 1e-9 * std::max(1.0, raw)));
  require(n >= 1, "duration shorter than one sample");

  const double fm_index = spec.fm_hz > 0.0 ? spec.fm_deviation_hz / spec.fm_hz : 0.0;
  std::vector<double> x(n), env(n), freq(n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs_hz;
    env[i] = spec.amplitude * (1.0 + spec.am_depth * std::cos(kTwoPi * spec.am_hz * t));
    const double phase = kTwoPi * spec.carrier_hz * t + fm_index * std::sin(kTwoPi * spec.fm_hz * t);
    freq[i] = spec.carrier_hz + spec.fm_deviation_hz * std::cos(kTwoPi * spec.fm_hz * t);
    x[i] = env[i] * std::cos(phase);
    if (spec.noise_std > 0.0) x[i] += spec.noise_std * noise(rng);
  }
  return AmFmSignal{TimeSeries(std::move(x), fs_hz), TimeSeries(std::move(env), fs_hz),
                    TimeSeries(std::move(freq), fs_hz)};
}

LabeledDataset gen_labeled_dataset(std::size_t n_per_class,
                                   const std::vector<FrequencyBand>& class_bands,
                                   double fs_hz,
                                   const WindowSpec& window,
                                   std::uint64_t seed,
                                   const LabeledDatasetOptions& options) {
  if (n_per_class < 1) throw Error(ErrorKind::parameter, "gen_labeled_dataset: n_per_class must be >= 1");
  if (class_bands.empty()) throw Error(ErrorKind::parameter, "gen_labeled_dataset: no class bands");
  if (options.windows_per_recording < 1 || options.channel_count < 1) {
    throw Error(ErrorKind::parameter, "gen_labeled_dataset: need at least one window and one channel");
  }
  for (std::size_t i = 0; i < class_bands.size(); ++i) {
    for (std::size_t j = i + 1; j < class_bands.size(); ++j) {
      if (class_bands[i].overlaps(class_bands[j])) {
        throw Error(ErrorKind::parameter, "gen_labeled_dataset: class bands '" + class_bands[i].name() +
                                              "' and '" + class_bands[j].name() + "' overlap");
      }
    }
  }

  const std::size_t w = window.window_samples(fs_hz);
  const std::size_t hop = window.hop_samples(fs_hz);
  const std::size_t total = w + (options.windows_per_recording - 1) * hop;
  // Half a sample of slack so floor(duration * fs) lands on `total`.
  const double duration = (static_cast<double>(total) + 0.5) / fs_hz;

  std::mt19937_64 rng(seed);
  LabeledDataset out;
  for (std::size_t c = 0; c < class_bands.size(); ++c) {
    const auto& band = class_bands[c];
    // Central 80% of the band: the top filter center sits at f_high - df, so a
    // carrier at the very edge is closer to the neighbouring band's first filter.
    const double margin = options.edge_margin_fraction * band.width_hz();
    std::uniform_real_distribution<double> carrier_dist(band.f_low_hz() + margin, band.f_high_hz() - margin);
    for (std::size_t r = 0; r < n_per_class; ++r) {
      std::vector<Channel> channels;
      for (std::size_t ch = 0; ch < options.channel_count; ++ch) {
        AmFmSpec spec;
        spec.carrier_hz = carrier_dist(rng);
        spec.am_depth = options.am_depth;
        spec.am_hz = spec.carrier_hz / 10.0;
        spec.amplitude = options.amplitude;
        spec.duration_s = duration;
        spec.noise_std = options.noise_std;
        channels.push_back(Channel{"ch" + std::to_string(ch), gen_am_fm(spec, fs_hz, rng()).signal});
      }
      out.recordings.emplace_back(std::move(channels));
      out.labels.push_back(static_cast<int>(c));
    }
  }
  return out;
}

}  // namespace teager
