#pragma once

#include <cstdint>
#include <vector>

#include "teager/core.hpp"

namespace teager {

// Parameters of a single-component AM-FM test signal
//   x[n] = A (1 + m cos(2 pi f_am n / fs)) cos(2 pi f_c n / fs + (df / f_fm) sin(2 pi f_fm n / fs))
// plus white Gaussian noise.
struct AmFmSpec {
  double carrier_hz = 10.0;
  double am_depth = 0.0;
  double am_hz = 0.0;
  double fm_deviation_hz = 0.0;
  double fm_hz = 0.0;
  double amplitude = 1.0;
  double duration_s = 1.0;
  double noise_std = 0.0;
};

// Throws a parameter error if `spec` is not a valid oracle at `fs_hz`:
// carrier + deviation must stay below Nyquist and both modulation rates are
// capped at carrier / 5.
void validate(const AmFmSpec& spec, double fs_hz);

struct AmFmSignal {
  TimeSeries signal;
  TimeSeries envelope;      // A (1 + m cos(...)), noise-free
  TimeSeries inst_freq_hz;  // f_c + df cos(2 pi f_fm n / fs)
};

AmFmSignal gen_am_fm(const AmFmSpec& spec, double fs_hz, std::uint64_t seed);

struct LabeledDatasetOptions {
  std::size_t windows_per_recording = 1;
  std::size_t channel_count = 1;
  double amplitude = 1.0;
  double am_depth = 0.2;
  double noise_std = 0.1;
  // Carriers are drawn from [f_low + m * width, f_high - m * width].
  double edge_margin_fraction = 0.1;
};

struct LabeledDataset {
  std::vector<Recording> recordings;
  std::vector<int> labels;
};

// n_per_class recordings per band, class-major order, label = band index.
// Each recording carries a carrier drawn uniformly inside its band with mild
// AM and additive noise. Bands must be pairwise disjoint.
LabeledDataset gen_labeled_dataset(std::size_t n_per_class,
                                   const std::vector<FrequencyBand>& class_bands,
                                   double fs_hz,
                                   const WindowSpec& window,
                                   std::uint64_t seed,
                                   const LabeledDatasetOptions& options = {});

}  // namespace teager
