#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "teager/core.hpp"

namespace teager {

enum class DesaVariant {
  // G[n] = 1 - (Psi[y[n]] + Psi[y[n+1]]) / (4 Psi[x[n]]), y[n] = x[n] - x[n-1].
  standard,
  // G[n] = 1 - Psi[y[n] + y[n+1]] / (4 Psi[x[n]]). Kept for comparison only;
  // it does not recover a pure tone's frequency.
  literal,
};

struct DesaOptions {
  DesaVariant variant = DesaVariant::standard;
  // Samples with |Psi[x[n]]| below max(relative * max Psi, absolute) are invalid.
  double relative_energy_floor = 1e-12;
  double absolute_energy_floor = 1e-30;
  // Lower bound on 1 - G^2 inside the envelope square root.
  double denominator_floor = 1e-12;
  // Treat samples with |G| > 1 (no real frequency) as invalid.
  bool reject_out_of_range = true;
};

// DESA-1 output. Entry i corresponds to source index i + valid_offset.
// Invalid samples carry envelope 0 and frequency 0 and must be skipped by
// downstream statistics.
struct Demodulation {
  TimeSeries envelope;       // |a[n]|, signal units
  TimeSeries inst_freq_rad;  // Omega[n] in [0, pi], radians per sample
  std::vector<std::uint8_t> valid;
  std::size_t valid_offset = 2;

  std::size_t size() const { return valid.size(); }
  std::size_t invalid_count() const;
  double invalid_fraction() const;
};

// Needs at least 5 samples; throws degenerate when every sample is invalid.
Demodulation desa1(const TimeSeries& x, const DesaOptions& options = {});

// Omega * fs / (2 pi) for every entry.
TimeSeries inst_freq_hz(const Demodulation& d);

}  // namespace teager
