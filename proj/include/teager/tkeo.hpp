#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "teager/core.hpp"

namespace teager {

// Discrete Teager-Kaiser energy. values[k] is the energy at source index
// k + valid_offset; the two edge samples have no defined energy and are
// dropped. Negative values are kept as computed.
struct EnergySeries {
  std::vector<double> values;
  double sample_rate_hz;
  std::size_t valid_offset = 1;
};

// out[k] = x[k+1]^2 - x[k] * x[k+2]. Requires at least 3 samples.
std::vector<double> teager_energy(std::span<const double> x);

EnergySeries tkeo(const TimeSeries& x);

double mean_tkeo(const EnergySeries& e);
double mean_tkeo(std::span<const double> values);

}  // namespace teager
