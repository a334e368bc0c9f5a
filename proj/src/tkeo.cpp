#include "teager/tkeo.hpp"

#include <numeric>

#include "teager/error.hpp"

namespace teager {

std::vector<double> teager_energy(std::span<const double> x) {
  if (x.size() < 3) {
    throw Error(ErrorKind::too_short, "tkeo: need at least 3 samples, got " + std::to_string(x.size()));
  }
  std::vector<double> out(x.size() - 2);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = x[k + 1] * x[k + 1] - x[k] * x[k + 2];
  }
  return out;
}

EnergySeries tkeo(const TimeSeries& x) {
  return EnergySeries{teager_energy(x.samples()), x.sample_rate_hz(), 1};
}

double mean_tkeo(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::empty_result, "mean_tkeo: empty energy series");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double mean_tkeo(const EnergySeries& e) { return mean_tkeo(std::span<const double>(e.values)); }

}  // namespace teager
