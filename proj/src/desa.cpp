#include "teager/desa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "teager/error.hpp"
#include "teager/tkeo.hpp"

namespace teager {

std::size_t Demodulation::invalid_count() const {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), std::uint8_t{0}));
}

double Demodulation::invalid_fraction() const {
  return valid.empty() ? 1.0 : static_cast<double>(invalid_count()) / static_cast<double>(valid.size());
}

Demodulation desa1(const TimeSeries& x, const DesaOptions& options) {
  const std::size_t len = x.size();
  if (len < 5) {
    throw Error(ErrorKind::too_short, "desa1: need at least 5 samples, got " + std::to_string(len));
  }
  const auto xs = x.samples();

  // psi_x[k] = Psi[x[k+1]] for k in [0, len-2).
  const std::vector<double> psi_x = teager_energy(xs);

  // Output index i maps to source n = i + 2, n in [2, len-3].
  const std::size_t count = len - 4;
  std::vector<double> numer(count);
  if (options.variant == DesaVariant::standard) {
    // y[j] = x[j] - x[j-1], j >= 1, stored at y[j-1].
    std::vector<double> y(len - 1);
    for (std::size_t j = 1; j < len; ++j) y[j - 1] = xs[j] - xs[j - 1];
    // psi_y[k] = Psi[y at source k+2].
    const std::vector<double> psi_y = teager_energy(y);
    for (std::size_t i = 0; i < count; ++i) numer[i] = psi_y[i] + psi_y[i + 1];
  } else {
    // z[n] = y[n] + y[n+1] = x[n+1] - x[n-1], n in [1, len-2], stored at z[n-1].
    std::vector<double> z(len - 2);
    for (std::size_t n = 1; n + 1 < len; ++n) z[n - 1] = xs[n + 1] - xs[n - 1];
    // psi_z[k] = Psi[z at source k+2].
    const std::vector<double> psi_z = teager_energy(z);
    for (std::size_t i = 0; i < count; ++i) numer[i] = psi_z[i];
  }

  double max_psi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) max_psi = std::max(max_psi, psi_x[i + 1]);
  const double energy_floor =
      std::max(options.relative_energy_floor * std::max(max_psi, 0.0), options.absolute_energy_floor);

  std::vector<double> env(count, 0.0), omega(count, 0.0);
  std::vector<std::uint8_t> valid(count, 0);
  std::size_t n_valid = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const double px = psi_x[i + 1];
    if (!(std::abs(px) >= energy_floor)) continue;
    const double g = 1.0 - numer[i] / (4.0 * px);
    if (options.reject_out_of_range && std::abs(g) > 1.0) continue;
    const double gc = std::clamp(g, -1.0, 1.0);
    omega[i] = std::acos(gc);
    env[i] = std::sqrt(std::max(px, 0.0) / std::max(1.0 - g * g, options.denominator_floor));
    valid[i] = 1;
    ++n_valid;
  }
  if (n_valid == 0) {
    throw Error(ErrorKind::degenerate, "desa1: every sample has negligible energy");
  }
  const double fs = x.sample_rate_hz();
  return Demodulation{TimeSeries(std::move(env), fs), TimeSeries(std::move(omega), fs), std::move(valid), 2};
}

TimeSeries inst_freq_hz(const Demodulation& d) {
  const double fs = d.inst_freq_rad.sample_rate_hz();
  std::vector<double> hz(d.inst_freq_rad.size());
  for (std::size_t i = 0; i < hz.size(); ++i) {
    hz[i] = d.inst_freq_rad[i] * fs / (2.0 * std::numbers::pi);
  }
  return TimeSeries(std::move(hz), fs);
}

}  // namespace teager
