#include "teager/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

#include "teager/error.hpp"

namespace teager {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

void check_edge(double f_hz, double fs_hz, const char* what) {
  if (!(fs_hz > 0.0)) throw Error(ErrorKind::parameter, std::string(what) + ": fs must be positive");
  if (!(f_hz > 0.0) || !(f_hz < fs_hz / 2.0)) {
    std::ostringstream os;
    os << what << ": frequency " << f_hz << " Hz must lie strictly between 0 and Nyquist ("
       << fs_hz / 2.0 << " Hz)";
    throw Error(ErrorKind::design, os.str());
  }
}

double prewarp(double f_hz, double fs_hz) { return 2.0 * fs_hz * std::tan(kPi * f_hz / fs_hz); }

cd bilinear(cd s, double fs_hz) { return (2.0 * fs_hz + s) / (2.0 * fs_hz - s); }

// Left-half-plane poles of the order-n analog Butterworth lowpass with unit cutoff.
std::vector<cd> butter_prototype(int n) {
  std::vector<cd> poles;
  poles.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double theta = kPi * (2.0 * k + n + 1) / (2.0 * n);
    poles.emplace_back(std::cos(theta), std::sin(theta));
  }
  return poles;
}

// Groups digital poles into conjugate pairs (or pairs of reals) and returns
// the matching denominators. A lone leftover real pole yields a first-order
// denominator with a2 = 0.
std::vector<std::pair<double, double>> pair_poles(const std::vector<cd>& poles) {
  constexpr double kRealTol = 1e-10;
  std::vector<std::pair<double, double>> dens;
  std::vector<double> reals;
  for (const auto& p : poles) {
    if (std::abs(p.imag()) <= kRealTol * std::max(1.0, std::abs(p))) {
      reals.push_back(p.real());
    } else if (p.imag() > 0.0) {
      dens.emplace_back(-2.0 * p.real(), std::norm(p));
    }
  }
  std::sort(reals.begin(), reals.end());
  for (std::size_t i = 0; i + 1 < reals.size(); i += 2) {
    dens.emplace_back(-(reals[i] + reals[i + 1]), reals[i] * reals[i + 1]);
  }
  if (reals.size() % 2 == 1) dens.emplace_back(-reals.back(), 0.0);
  return dens;
}

// Scales the first section so that |H(f_ref)| == 1.
void normalize_gain(IirFilter& f, double f_ref_hz) {
  const double mag = f.magnitude(f_ref_hz);
  if (!(mag > 0.0) || !std::isfinite(mag)) {
    throw Error(ErrorKind::design, f.description + ": cannot normalize gain");
  }
  // Spread the correction evenly to keep section gains comparable.
  const double per = std::pow(1.0 / mag, 1.0 / static_cast<double>(f.sections.size()));
  for (auto& s : f.sections) {
    s.b0 *= per;
    s.b1 *= per;
    s.b2 *= per;
  }
}

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

std::complex<double> IirFilter::response(double f_hz) const {
  const cd z1 = std::polar(1.0, -2.0 * kPi * f_hz / fs_hz);
  const cd z2 = z1 * z1;
  cd h{1.0, 0.0};
  for (const auto& s : sections) {
    h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
  }
  return h;
}

std::vector<double> IirFilter::pole_radii() const {
  std::vector<double> radii;
  for (const auto& s : sections) {
    // Roots of z^2 + a1 z + a2.
    const cd disc = std::sqrt(cd(s.a1 * s.a1 - 4.0 * s.a2, 0.0));
    radii.push_back(std::abs((-s.a1 + disc) / 2.0));
    if (s.a2 != 0.0) radii.push_back(std::abs((-s.a1 - disc) / 2.0));
  }
  return radii;
}

IirFilter design_butter_bandpass(const FrequencyBand& band, int order, double fs_hz) {
  if (order < 2 || order % 2 != 0) {
    throw Error(ErrorKind::parameter, "design_butter_bandpass: order must be even and >= 2");
  }
  check_edge(band.f_low_hz(), fs_hz, "design_butter_bandpass");
  check_edge(band.f_high_hz(), fs_hz, "design_butter_bandpass");

  const double w1 = prewarp(band.f_low_hz(), fs_hz);
  const double w2 = prewarp(band.f_high_hz(), fs_hz);
  const double w0_sq = w1 * w2;
  const double bw = w2 - w1;

  std::vector<cd> zpoles;
  for (const cd& p : butter_prototype(order / 2)) {
    // s^2 - p bw s + w0^2 = 0
    const cd half = p * bw / 2.0;
    const cd root = std::sqrt(half * half - w0_sq);
    zpoles.push_back(bilinear(half + root, fs_hz));
    zpoles.push_back(bilinear(half - root, fs_hz));
  }

  IirFilter f;
  f.fs_hz = fs_hz;
  std::ostringstream os;
  os << "butterworth bandpass order " << order << " [" << band.f_low_hz() << ", " << band.f_high_hz()
     << "] Hz";
  f.description = os.str();
  // Each section: zeros at z = 1 and z = -1.
  for (const auto& [a1, a2] : pair_poles(zpoles)) {
    f.sections.push_back(Biquad{1.0, 0.0, -1.0, a1, a2});
  }
  const double center_hz = fs_hz / kPi * std::atan(std::sqrt(w0_sq) / (2.0 * fs_hz));
  normalize_gain(f, center_hz);
  return f;
}

IirFilter design_highpass(double cutoff_hz, int order, double fs_hz) {
  if (order < 1) throw Error(ErrorKind::parameter, "design_highpass: order must be >= 1");
  check_edge(cutoff_hz, fs_hz, "design_highpass");
  const double wc = prewarp(cutoff_hz, fs_hz);

  std::vector<cd> zpoles;
  for (const cd& p : butter_prototype(order)) zpoles.push_back(bilinear(wc / p, fs_hz));

  IirFilter f;
  f.fs_hz = fs_hz;
  std::ostringstream os;
  os << "butterworth highpass order " << order << " at " << cutoff_hz << " Hz";
  f.description = os.str();
  for (const auto& [a1, a2] : pair_poles(zpoles)) {
    if (a2 == 0.0) {
      f.sections.push_back(Biquad{1.0, -1.0, 0.0, a1, 0.0});
    } else {
      f.sections.push_back(Biquad{1.0, -2.0, 1.0, a1, a2});
    }
  }
  normalize_gain(f, fs_hz / 2.0);
  return f;
}

IirFilter design_notch(double freq_hz, double q, double fs_hz) {
  if (!(q > 0.0)) throw Error(ErrorKind::parameter, "design_notch: q must be positive");
  check_edge(freq_hz, fs_hz, "design_notch");
  const double w0 = 2.0 * kPi * freq_hz / fs_hz;
  const double bw = w0 / q;
  const double gain = 1.0 / (1.0 + std::tan(bw / 2.0));
  const double c = std::cos(w0);

  IirFilter f;
  f.fs_hz = fs_hz;
  std::ostringstream os;
  os << "notch at " << freq_hz << " Hz, q " << q;
  f.description = os.str();
  f.sections.push_back(Biquad{gain, -2.0 * gain * c, gain, -2.0 * gain * c, 2.0 * gain - 1.0});
  return f;
}

TimeSeries apply_iir(const IirFilter& filter, const TimeSeries& x) {
  if (x.empty()) throw Error(ErrorKind::too_short, "apply_iir: empty input");
  std::vector<double> y(x.values());
  for (const auto& s : filter.sections) {
    double z1 = 0.0, z2 = 0.0;
    for (auto& v : y) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
  return TimeSeries(std::move(y), x.sample_rate_hz());
}

std::size_t psd_feature_count(double fs_hz) {
  return static_cast<std::size_t>(std::floor(fs_hz / 2.0));
}

std::vector<double> PsdEstimate::feature_view(double fs_hz) const {
  const std::size_t count = psd_feature_count(fs_hz);
  if (count + 1 > power.size()) {
    throw Error(ErrorKind::layout, "PsdEstimate: not enough bins for a " + std::to_string(count) +
                                       "-value feature view");
  }
  return std::vector<double>(power.begin() + 1, power.begin() + 1 + static_cast<std::ptrdiff_t>(count));
}

std::vector<double> PsdEstimate::feature_freqs(double fs_hz) const {
  const std::size_t count = psd_feature_count(fs_hz);
  if (count + 1 > freqs_hz.size()) {
    throw Error(ErrorKind::layout, "PsdEstimate: not enough bins for the feature view");
  }
  return std::vector<double>(freqs_hz.begin() + 1,
                             freqs_hz.begin() + 1 + static_cast<std::ptrdiff_t>(count));
}

double PsdEstimate::total_power() const {
  double acc = 0.0;
  for (double p : power) acc += p;
  return acc * resolution_hz;
}

PsdEstimate welch_psd(const TimeSeries& x, const WelchOptions& options) {
  const double fs = x.sample_rate_hz();
  const std::size_t seg = options.segment_length.value_or(static_cast<std::size_t>(std::llround(fs)));
  if (seg < 2) throw Error(ErrorKind::parameter, "welch_psd: segment length must be >= 2");
  if (!(options.overlap >= 0.0 && options.overlap < 1.0)) {
    throw Error(ErrorKind::parameter, "welch_psd: overlap must lie in [0, 1)");
  }
  if (x.size() < seg) {
    throw Error(ErrorKind::too_short, "welch_psd: signal of " + std::to_string(x.size()) +
                                          " samples is shorter than one " + std::to_string(seg) +
                                          "-sample segment");
  }
  const auto noverlap = static_cast<std::size_t>(std::floor(static_cast<double>(seg) * options.overlap));
  const std::size_t step = seg - noverlap;
  const std::size_t n_seg = (x.size() - seg) / step + 1;
  const std::size_t n_bins = seg / 2 + 1;

  std::vector<double> window(seg);
  double window_power = 0.0;
  for (std::size_t i = 0; i < seg; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(seg));
    window_power += window[i] * window[i];
  }

  auto* in = static_cast<double*>(fftw_malloc(sizeof(double) * seg));
  auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n_bins));
  std::unique_ptr<double, decltype(&fftw_free)> in_guard(in, &fftw_free);
  std::unique_ptr<fftw_complex, decltype(&fftw_free)> out_guard(out, &fftw_free);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(seg), in, out, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw Error(ErrorKind::design, "welch_psd: FFT planning failed");

  std::vector<double> acc(n_bins, 0.0);
  const auto xs = x.samples();
  for (std::size_t s = 0; s < n_seg; ++s) {
    const std::size_t off = s * step;
    for (std::size_t i = 0; i < seg; ++i) in[i] = xs[off + i] * window[i];
    fftw_execute(plan);
    for (std::size_t k = 0; k < n_bins; ++k) acc[k] += out[k][0] * out[k][0] + out[k][1] * out[k][1];
  }
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }

  PsdEstimate psd;
  psd.resolution_hz = fs / static_cast<double>(seg);
  psd.freqs_hz.resize(n_bins);
  psd.power.resize(n_bins);
  const double scale = 1.0 / (fs * window_power * static_cast<double>(n_seg));
  for (std::size_t k = 0; k < n_bins; ++k) {
    psd.freqs_hz[k] = static_cast<double>(k) * psd.resolution_hz;
    const bool unpaired = k == 0 || (seg % 2 == 0 && k == n_bins - 1);
    psd.power[k] = acc[k] * scale * (unpaired ? 1.0 : 2.0);
  }
  return psd;
}

}  // namespace teager
