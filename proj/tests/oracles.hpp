#pragma once

// Reference computations used only by the tests. They deliberately avoid the
// library's own code paths: closed forms, direct DTFT sums and brute force.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

constexpr double kPi = std::numbers::pi;

inline std::vector<double> tone(std::size_t n, double amplitude, double omega, double phase) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = amplitude * std::cos(omega * static_cast<double>(i) + phase);
  return x;
}

inline std::vector<double> tone_hz(std::size_t n, double amplitude, double f_hz, double fs_hz, double phase = 0.0) {
  return tone(n, amplitude, 2.0 * kPi * f_hz / fs_hz, phase);
}

inline std::vector<double> white_noise(std::size_t n, double stddev, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, stddev);
  std::vector<double> x(n);
  for (auto& v : x) v = d(rng);
  return x;
}

// Psi[A cos(Omega n + phi)] = A^2 sin^2(Omega).
inline double tone_energy(double amplitude, double omega) {
  const double s = std::sin(omega);
  return amplitude * amplitude * s * s;
}

// |sum_m h[m] e^{-j w (m - center)}| evaluated directly.
inline double fir_magnitude(const std::vector<double>& h, double f_hz, double fs_hz) {
  const double w = 2.0 * kPi * f_hz / fs_hz;
  const double center = static_cast<double>(h.size() / 2);
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t m = 0; m < h.size(); ++m) acc += h[m] * std::polar(1.0, -w * (static_cast<double>(m) - center));
  return std::abs(acc);
}

// Analog Butterworth bandpass magnitude at the prewarped frequency. With the
// bilinear transform this is exactly the digital magnitude at f_hz.
inline double butter_bandpass_magnitude(double f_hz, double f_lo, double f_hi, int order, double fs_hz) {
  auto warp = [&](double f) { return 2.0 * fs_hz * std::tan(kPi * f / fs_hz); };
  const double w = warp(f_hz), w1 = warp(f_lo), w2 = warp(f_hi);
  const double x = (w * w - w1 * w2) / ((w2 - w1) * w);
  return 1.0 / std::sqrt(1.0 + std::pow(x * x, order / 2));
}

inline double butter_highpass_magnitude(double f_hz, double cutoff, int order, double fs_hz) {
  auto warp = [&](double f) { return 2.0 * fs_hz * std::tan(kPi * f / fs_hz); };
  if (f_hz == 0.0) return 0.0;
  const double r = warp(cutoff) / warp(f_hz);
  return 1.0 / std::sqrt(1.0 + std::pow(r * r, order));
}

inline double rms(const std::vector<double>& x, std::size_t skip = 0) {
  double acc = 0.0;
  std::size_t n = 0;
  for (std::size_t i = skip; i + skip < x.size(); ++i, ++n) acc += x[i] * x[i];
  return std::sqrt(acc / static_cast<double>(n));
}

inline double db(double mag) { return 20.0 * std::log10(mag); }

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Naive brute-force mean of x[n]^2 - x[n-1] x[n+1] over interior samples.
inline double mean_energy(const std::vector<double>& x) {
  double acc = 0.0;
  for (std::size_t n = 1; n + 1 < x.size(); ++n) acc += x[n] * x[n] - x[n - 1] * x[n + 1];
  return acc / static_cast<double>(x.size() - 2);
}

}  // namespace oracle
