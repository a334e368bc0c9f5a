#include "teager/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "teager/cli/io.hpp"
#include "teager/error.hpp"

namespace teager::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(v)) {
    throw Error(ErrorKind::config, "config key '" + key + "': '" + value + "' is not a number");
  }
  return v;
}

long long to_integer(const std::string& key, const std::string& value) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw Error(ErrorKind::config, "config key '" + key + "': '" + value + "' is not an integer");
  }
  return v;
}

}  // namespace

FeatureConfig PipelineConfig::feature_config() const {
  FeatureConfig f;
  f.n_filters = n_filters;
  f.feature_mode = feature_mode;
  f.band_mode = band_mode;
  return f;
}

void PipelineConfig::validate(double fs_hz) const {
  if (n_filters < 1) throw Error(ErrorKind::config, "n_filters must be >= 1");
  try {
    window.hop_samples(fs_hz);
  } catch (const Error& e) {
    throw Error(ErrorKind::config, std::string("window: ") + e.what());
  }
  if (notch_hz && !(*notch_hz > 0.0 && *notch_hz < fs_hz / 2.0)) {
    throw Error(ErrorKind::config, "notch_hz must lie between 0 and Nyquist (" + format_number(fs_hz / 2.0) + " Hz)");
  }
  if (highpass_hz && !(*highpass_hz > 0.0 && *highpass_hz < fs_hz / 2.0)) {
    throw Error(ErrorKind::config,
                "highpass_hz must lie between 0 and Nyquist (" + format_number(fs_hz / 2.0) + " Hz)");
  }
}

std::map<std::string, std::string> parse_key_values(const std::string& text, const std::string& origin) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::config, origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw Error(ErrorKind::config, origin + ":" + std::to_string(lineno) + ": empty key or value");
    }
    if (!out.emplace(key, value).second) {
      throw Error(ErrorKind::config, origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
  }
  return out;
}

PipelineConfig apply_settings(PipelineConfig base, const std::map<std::string, std::string>& settings) {
  double window_seconds = base.window.window_seconds();
  double overlap = base.window.overlap_fraction();
  for (const auto& [key, value] : settings) {
    if (key == "window_seconds") {
      window_seconds = to_double(key, value);
    } else if (key == "overlap") {
      overlap = to_double(key, value);
    } else if (key == "n_filters") {
      base.n_filters = static_cast<int>(to_integer(key, value));
    } else if (key == "notch_hz") {
      base.notch_hz = to_double(key, value);
    } else if (key == "highpass_hz") {
      base.highpass_hz = to_double(key, value);
    } else if (key == "feature_mode") {
      base.feature_mode = parse_feature_mode(value);
    } else if (key == "band_mode") {
      base.band_mode = parse_band_mode(value);
    } else if (key == "fs_override") {
      base.fs_override = to_double(key, value);
    } else if (key == "seed") {
      const auto s = to_integer(key, value);
      if (s < 0) throw Error(ErrorKind::config, "seed must be non-negative");
      base.seed = static_cast<std::uint64_t>(s);
    } else {
      throw Error(ErrorKind::config, "unknown config key '" + key + "'");
    }
  }
  try {
    base.window = WindowSpec(window_seconds, overlap);
  } catch (const Error& e) {
    throw Error(ErrorKind::config, e.what());
  }
  if (base.n_filters < 1) throw Error(ErrorKind::config, "n_filters must be >= 1");
  return base;
}

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config, "cannot open config file '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return apply_settings(std::move(base), parse_key_values(os.str(), path.string()));
}

std::string render_config(const PipelineConfig& c) {
  std::ostringstream os;
  os << "window_seconds = " << format_number(c.window.window_seconds()) << "\n"
     << "overlap = " << format_number(c.window.overlap_fraction()) << "\n"
     << "n_filters = " << c.n_filters << "\n";
  if (c.notch_hz) os << "notch_hz = " << format_number(*c.notch_hz) << "\n";
  if (c.highpass_hz) os << "highpass_hz = " << format_number(*c.highpass_hz) << "\n";
  os << "feature_mode = " << to_string(c.feature_mode) << "\n"
     << "band_mode = " << to_string(c.band_mode) << "\n";
  if (c.fs_override) os << "fs_override = " << format_number(*c.fs_override) << "\n";
  os << "seed = " << c.seed << "\n";
  return os.str();
}

}  // namespace teager::cli
