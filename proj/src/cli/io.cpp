#include "teager/cli/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

#include "teager/error.hpp"

namespace teager::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kEncoding = "float32-little-endian-interleaved";
constexpr double kTimeTolerance = 1e-6;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string read_all(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool parse_double(std::string_view text, double& out) {
  const auto t = trim(text);
  if (t.empty()) return false;
  const char* first = t.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), out);
  return ec == std::errc() && ptr == t.data() + t.size();
}

double resolve_rate(std::optional<double> from_file, std::optional<double> fs_override, const fs::path& path) {
  if (fs_override) {
    if (!(*fs_override > 0.0)) throw Error(ErrorKind::config, "sample rate override must be positive");
    if (from_file && std::abs(*from_file - *fs_override) > kTimeTolerance * *fs_override) {
      std::ostringstream os;
      os << path.string() << ": sample rate " << *from_file << " Hz disagrees with override " << *fs_override
         << " Hz";
      throw Error(ErrorKind::ingest, os.str());
    }
    return *fs_override;
  }
  if (!from_file) {
    throw Error(ErrorKind::ingest, path.string() + ": no time column; a sample rate (--fs) is required");
  }
  return *from_file;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = end + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

bool is_time_column(std::string name) {
  std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
  return name == "time";
}

}  // namespace

InputFormat detect_format(const fs::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".csv" ? InputFormat::csv : InputFormat::binary;
}

fs::path sidecar_path(const fs::path& payload) { return fs::path(payload.string() + ".json"); }

SidecarHeader read_sidecar(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_all(path));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ingest, path.string() + ": malformed sidecar: " + e.what());
  }
  SidecarHeader h;
  try {
    h.sample_rate_hz = j.at("sample_rate_hz").get<double>();
    h.channel_names = j.at("channel_names").get<std::vector<std::string>>();
    h.sample_count = j.at("sample_count").get<std::size_t>();
    h.value_encoding = j.at("value_encoding").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ingest, path.string() + ": sidecar field error: " + e.what());
  }
  if (h.value_encoding != kEncoding) {
    throw Error(ErrorKind::ingest, path.string() + ": unsupported value_encoding '" + h.value_encoding + "'");
  }
  if (h.channel_names.empty()) throw Error(ErrorKind::ingest, path.string() + ": sidecar lists no channels");
  return h;
}

void write_sidecar(const fs::path& path, const SidecarHeader& header) {
  json j{{"sample_rate_hz", header.sample_rate_hz},
         {"channel_names", header.channel_names},
         {"sample_count", header.sample_count},
         {"value_encoding", header.value_encoding}};
  write_file_atomic(path, j.dump(2) + "\n");
}

Recording ingest_csv(const fs::path& path, std::optional<double> fs_override) {
  const auto lines = lines_of(read_all(path));
  if (lines.empty()) throw Error(ErrorKind::ingest, path.string() + ": empty file");
  auto header = split_csv_line(lines.front());
  for (auto& h : header) h = trim(h);
  const bool has_time = !header.empty() && is_time_column(header.front());
  const std::size_t first_channel = has_time ? 1 : 0;
  if (header.size() <= first_channel) throw Error(ErrorKind::ingest, path.string() + ": no channel columns");

  const std::size_t n_channels = header.size() - first_channel;
  std::vector<std::vector<double>> data(n_channels);
  std::vector<double> times;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split_csv_line(lines[r]);
    if (cells.size() != header.size()) {
      throw Error(ErrorKind::ingest, path.string() + ": row " + std::to_string(r + 1) + " has " +
                                         std::to_string(cells.size()) + " fields, header has " +
                                         std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v = 0.0;
      if (!parse_double(cells[c], v)) {
        throw Error(ErrorKind::ingest, path.string() + ": row " + std::to_string(r + 1) + ", column '" +
                                           header[c] + "': not a number ('" + trim(cells[c]) + "')");
      }
      if (!std::isfinite(v)) {
        throw Error(ErrorKind::ingest, path.string() + ": row " + std::to_string(r + 1) + ", column '" +
                                           header[c] + "': non-finite value");
      }
      if (has_time && c == 0) {
        times.push_back(v);
      } else {
        data[c - first_channel].push_back(v);
      }
    }
  }
  if (data.front().empty()) throw Error(ErrorKind::ingest, path.string() + ": no data rows");

  std::optional<double> fs_from_time;
  if (has_time) {
    if (times.size() < 2) throw Error(ErrorKind::ingest, path.string() + ": time column needs two rows");
    const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    if (!(dt > 0.0)) throw Error(ErrorKind::ingest, path.string() + ": time column is not increasing");
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double expected = times.front() + static_cast<double>(i) * dt;
      if (std::abs(times[i] - expected) > kTimeTolerance * std::max(std::abs(times[i]), dt)) {
        throw Error(ErrorKind::ingest, path.string() + ": non-uniform time column at row " +
                                           std::to_string(i + 2));
      }
    }
    double rate = 1.0 / dt;
    // Printed time stamps carry rounding; snap to an integral rate when within tolerance.
    if (std::abs(rate - std::round(rate)) <= kTimeTolerance * rate) rate = std::round(rate);
    fs_from_time = rate;
  }
  const double rate = resolve_rate(fs_from_time, fs_override, path);

  std::vector<Channel> channels;
  for (std::size_t c = 0; c < n_channels; ++c) {
    channels.push_back(Channel{header[c + first_channel], TimeSeries(std::move(data[c]), rate)});
  }
  try {
    return Recording(std::move(channels));
  } catch (const Error& e) {
    throw Error(ErrorKind::ingest, path.string() + ": " + e.what());
  }
}

Recording ingest_binary(const fs::path& path, std::optional<double> fs_override) {
  const SidecarHeader h = read_sidecar(sidecar_path(path));
  const std::string payload = read_all(path);
  const std::size_t frame_bytes = 4 * h.channel_names.size();
  if (payload.size() != frame_bytes * h.sample_count) {
    throw Error(ErrorKind::ingest, path.string() + ": payload of " + std::to_string(payload.size()) +
                                       " bytes does not match " + std::to_string(h.channel_names.size()) +
                                       " channels x " + std::to_string(h.sample_count) + " samples x 4 bytes");
  }
  const double rate = resolve_rate(h.sample_rate_hz, fs_override, path);
  const std::size_t nc = h.channel_names.size();
  std::vector<std::vector<double>> data(nc, std::vector<double>(h.sample_count));
  for (std::size_t n = 0; n < h.sample_count; ++n) {
    for (std::size_t c = 0; c < nc; ++c) {
      std::uint32_t bits = 0;
      std::memcpy(&bits, payload.data() + (n * nc + c) * 4, 4);
      if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
      const float v = std::bit_cast<float>(bits);
      if (!std::isfinite(v)) {
        throw Error(ErrorKind::ingest, path.string() + ": non-finite value at frame " + std::to_string(n) +
                                           ", channel '" + h.channel_names[c] + "'");
      }
      data[c][n] = v;
    }
  }
  std::vector<Channel> channels;
  for (std::size_t c = 0; c < nc; ++c) {
    channels.push_back(Channel{h.channel_names[c], TimeSeries(std::move(data[c]), rate)});
  }
  try {
    return Recording(std::move(channels));
  } catch (const Error& e) {
    throw Error(ErrorKind::ingest, path.string() + ": " + e.what());
  }
}

Recording ingest(const fs::path& path, InputFormat format, std::optional<double> fs_override) {
  return format == InputFormat::csv ? ingest_csv(path, fs_override) : ingest_binary(path, fs_override);
}

void write_recording_binary(const fs::path& path, const Recording& recording) {
  std::string payload;
  const std::size_t nc = recording.channel_count();
  const std::size_t ns = recording.sample_count();
  payload.resize(4 * nc * ns);
  for (std::size_t n = 0; n < ns; ++n) {
    for (std::size_t c = 0; c < nc; ++c) {
      auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(recording.channels()[c].series[n]));
      if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
      std::memcpy(payload.data() + (n * nc + c) * 4, &bits, 4);
    }
  }
  write_file_atomic(path, payload);
  write_sidecar(sidecar_path(path),
                SidecarHeader{recording.sample_rate_hz(), recording.channel_names(), ns, kEncoding});
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      break;
    }
    out.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = fs::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(ErrorKind::io, "write failed for '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::io, "cannot move output into '" + path.string() + "'");
  }
}

std::string sha256_bytes(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::io, "sha256 failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int{digest[i]};
  return os.str();
}

std::string sha256_file(const fs::path& path) { return sha256_bytes(read_all(path)); }

std::string feature_csv(const FeatureMatrix& m) {
  const bool has_label = std::any_of(m.keys.begin(), m.keys.end(), [](const RowKey& k) { return k.label.has_value(); });
  const bool has_group = std::any_of(m.keys.begin(), m.keys.end(), [](const RowKey& k) { return k.group.has_value(); });
  std::string out = "recording_id,window_index";
  if (has_label) out += ",label";
  if (has_group) out += ",group";
  for (const auto& n : m.names) out += "," + n;
  out += "\n";
  for (std::size_t r = 0; r < m.rows.size(); ++r) {
    const auto& k = m.keys[r];
    out += k.recording_id + "," + std::to_string(k.window_index);
    if (has_label) out += "," + k.label.value_or("");
    if (has_group) out += "," + k.group.value_or("");
    for (double v : m.rows[r]) out += "," + format_number(v);
    out += "\n";
  }
  return out;
}

FeatureMatrix read_feature_csv(const fs::path& path) {
  const auto lines = lines_of(read_all(path));
  if (lines.empty()) throw Error(ErrorKind::ingest, path.string() + ": empty feature file");
  const auto header = split_csv_line(lines.front());
  if (header.size() < 2 || header[0] != "recording_id" || header[1] != "window_index") {
    throw Error(ErrorKind::ingest, path.string() + ": expected 'recording_id,window_index' leading columns");
  }
  std::size_t col = 2;
  const bool has_label = col < header.size() && header[col] == "label";
  if (has_label) ++col;
  const bool has_group = col < header.size() && header[col] == "group";
  if (has_group) ++col;

  FeatureMatrix m;
  m.names.assign(header.begin() + static_cast<std::ptrdiff_t>(col), header.end());
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split_csv_line(lines[r]);
    if (cells.size() != header.size()) {
      throw Error(ErrorKind::ingest, path.string() + ": row " + std::to_string(r + 1) + " is ragged");
    }
    RowKey key;
    key.recording_id = cells[0];
    double wi = 0.0;
    if (!parse_double(cells[1], wi) || wi < 0.0 || wi != std::floor(wi)) {
      throw Error(ErrorKind::ingest, path.string() + ": row " + std::to_string(r + 1) + ": bad window_index");
    }
    key.window_index = static_cast<std::size_t>(wi);
    if (has_label) key.label = cells[2];
    if (has_group) key.group = cells[has_label ? 3 : 2];
    std::vector<double> row;
    row.reserve(m.names.size());
    for (std::size_t c = col; c < cells.size(); ++c) {
      double v = 0.0;
      if (!parse_double(cells[c], v) || !std::isfinite(v)) {
        throw Error(ErrorKind::ingest, path.string() + ": row " + std::to_string(r + 1) + ", column '" +
                                           header[c] + "': not a finite number");
      }
      row.push_back(v);
    }
    m.rows.push_back(std::move(row));
    m.keys.push_back(std::move(key));
  }
  return m;
}

}  // namespace teager::cli
