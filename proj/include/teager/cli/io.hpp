#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "teager/core.hpp"
#include "teager/features.hpp"

namespace teager::cli {

enum class InputFormat { csv, binary };

// Picks csv for a ".csv" extension and binary otherwise.
InputFormat detect_format(const std::filesystem::path& path);

// Sidecar describing a raw float32 payload. Stored as JSON next to the
// payload at "<payload>.json".
struct SidecarHeader {
  double sample_rate_hz = 0.0;
  std::vector<std::string> channel_names;
  std::size_t sample_count = 0;
  std::string value_encoding = "float32-little-endian-interleaved";
};

std::filesystem::path sidecar_path(const std::filesystem::path& payload);
SidecarHeader read_sidecar(const std::filesystem::path& path);
void write_sidecar(const std::filesystem::path& path, const SidecarHeader& header);

// CSV: header row of channel names, one column per channel, an optional
// leading "time" column whose spacing must be uniform (1e-6 relative). The
// rate comes from the time column or from fs_override; when both exist
// they must agree.
Recording ingest_csv(const std::filesystem::path& path, std::optional<double> fs_override);
Recording ingest_binary(const std::filesystem::path& path, std::optional<double> fs_override);
Recording ingest(const std::filesystem::path& path, InputFormat format, std::optional<double> fs_override);

void write_recording_binary(const std::filesystem::path& path, const Recording& recording);

// Decimal, 9 significant digits.
std::string format_number(double v);

std::vector<std::string> split_csv_line(std::string_view line);

// Writes `content` to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string sha256_file(const std::filesystem::path& path);
std::string sha256_bytes(std::string_view bytes);

std::string feature_csv(const FeatureMatrix& m);
FeatureMatrix read_feature_csv(const std::filesystem::path& path);

}  // namespace teager::cli
