#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "teager/cli/config.hpp"
#include "teager/cli/io.hpp"
#include "teager/eval.hpp"
#include "teager/features.hpp"
#include "teager/synth.hpp"

namespace teager::cli {

struct InputSpec {
  std::filesystem::path path;
  std::string recording_id;
  std::optional<std::string> label;
  std::optional<std::string> group;
};

// recording_id defaults to the file stem.
InputSpec input_from_path(const std::filesystem::path& path);

// CSV list with a `path` column and optional `recording_id`, `label` and
// `group` columns. Relative paths resolve against the list's directory.
std::vector<InputSpec> read_input_list(const std::filesystem::path& list_path);

struct ExtractResult {
  FeatureMatrix matrix;
  std::vector<std::string> warnings;
};

// Per recording: optional notch, optional highpass, windowing, feature
// assembly. Writes the feature CSV and "<output>.manifest.json" atomically;
// nothing is left behind on failure.
ExtractResult run_extract(const PipelineConfig& config, const std::vector<InputSpec>& inputs,
                          const std::filesystem::path& output_path);

// Same pipeline without touching the filesystem for output.
ExtractResult extract_features(const PipelineConfig& config, const std::vector<InputSpec>& inputs);
ExtractResult extract_features(const PipelineConfig& config, const std::vector<Recording>& recordings,
                               const std::vector<RowKey>& keys);

std::filesystem::path manifest_path(const std::filesystem::path& output);

struct SynthRequest {
  AmFmSpec spec;
  double fs_hz = 250.0;
  std::uint64_t seed = 0;
};

// Writes "time,x"; with truth_path also "time,envelope,inst_freq_hz".
void run_synth(const SynthRequest& request, const std::filesystem::path& output,
               const std::optional<std::filesystem::path>& truth_path);

struct DatasetRequest {
  std::vector<std::string> class_bands;  // canonical band names
  std::size_t n_per_class = 20;
  double fs_hz = 250.0;
  WindowSpec window{4.0, 0.0};
  std::uint64_t seed = 0;
  LabeledDatasetOptions options;
};

// One CSV per recording plus "inputs.csv" (path,recording_id,label) in dir.
std::filesystem::path run_synth_dataset(const DatasetRequest& request, const std::filesystem::path& dir);

struct EvalRequest {
  std::filesystem::path feature_csv;
  int k = 5;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> scores_csv;
  std::optional<std::filesystem::path> folds_out;
};

struct EvalReport {
  CrossValidationResult result;
  std::vector<std::string> class_names;  // index = class id
};

// Prints "fold,balanced_accuracy,roc_auc" rows, then mean and std rows.
EvalReport run_eval(const EvalRequest& request, std::ostream& out);

// Writes "freq_hz,<channel>..." with the full one-sided Welch density.
void run_psd(const std::filesystem::path& input, std::optional<double> fs_override,
             const WelchOptions& welch, const std::filesystem::path& output);

}  // namespace teager::cli
