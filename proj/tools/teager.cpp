// teager: TKEO feature extraction for multichannel EEG-like recordings.
//
//   teager extract --config bci.cfg -o features.csv a.csv b.csv
//   teager synth --carrier-hz 10 --fs 250 --duration-s 8 -o tone.csv
//   teager eval features.csv --k 5 --seed 0
//   teager psd tone.csv -o tone_psd.csv

#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "teager/cli/commands.hpp"
#include "teager/error.hpp"

namespace {

using teager::ErrorKind;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config:
    case ErrorKind::parameter:
      return 2;
    case ErrorKind::ingest:
      return 3;
    case ErrorKind::io:
      return 4;
    default:
      return 5;
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  for (auto& s : teager::cli::split_csv_line(text)) {
    if (!s.empty()) out.push_back(s);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TKEO energy-descriptor extraction and evaluation"};
  app.require_subcommand(1);

  // extract
  auto* extract = app.add_subcommand("extract", "Extract per-window feature vectors into a CSV");
  std::optional<std::string> config_path, input_list;
  std::vector<std::string> inputs;
  std::string extract_out;
  std::map<std::string, std::string> flag_values;
  std::optional<double> window_seconds, overlap, notch_hz, highpass_hz, fs_override;
  std::optional<int> n_filters;
  std::optional<std::string> feature_mode, band_mode;
  std::optional<long long> seed;
  extract->add_option("--config", config_path, "Key/value config file; flags override it");
  extract->add_option("--input-list", input_list, "CSV with path[,recording_id][,label][,group] columns");
  extract->add_option("inputs", inputs, "Recording files (.csv, or binary with a .json sidecar)");
  extract->add_option("-o,--output", extract_out, "Feature CSV to write")->required();
  extract->add_option("--window-seconds", window_seconds);
  extract->add_option("--overlap", overlap, "Window overlap fraction in [0, 1)");
  extract->add_option("--n-filters", n_filters, "Gabor filters per band");
  extract->add_option("--notch-hz", notch_hz);
  extract->add_option("--highpass-hz", highpass_hz);
  extract->add_option("--feature-mode", feature_mode, "tkeo | energy | psd | combined");
  extract->add_option("--band-mode", band_mode, "raw | fused");
  extract->add_option("--fs", fs_override, "Sample rate for inputs without a time column");
  extract->add_option("--seed", seed);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate AM-FM test signals or a labelled dataset");
  teager::cli::SynthRequest sreq;
  std::string synth_out;
  std::optional<std::string> truth_out, dataset_dir;
  std::string dataset_classes = "theta,alpha,beta";
  teager::cli::DatasetRequest dreq;
  double ds_window = 4.0, ds_overlap = 0.0;
  synth->add_option("-o,--output", synth_out, "Signal CSV (time,x)");
  synth->add_option("--truth-out", truth_out, "Ground truth CSV (time,envelope,inst_freq_hz)");
  synth->add_option("--carrier-hz", sreq.spec.carrier_hz);
  synth->add_option("--am-depth", sreq.spec.am_depth);
  synth->add_option("--am-hz", sreq.spec.am_hz);
  synth->add_option("--fm-deviation-hz", sreq.spec.fm_deviation_hz);
  synth->add_option("--fm-hz", sreq.spec.fm_hz);
  synth->add_option("--amplitude", sreq.spec.amplitude);
  synth->add_option("--duration-s", sreq.spec.duration_s);
  synth->add_option("--noise-std", sreq.spec.noise_std);
  synth->add_option("--fs", sreq.fs_hz);
  synth->add_option("--seed", sreq.seed);
  synth->add_option("--dataset-dir", dataset_dir, "Write a labelled dataset and inputs.csv here instead");
  synth->add_option("--classes", dataset_classes, "Comma-separated canonical bands, one class each");
  synth->add_option("--n-per-class", dreq.n_per_class);
  synth->add_option("--channels", dreq.options.channel_count);
  synth->add_option("--windows-per-recording", dreq.options.windows_per_recording);
  synth->add_option("--window-seconds", ds_window);
  synth->add_option("--overlap", ds_overlap);

  // eval
  auto* eval = app.add_subcommand("eval", "Stratified k-fold evaluation of a feature CSV");
  teager::cli::EvalRequest ereq;
  std::string eval_in;
  std::optional<std::string> scores, folds_out;
  eval->add_option("features", eval_in, "Feature CSV with a label column")->required();
  eval->add_option("--k", ereq.k);
  eval->add_option("--seed", ereq.seed);
  eval->add_option("--scores", scores, "External score CSV keyed by recording_id,window_index,fold");
  eval->add_option("--folds-out", folds_out, "Write the fold assignment CSV");

  // psd
  auto* psd = app.add_subcommand("psd", "Welch PSD of every channel");
  std::string psd_in, psd_out;
  std::optional<double> psd_fs;
  std::optional<std::size_t> psd_seg;
  double psd_overlap = 0.5;
  psd->add_option("input", psd_in)->required();
  psd->add_option("-o,--output", psd_out)->required();
  psd->add_option("--fs", psd_fs);
  psd->add_option("--segment-length", psd_seg, "Samples per segment (default: one second)");
  psd->add_option("--overlap", psd_overlap);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*extract) {
      teager::cli::PipelineConfig config;
      if (config_path) config = teager::cli::load_config(*config_path);
      std::map<std::string, std::string> overrides;
      auto put = [&](const char* key, const auto& v) {
        if (v) {
          std::ostringstream os;
          os.precision(17);
          os << *v;
          overrides[key] = os.str();
        }
      };
      put("window_seconds", window_seconds);
      put("overlap", overlap);
      put("n_filters", n_filters);
      put("notch_hz", notch_hz);
      put("highpass_hz", highpass_hz);
      put("feature_mode", feature_mode);
      put("band_mode", band_mode);
      put("fs_override", fs_override);
      put("seed", seed);
      config = teager::cli::apply_settings(config, overrides);

      std::vector<teager::cli::InputSpec> specs;
      if (input_list) specs = teager::cli::read_input_list(*input_list);
      for (const auto& p : inputs) specs.push_back(teager::cli::input_from_path(p));
      if (specs.empty()) throw teager::Error(ErrorKind::config, "extract: no inputs given");
      const auto result = teager::cli::run_extract(config, specs, extract_out);
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
      std::cerr << "wrote " << result.matrix.row_count() << " rows x " << result.matrix.feature_count()
                << " features to " << extract_out << "\n";
    } else if (*synth) {
      if (dataset_dir) {
        dreq.class_bands = split_list(dataset_classes);
        dreq.fs_hz = sreq.fs_hz;
        dreq.seed = sreq.seed;
        dreq.window = teager::WindowSpec(ds_window, ds_overlap);
        const auto list = teager::cli::run_synth_dataset(dreq, *dataset_dir);
        std::cerr << "wrote dataset list " << list.string() << "\n";
      } else {
        if (synth_out.empty()) throw teager::Error(ErrorKind::config, "synth: --output is required");
        std::optional<std::filesystem::path> truth;
        if (truth_out) truth = *truth_out;
        teager::cli::run_synth(sreq, synth_out, truth);
      }
    } else if (*eval) {
      ereq.feature_csv = eval_in;
      if (scores) ereq.scores_csv = *scores;
      if (folds_out) ereq.folds_out = *folds_out;
      teager::cli::run_eval(ereq, std::cout);
    } else if (*psd) {
      teager::WelchOptions welch;
      welch.segment_length = psd_seg;
      welch.overlap = psd_overlap;
      teager::cli::run_psd(psd_in, psd_fs, welch, psd_out);
    }
  } catch (const teager::Error& e) {
    std::cerr << "error [" << teager::to_string(e.kind()) << "]: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error [internal]: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
