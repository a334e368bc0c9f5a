#include "teager/cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "teager/error.hpp"
#include "teager/spectral.hpp"

namespace teager::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::vector<std::string>> read_csv_table(const fs::path& path) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(read_text(path));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    rows.push_back(split_csv_line(line));
  }
  return rows;
}

std::optional<std::size_t> find_column(const std::vector<std::string>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) return std::nullopt;
  return static_cast<std::size_t>(it - header.begin());
}

Recording preprocess(const Recording& rec, const PipelineConfig& config) {
  const double fs = rec.sample_rate_hz();
  std::optional<IirFilter> notch, highpass;
  if (config.notch_hz) notch = design_notch(*config.notch_hz, config.notch_q, fs);
  if (config.highpass_hz) highpass = design_highpass(*config.highpass_hz, config.highpass_order, fs);
  if (!notch && !highpass) return rec;
  std::vector<Channel> out;
  for (const auto& ch : rec.channels()) {
    TimeSeries s = ch.series;
    if (notch) s = apply_iir(*notch, s);
    if (highpass) s = apply_iir(*highpass, s);
    out.push_back(Channel{ch.name, std::move(s)});
  }
  return Recording(std::move(out));
}

ordered_json config_json(const PipelineConfig& c) {
  ordered_json j;
  j["window_seconds"] = c.window.window_seconds();
  j["overlap"] = c.window.overlap_fraction();
  j["n_filters"] = c.n_filters;
  j["notch_hz"] = c.notch_hz ? ordered_json(*c.notch_hz) : ordered_json(nullptr);
  j["notch_q"] = c.notch_q;
  j["highpass_hz"] = c.highpass_hz ? ordered_json(*c.highpass_hz) : ordered_json(nullptr);
  j["highpass_order"] = c.highpass_order;
  j["feature_mode"] = to_string(c.feature_mode);
  j["band_mode"] = to_string(c.band_mode);
  j["fs_override"] = c.fs_override ? ordered_json(*c.fs_override) : ordered_json(nullptr);
  j["seed"] = c.seed;
  ordered_json bands = ordered_json::array();
  for (const auto& b : c.bands.canonical) bands.push_back({b.name(), b.f_low_hz(), b.f_high_hz()});
  j["bands"] = bands;
  j["broadband"] = {c.bands.broadband.f_low_hz(), c.bands.broadband.f_high_hz()};
  return j;
}

bool all_integers(const std::vector<std::string>& names) {
  return std::all_of(names.begin(), names.end(), [](const std::string& s) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return !s.empty() && ec == std::errc() && ptr == s.data() + s.size();
  });
}

// Class ids ordered numerically when every label is an integer, else lexically.
std::vector<std::string> class_order(const std::vector<std::string>& labels) {
  std::vector<std::string> names(labels.begin(), labels.end());
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  if (all_integers(names)) {
    std::sort(names.begin(), names.end(),
              [](const std::string& a, const std::string& b) { return std::stoll(a) < std::stoll(b); });
  }
  return names;
}

}  // namespace

InputSpec input_from_path(const fs::path& path) {
  return InputSpec{path, path.stem().string(), std::nullopt, std::nullopt};
}

std::vector<InputSpec> read_input_list(const fs::path& list_path) {
  const auto table = read_csv_table(list_path);
  if (table.empty()) throw Error(ErrorKind::config, list_path.string() + ": empty input list");
  const auto& header = table.front();
  const auto path_col = find_column(header, "path");
  if (!path_col) throw Error(ErrorKind::config, list_path.string() + ": input list needs a 'path' column");
  const auto id_col = find_column(header, "recording_id");
  const auto label_col = find_column(header, "label");
  const auto group_col = find_column(header, "group");
  std::vector<InputSpec> out;
  for (std::size_t r = 1; r < table.size(); ++r) {
    const auto& row = table[r];
    if (row.size() != header.size()) {
      throw Error(ErrorKind::config, list_path.string() + ": row " + std::to_string(r + 1) + " is ragged");
    }
    fs::path p = row[*path_col];
    if (p.is_relative()) p = list_path.parent_path() / p;
    InputSpec spec = input_from_path(p);
    if (id_col) spec.recording_id = row[*id_col];
    if (label_col) spec.label = row[*label_col];
    if (group_col) spec.group = row[*group_col];
    out.push_back(std::move(spec));
  }
  return out;
}

ExtractResult extract_features(const PipelineConfig& config, const std::vector<Recording>& recordings,
                               const std::vector<RowKey>& keys) {
  if (recordings.empty()) throw Error(ErrorKind::config, "extract: no input recordings");
  if (recordings.size() != keys.size()) throw Error(ErrorKind::parameter, "extract: key count mismatch");
  const double fs = recordings.front().sample_rate_hz();
  for (const auto& r : recordings) {
    if (r.sample_rate_hz() != fs) {
      throw Error(ErrorKind::config, "extract: inputs do not share one sample rate");
    }
  }
  config.validate(fs);
  const std::size_t w = config.window.window_samples(fs);
  const FeatureExtractor extractor(config.feature_config(), fs, w);

  ExtractResult result;
  result.warnings = extractor.warnings();
  const std::vector<std::string> first_names = recordings.front().channel_names();
  for (std::size_t i = 0; i < recordings.size(); ++i) {
    if (recordings[i].channel_names() != first_names) {
      throw Error(ErrorKind::layout, "extract: recording '" + keys[i].recording_id +
                                         "' has a different channel set than '" + keys.front().recording_id + "'");
    }
    const Recording clean = preprocess(recordings[i], config);
    std::vector<Recording> windows;
    try {
      windows = segment_recording(clean, config.window);
    } catch (const Error& e) {
      throw Error(e.kind(), "recording '" + keys[i].recording_id + "': " + e.what());
    }
    for (std::size_t wi = 0; wi < windows.size(); ++wi) {
      RowKey key = keys[i];
      key.window_index = wi;
      result.matrix.append(extractor.extract(windows[wi]), std::move(key));
    }
  }
  return result;
}

ExtractResult extract_features(const PipelineConfig& config, const std::vector<InputSpec>& inputs) {
  std::vector<Recording> recordings;
  std::vector<RowKey> keys;
  const bool labelled = !inputs.empty() && inputs.front().label.has_value();
  for (const auto& in : inputs) {
    if (in.label.has_value() != labelled) {
      throw Error(ErrorKind::config, "extract: either every input has a label or none does");
    }
    recordings.push_back(ingest(in.path, detect_format(in.path), config.fs_override));
    keys.push_back(RowKey{in.recording_id, 0, in.label, in.group});
  }
  return extract_features(config, recordings, keys);
}

fs::path manifest_path(const fs::path& output) { return fs::path(output.string() + ".manifest.json"); }

ExtractResult run_extract(const PipelineConfig& config, const std::vector<InputSpec>& inputs,
                          const fs::path& output_path) {
  ExtractResult result = extract_features(config, inputs);
  const std::string csv = feature_csv(result.matrix);

  ordered_json manifest;
  manifest["tool"] = "teager extract";
  manifest["config"] = config_json(config);
  manifest["preprocessing_row"] = {{"window_s", config.window.window_seconds()},
                                   {"overlap_percent", config.window.overlap_fraction() * 100.0},
                                   {"n_filters", config.n_filters}};
  ordered_json ins = ordered_json::array();
  for (const auto& in : inputs) {
    ordered_json entry{{"path", in.path.string()}, {"recording_id", in.recording_id}, {"sha256", sha256_file(in.path)}};
    if (detect_format(in.path) == InputFormat::binary) entry["sidecar_sha256"] = sha256_file(sidecar_path(in.path));
    ins.push_back(entry);
  }
  manifest["inputs"] = ins;
  manifest["output"] = {{"path", output_path.string()},
                        {"sha256", sha256_bytes(csv)},
                        {"rows", result.matrix.row_count()},
                        {"features", result.matrix.feature_count()},
                        {"layout_id", result.matrix.layout_id}};
  manifest["warnings"] = result.warnings;

  write_file_atomic(output_path, csv);
  try {
    write_file_atomic(manifest_path(output_path), manifest.dump(2) + "\n");
  } catch (...) {
    std::error_code ec;
    fs::remove(output_path, ec);
    throw;
  }
  return result;
}

void run_synth(const SynthRequest& request, const fs::path& output, const std::optional<fs::path>& truth_path) {
  const AmFmSignal sig = gen_am_fm(request.spec, request.fs_hz, request.seed);
  std::string x = "time,x\n";
  std::string truth = "time,envelope,inst_freq_hz\n";
  for (std::size_t i = 0; i < sig.signal.size(); ++i) {
    const std::string t = format_number(static_cast<double>(i) / request.fs_hz);
    x += t + "," + format_number(sig.signal[i]) + "\n";
    truth += t + "," + format_number(sig.envelope[i]) + "," + format_number(sig.inst_freq_hz[i]) + "\n";
  }
  if (truth_path) write_file_atomic(*truth_path, truth);
  write_file_atomic(output, x);
}

fs::path run_synth_dataset(const DatasetRequest& request, const fs::path& dir) {
  const BandSet set = canonical_band_set();
  std::vector<FrequencyBand> bands;
  for (const auto& name : request.class_bands) bands.push_back(set.find(name));
  const LabeledDataset ds =
      gen_labeled_dataset(request.n_per_class, bands, request.fs_hz, request.window, request.seed, request.options);

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create directory '" + dir.string() + "'");
  std::string list = "path,recording_id,label\n";
  for (std::size_t r = 0; r < ds.recordings.size(); ++r) {
    const auto& rec = ds.recordings[r];
    const std::string id = "rec" + std::to_string(r);
    std::string csv = "time";
    for (const auto& ch : rec.channels()) csv += "," + ch.name;
    csv += "\n";
    for (std::size_t n = 0; n < rec.sample_count(); ++n) {
      csv += format_number(static_cast<double>(n) / request.fs_hz);
      for (const auto& ch : rec.channels()) csv += "," + format_number(ch.series[n]);
      csv += "\n";
    }
    write_file_atomic(dir / (id + ".csv"), csv);
    list += id + ".csv," + id + "," + request.class_bands[static_cast<std::size_t>(ds.labels[r])] + "\n";
  }
  const fs::path list_path = dir / "inputs.csv";
  write_file_atomic(list_path, list);
  return list_path;
}

EvalReport run_eval(const EvalRequest& request, std::ostream& out) {
  const FeatureMatrix m = read_feature_csv(request.feature_csv);
  std::vector<std::string> label_text;
  for (const auto& k : m.keys) {
    if (!k.label || k.label->empty()) {
      throw Error(ErrorKind::ingest, request.feature_csv.string() + ": eval needs a non-empty label column");
    }
    label_text.push_back(*k.label);
  }
  EvalReport report;
  report.class_names = class_order(label_text);
  std::vector<int> labels;
  for (const auto& t : label_text) {
    labels.push_back(static_cast<int>(
        std::find(report.class_names.begin(), report.class_names.end(), t) - report.class_names.begin()));
  }

  if (request.scores_csv) {
    const auto table = read_csv_table(*request.scores_csv);
    if (table.empty()) throw Error(ErrorKind::ingest, request.scores_csv->string() + ": empty score file");
    const auto& header = table.front();
    const auto rid = find_column(header, "recording_id");
    const auto wid = find_column(header, "window_index");
    const auto fid = find_column(header, "fold");
    if (!rid || !wid || !fid) {
      throw Error(ErrorKind::ingest, request.scores_csv->string() +
                                         ": score file needs recording_id, window_index and fold columns");
    }
    std::vector<std::size_t> score_cols;
    for (const auto& name : report.class_names) {
      const auto c = find_column(header, "score_" + name);
      if (!c) throw Error(ErrorKind::ingest, request.scores_csv->string() + ": missing column 'score_" + name + "'");
      score_cols.push_back(*c);
    }
    std::map<std::pair<std::string, std::string>, std::pair<int, std::vector<double>>> by_key;
    for (std::size_t r = 1; r < table.size(); ++r) {
      const auto& row = table[r];
      if (row.size() != header.size()) {
        throw Error(ErrorKind::ingest, request.scores_csv->string() + ": row " + std::to_string(r + 1) + " is ragged");
      }
      std::vector<double> s;
      for (auto c : score_cols) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(row[c].data(), row[c].data() + row[c].size(), v);
        if (ec != std::errc() || !std::isfinite(v)) {
          throw Error(ErrorKind::ingest, request.scores_csv->string() + ": row " + std::to_string(r + 1) +
                                             ": bad score '" + row[c] + "'");
        }
        s.push_back(v);
      }
      by_key[{row[*rid], row[*wid]}] = {std::stoi(row[*fid]), std::move(s)};
    }
    report.result = cross_validate_external(
        labels,
        [&](std::size_t row, int fold) -> std::optional<std::vector<double>> {
          const auto it = by_key.find({m.keys[row].recording_id, std::to_string(m.keys[row].window_index)});
          if (it == by_key.end() || it->second.first != fold) return std::nullopt;
          return it->second.second;
        },
        request.k, request.seed);
  } else {
    report.result = cross_validate(m.rows, labels, request.k, request.seed);
  }

  if (request.folds_out) {
    std::string csv = "recording_id,window_index,label,fold\n";
    for (std::size_t i = 0; i < m.keys.size(); ++i) {
      csv += m.keys[i].recording_id + "," + std::to_string(m.keys[i].window_index) + "," + label_text[i] + "," +
             std::to_string(report.result.folds.fold_of_row[i]) + "\n";
    }
    write_file_atomic(*request.folds_out, csv);
  }

  out << "fold,balanced_accuracy,roc_auc\n";
  for (std::size_t f = 0; f < report.result.per_fold.size(); ++f) {
    out << f << "," << format_number(report.result.per_fold[f].balanced_accuracy) << ","
        << format_number(report.result.per_fold[f].roc_auc) << "\n";
  }
  out << "mean," << format_number(report.result.mean.balanced_accuracy) << ","
      << format_number(report.result.mean.roc_auc) << "\n";
  out << "std," << format_number(report.result.std.balanced_accuracy) << ","
      << format_number(report.result.std.roc_auc) << "\n";
  return report;
}

void run_psd(const fs::path& input, std::optional<double> fs_override, const WelchOptions& welch,
             const fs::path& output) {
  const Recording rec = ingest(input, detect_format(input), fs_override);
  std::vector<PsdEstimate> psds;
  for (const auto& ch : rec.channels()) psds.push_back(welch_psd(ch.series, welch));
  std::string csv = "freq_hz";
  for (const auto& ch : rec.channels()) csv += "," + ch.name;
  csv += "\n";
  for (std::size_t k = 0; k < psds.front().freqs_hz.size(); ++k) {
    csv += format_number(psds.front().freqs_hz[k]);
    for (const auto& p : psds) csv += "," + format_number(p.power[k]);
    csv += "\n";
  }
  write_file_atomic(output, csv);
}

}  // namespace teager::cli
