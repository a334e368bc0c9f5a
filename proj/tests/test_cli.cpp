#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"
#include "teager/cli/commands.hpp"
#include "teager/cli/config.hpp"
#include "teager/cli/io.hpp"
#include "teager/error.hpp"

using namespace teager;
using namespace teager::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("teager_" + tag + "_" + std::to_string(std::rand()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path operator/(const std::string& name) const { return path / name; }
};

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream(p, std::ios::binary) << s;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_message(auto&& fn, ErrorKind expected) {
  try {
    fn();
  } catch (const Error& e) {
    CHECK(e.kind() == expected);
    return e.what();
  }
  FAIL("expected an error");
  return {};
}

void write_tone_csv(const fs::path& p, double seconds, double fs, double f_hz) {
  const auto x = oracle::tone_hz(static_cast<std::size_t>(seconds * fs), 1.0, f_hz, fs);
  std::string s = "time,C3\n";
  for (std::size_t i = 0; i < x.size(); ++i) s += format_number(static_cast<double>(i) / fs) + "," + format_number(x[i]) + "\n";
  write_text(p, s);
}

int run_tool(const std::string& args) {
  const int status = std::system((std::string(TEAGER_BIN) + " " + args + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("csv ingest") {
  TempDir dir("csv");
  std::string s = "C3,C4\n";
  for (int i = 0; i < 1000; ++i) s += std::to_string(i) + "," + std::to_string(-i) + "\n";
  write_text(dir / "a.csv", s);
  const auto rec = ingest_csv(dir / "a.csv", 250.0);
  CHECK(rec.channel_count() == 2);
  CHECK(rec.sample_count() == 1000);
  CHECK(rec.channels()[1].series[999] == -999.0);
  CHECK(rec.sample_rate_hz() == 250.0);

  write_text(dir / "t.csv", "time,x\n0,1\n0.004,2\n0.008,3\n");
  CHECK(ingest_csv(dir / "t.csv", std::nullopt).sample_rate_hz() == 250.0);
  CHECK_THROWS_AS(ingest_csv(dir / "t.csv", 100.0), Error);
  CHECK_THROWS_AS(ingest_csv(dir / "a.csv", std::nullopt), Error);

  write_text(dir / "nan.csv", "C3,C4\n1,2\n3,NaN\n");
  const auto msg = error_message([&] { ingest_csv(dir / "nan.csv", 100.0); }, ErrorKind::ingest);
  CHECK(msg.find("row 3") != std::string::npos);  // file line, header is row 1
  CHECK(msg.find("C4") != std::string::npos);

  write_text(dir / "rag.csv", "C3,C4\n1,2\n3\n");
  CHECK(error_message([&] { ingest_csv(dir / "rag.csv", 100.0); }, ErrorKind::ingest).find("row 3") != std::string::npos);

  write_text(dir / "jit.csv", "time,x\n0,1\n0.004,2\n0.009,3\n");
  error_message([&] { ingest_csv(dir / "jit.csv", std::nullopt); }, ErrorKind::ingest);
}

TEST_CASE("binary ingest") {
  TempDir dir("bin");
  const std::size_t n = 300;
  std::vector<float> frames(2 * n);
  for (std::size_t i = 0; i < frames.size(); ++i) frames[i] = static_cast<float>(i) * 0.5f;
  {
    std::ofstream out(dir / "r.f32", std::ios::binary);
    out.write(reinterpret_cast<const char*>(frames.data()), static_cast<std::streamsize>(frames.size() * 4));
  }
  write_sidecar(sidecar_path(dir / "r.f32"), SidecarHeader{128.0, {"a", "b"}, n});
  CHECK(fs::file_size(dir / "r.f32") == 8 * n);
  const auto rec = ingest(dir / "r.f32", detect_format(dir / "r.f32"), std::nullopt);
  CHECK(rec.sample_count() == n);
  CHECK(rec.channels()[1].series[1] == 1.5);
  CHECK(rec.channels()[0].series[1] == 1.0);

  write_sidecar(sidecar_path(dir / "r.f32"), SidecarHeader{128.0, {"a", "b"}, n + 1});
  error_message([&] { ingest_binary(dir / "r.f32", std::nullopt); }, ErrorKind::ingest);

  // Round trip through the writer.
  write_recording_binary(dir / "w.f32", rec);
  const auto back = ingest_binary(dir / "w.f32", std::nullopt);
  CHECK(back.channels()[0].series.values() == rec.channels()[0].series.values());
}

TEST_CASE("config parsing") {
  TempDir dir("cfg");
  write_text(dir / "bci.cfg",
             "# BCI-like\nwindow_seconds = 4\noverlap = 0\nn_filters = 25\nnotch_hz = 50\nhighpass_hz = 0.5\n");
  const auto c = load_config(dir / "bci.cfg");
  CHECK(c.n_filters == 25);
  CHECK(c.window.window_seconds() == 4.0);
  CHECK(*c.notch_hz == 50.0);
  CHECK(*c.highpass_hz == 0.5);

  write_text(dir / "round.cfg", render_config(c));
  const auto r = load_config(dir / "round.cfg");
  CHECK(render_config(r) == render_config(c));

  CHECK(error_message([] { parse_key_values("bogus_key = 3\n", "x"); apply_settings({}, parse_key_values("bogus_key = 3\n", "x")); },
                      ErrorKind::config).find("bogus_key") != std::string::npos);
  error_message([] { apply_settings({}, {{"n_filters", "0"}}); }, ErrorKind::config);
  error_message([] { apply_settings({}, {{"feature_mode", "wavelet"}}); }, ErrorKind::config);
}

TEST_CASE("extract reproduces preprocessing rows in the manifest") {
  TempDir dir("extract");
  write_tone_csv(dir / "rec.csv", 20.0, 250.0, 10.0);

  PipelineConfig bci;
  bci.notch_hz = 50.0;
  bci.highpass_hz = 0.5;
  const auto res = run_extract(bci, {input_from_path(dir / "rec.csv")}, dir / "bci.csv");
  CHECK(res.matrix.row_count() == 5);
  const auto m = nlohmann::json::parse(read_text(manifest_path(dir / "bci.csv")));
  CHECK(m["preprocessing_row"]["window_s"] == 4.0);
  CHECK(m["preprocessing_row"]["overlap_percent"] == 0.0);
  CHECK(m["preprocessing_row"]["n_filters"] == 25);
  CHECK(m["output"]["sha256"] == sha256_file(dir / "bci.csv"));
  CHECK(m["inputs"][0]["sha256"] == sha256_file(dir / "rec.csv"));

  PipelineConfig tuep = apply_settings({}, {{"window_seconds", "10"}, {"overlap", "0"}, {"n_filters", "12"}});
  run_extract(tuep, {input_from_path(dir / "rec.csv")}, dir / "tuep.csv");
  const auto t = nlohmann::json::parse(read_text(manifest_path(dir / "tuep.csv")));
  CHECK(t["preprocessing_row"]["window_s"] == 10.0);
  CHECK(t["preprocessing_row"]["n_filters"] == 12);
  CHECK(t["output"]["rows"] == 2);
}

TEST_CASE("8 s recording gives 2 rows of 20 features, reproducibly") {
  TempDir dir("rows");
  write_tone_csv(dir / "r.csv", 8.0, 250.0, 6.0);
  PipelineConfig c;
  c.n_filters = 8;
  run_extract(c, {input_from_path(dir / "r.csv")}, dir / "a.csv");
  run_extract(c, {input_from_path(dir / "r.csv")}, dir / "b.csv");
  const auto m = read_feature_csv(dir / "a.csv");
  CHECK(m.row_count() == 2);
  CHECK(m.feature_count() == 20);
  CHECK(m.keys[1].recording_id == "r");
  CHECK(m.keys[1].window_index == 1);
  CHECK(sha256_file(dir / "a.csv") == sha256_file(dir / "b.csv"));
  CHECK(read_text(dir / "a.csv").rfind("recording_id,window_index,C3__delta__m_tkeo", 0) == 0);
}

TEST_CASE("input list with labels and groups") {
  TempDir dir("list");
  fs::create_directories(dir / "data");
  write_tone_csv(dir / "data/x.csv", 4.0, 250.0, 10.0);
  write_tone_csv(dir / "data/y.csv", 4.0, 250.0, 20.0);
  write_text(dir / "list.csv", "path,recording_id,label,group\ndata/x.csv,rx,alpha,s1\ndata/y.csv,ry,beta,s2\n");
  const auto inputs = read_input_list(dir / "list.csv");
  REQUIRE(inputs.size() == 2);
  PipelineConfig c;
  c.n_filters = 4;
  run_extract(c, inputs, dir / "f.csv");
  const auto m = read_feature_csv(dir / "f.csv");
  CHECK(m.keys[0].label == "alpha");
  CHECK(m.keys[1].group == "s2");
  CHECK(read_text(dir / "f.csv").rfind("recording_id,window_index,label,group,", 0) == 0);
}

TEST_CASE("synth, psd and eval commands") {
  TempDir dir("cmds");
  SynthRequest req;
  req.spec.carrier_hz = 10.0;
  req.spec.duration_s = 8.0;
  req.spec.noise_std = 0.1;
  req.seed = 4;
  run_synth(req, dir / "a.csv", dir / "truth.csv");
  run_synth(req, dir / "b.csv", std::nullopt);
  CHECK(read_text(dir / "a.csv") == read_text(dir / "b.csv"));
  CHECK(read_text(dir / "truth.csv").rfind("time,envelope,inst_freq_hz\n", 0) == 0);

  run_psd(dir / "a.csv", std::nullopt, {}, dir / "psd.csv");
  std::ifstream in(dir / "psd.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "freq_hz,x");
  double best = -1.0, best_f = -1.0;
  while (std::getline(in, line)) {
    const auto cells = split_csv_line(line);
    const double p = std::stod(cells[1]);
    if (p > best) {
      best = p;
      best_f = std::stod(cells[0]);
    }
  }
  CHECK(best_f == 10.0);

  DatasetRequest ds;
  ds.class_bands = {"theta", "alpha", "beta"};
  ds.n_per_class = 10;
  ds.seed = 3;
  const auto list = run_synth_dataset(ds, dir / "ds");
  PipelineConfig c;
  c.n_filters = 12;
  run_extract(c, read_input_list(list), dir / "feat.csv");
  std::ostringstream out;
  const auto rep = run_eval({dir / "feat.csv", 5, 0, std::nullopt, dir / "folds.csv"}, out);
  CHECK(rep.result.mean.balanced_accuracy > 0.9);
  CHECK(rep.class_names == std::vector<std::string>{"alpha", "beta", "theta"});
  CHECK(out.str().rfind("fold,balanced_accuracy,roc_auc\n", 0) == 0);
  CHECK(out.str().find("\nmean,") != std::string::npos);

  // External scores keyed by the written folds: one-hot on the true label.
  std::ifstream folds(dir / "folds.csv");
  std::getline(folds, line);
  CHECK(line == "recording_id,window_index,label,fold");
  std::string scores = "recording_id,window_index,fold,score_alpha,score_beta,score_theta\n";
  while (std::getline(folds, line)) {
    const auto c = split_csv_line(line);
    scores += c[0] + "," + c[1] + "," + c[3];
    for (const char* name : {"alpha", "beta", "theta"}) scores += c[2] == name ? ",1" : ",0";
    scores += "\n";
  }
  write_text(dir / "scores.csv", scores);
  std::ostringstream out2;
  const auto ext = run_eval({dir / "feat.csv", 5, 0, dir / "scores.csv", std::nullopt}, out2);
  CHECK(ext.result.mean.balanced_accuracy == 1.0);
  CHECK(ext.result.mean.roc_auc == 1.0);
  CHECK(ext.result.folds.fold_of_row == rep.result.folds.fold_of_row);
}

TEST_CASE("binary exit codes and no partial outputs") {
  TempDir dir("exit");
  write_tone_csv(dir / "ok.csv", 8.0, 250.0, 10.0);
  write_text(dir / "bad.csv", "time,x\n0,1\n0.004,NaN\n");
  const auto ok = (dir / "ok.csv").string(), bad = (dir / "bad.csv").string();
  CHECK(run_tool("extract " + ok + " -o " + (dir / "f.csv").string() + " --n-filters 4") == 0);
  CHECK(fs::exists(dir / "f.csv"));
  CHECK(fs::exists(dir / "f.csv.manifest.json"));

  CHECK(run_tool("extract " + bad + " -o " + (dir / "g.csv").string()) == 3);
  CHECK(run_tool("extract " + ok + " -o " + (dir / "h.csv").string() + " --n-filters 0") == 2);
  CHECK(run_tool("extract " + ok + " -o " + (dir / "i.csv").string() + " --window-seconds 30") != 0);
  CHECK(run_tool("extract " + (dir / "missing.csv").string() + " -o " + (dir / "j.csv").string()) != 0);
  CHECK(run_tool("extract " + ok + " -o " + (dir / "nodir/k.csv").string()) == 4);
  for (const char* name : {"g.csv", "h.csv", "i.csv", "j.csv"}) {
    CHECK_FALSE(fs::exists(dir / name));
    CHECK_FALSE(fs::exists(dir / (std::string(name) + ".manifest.json")));
  }
  for (const auto& e : fs::directory_iterator(dir.path)) CHECK(e.path().extension() != ".tmp");
}

}  // TEST_SUITE
