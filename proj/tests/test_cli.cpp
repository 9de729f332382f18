/**
 * Copyright (c) 2026 the transw authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License. */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "support/micro_kg.hpp"

using namespace transw;
using namespace transw::testing;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

CliResult run_cli(const TempDir& dir, const std::string& args) {
  static int counter = 0;
  fs::path out = dir.path() / ("cli_out_" + std::to_string(counter));
  fs::path err = dir.path() / ("cli_err_" + std::to_string(counter));
  counter++;
  std::string cmd = std::string(TRANSW_CLI_PATH) + " " + args + " >" + out.string() + " 2>" +
                    err.string();
  int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

// One micro KG and one short trained model shared by the whole file.
struct CliWorld {
  TempDir dir{"cli"};
  MicroKg kg;
  fs::path run_dir;

  CliWorld() : kg(make_micro_kg(dir.path() / "kg")) {
    run_dir = dir.path() / "run";
    CliResult r = run_cli(dir, "train --config " + kg.config_path.string() +
                                   " --set train.epochs=25 --out " + run_dir.string());
    if (r.exit_code != 0) {
      std::cerr << "fixture training failed: " << r.err;
      std::abort();
    }
  }

  std::string model() const { return (run_dir / "model.bin").string(); }
  std::string config() const { return kg.config_path.string(); }
};

CliWorld& world() {
  static CliWorld w;
  return w;
}

}  // namespace

TEST_CASE("train writes model, manifest, stats and result") {
  auto& w = world();
  CHECK(fs::exists(w.run_dir / "model.bin"));
  CHECK(fs::exists(w.run_dir / "manifest.json"));
  CHECK(fs::exists(w.run_dir / "stats.tsv"));
  CHECK(fs::exists(w.run_dir / "result.json"));

  std::string manifest = slurp(w.run_dir / "manifest.json");
  CHECK(manifest.find("\"seed\"") != std::string::npos);
  CHECK(manifest.find("\"fingerprint\"") != std::string::npos);
  CHECK(manifest.find("train.epochs") != std::string::npos);

  // Header plus one line per epoch.
  std::string stats = slurp(w.run_dir / "stats.tsv");
  CHECK(std::count(stats.begin(), stats.end(), '\n') == 26);
}

TEST_CASE("missing word-vector file: input-missing exit, no partial model") {
  auto& w = world();
  fs::path out = w.dir.path() / "broken";
  CliResult r = run_cli(w.dir, "train --config " + w.config() +
                                   " --set words.path=/nonexistent/glove.txt --out " +
                                   out.string());
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("class=input-missing") != std::string::npos);
  CHECK_FALSE(fs::exists(out / "model.bin"));
}

TEST_CASE("unknown config keys are rejected") {
  auto& w = world();
  CliResult r = run_cli(w.dir, "train --config " + w.config() +
                                   " --set train.learning=0.1 --out " +
                                   (w.dir.path() / "x").string());
  CHECK(r.exit_code == 9);
  CHECK(r.err.find("class=config-invalid") != std::string::npos);
}

TEST_CASE("command-line --set supersedes the config file value") {
  auto& w = world();
  // Config file says 150 epochs; the fixture run above used 25.
  std::string stats = slurp(w.run_dir / "stats.tsv");
  std::istringstream in(stats);
  std::string line, last;
  while (std::getline(in, line))
    if (!line.empty()) last = line;
  CHECK(last.substr(0, 3) == "25\t");
}

TEST_CASE("same config and seed give byte-identical model files") {
  auto& w = world();
  fs::path out2 = w.dir.path() / "run2";
  CliResult r = run_cli(w.dir, "train --config " + w.config() +
                                   " --set train.epochs=25 --out " + out2.string());
  REQUIRE(r.exit_code == 0);
  CHECK(slurp(out2 / "model.bin") == slurp(w.run_dir / "model.bin"));
  // A different seed must give a different model.
  fs::path out3 = w.dir.path() / "run3";
  r = run_cli(w.dir, "train --config " + w.config() +
                         " --set train.epochs=25 --set train.seed=8 --out " + out3.string());
  REQUIRE(r.exit_code == 0);
  CHECK(slurp(out3 / "model.bin") != slurp(w.run_dir / "model.bin"));
}

TEST_CASE("resume from a checkpoint reproduces the uninterrupted run") {
  auto& w = world();
  fs::path full = w.dir.path() / "full";
  fs::path part = w.dir.path() / "part";
  fs::path cont = w.dir.path() / "cont";
  std::string base = "train --config " + w.config() + " --set train.seed=3 ";
  REQUIRE(run_cli(w.dir, base + "--set train.epochs=10 --out " + full.string()).exit_code == 0);
  REQUIRE(run_cli(w.dir, base + "--set train.epochs=10 --set train.checkpoint_interval=5 --out " +
                             part.string())
              .exit_code == 0);
  REQUIRE(fs::exists(part / "checkpoint-5.bin"));
  CliResult r = run_cli(w.dir, base + "--set train.epochs=10 --resume " +
                                   (part / "checkpoint-5.bin").string() + " --out " +
                                   cont.string());
  REQUIRE(r.exit_code == 0);
  CHECK(slurp(cont / "model.bin") == slurp(full / "model.bin"));
}

TEST_CASE("eval lp emits six hits values in both formats") {
  auto& w = world();
  fs::path out = w.dir.path() / "lp";
  CliResult r = run_cli(w.dir, "eval lp --model " + w.model() + " --config " + w.config() +
                                   " --out " + out.string());
  REQUIRE(r.exit_code == 0);
  std::string records = slurp(out / "lp_records.tsv");
  int hits_lines = 0;
  std::istringstream in(records);
  std::string line;
  double raw10 = -1, filt10 = -1;
  while (std::getline(in, line)) {
    if (line.find("hits@") != std::string::npos) hits_lines++;
    std::istringstream fields(line);
    std::string proto, ds, metric, setting, value;
    std::getline(fields, proto, '\t');
    std::getline(fields, ds, '\t');
    std::getline(fields, metric, '\t');
    std::getline(fields, setting, '\t');
    std::getline(fields, value, '\t');
    if (metric == "hits@10" && setting == "raw") raw10 = std::stod(value);
    if (metric == "hits@10" && setting == "filtered") filt10 = std::stod(value);
  }
  CHECK(hits_lines == 6);
  CHECK(raw10 >= 0.0);
  CHECK(filt10 >= raw10);
  CHECK(slurp(out / "lp_report.txt").find("hits@10") != std::string::npos);
}

TEST_CASE("eval lp with multiple threads matches single-threaded output") {
  auto& w = world();
  fs::path a = w.dir.path() / "lp_t1";
  fs::path b = w.dir.path() / "lp_t4";
  REQUIRE(run_cli(w.dir, "eval lp --model " + w.model() + " --config " + w.config() +
                             " --out " + a.string())
              .exit_code == 0);
  REQUIRE(run_cli(w.dir, "eval lp --model " + w.model() + " --config " + w.config() +
                             " --threads 4 --out " + b.string())
              .exit_code == 0);
  CHECK(slurp(a / "lp_records.tsv") == slurp(b / "lp_records.tsv"));
}

TEST_CASE("eval tc produces thresholds and accuracy") {
  auto& w = world();
  fs::path out = w.dir.path() / "tc";
  CliResult r = run_cli(w.dir, "eval tc --model " + w.model() + " --config " + w.config() +
                                   " --out " + out.string());
  REQUIRE(r.exit_code == 0);
  std::string records = slurp(out / "tc_records.tsv");
  CHECK(records.find("tc\tmicro\taccuracy\toverall\t") != std::string::npos);
  CHECK(records.find("sigma\trel:film_starring") != std::string::npos);
}

TEST_CASE("eval tc without labels is a labels-required error") {
  auto& w = world();
  CliResult r = run_cli(
      w.dir, "eval tc --model " + w.model() + " --config " + w.config() + " --set data.valid=" +
                 (w.dir.path() / "kg" / "train.tsv").string() + " --out " +
                 (w.dir.path() / "tc_bad").string());
  CHECK(r.exit_code == 5);
  CHECK(r.err.find("class=labels-required") != std::string::npos);
}

TEST_CASE("eval unknown rejects the baseline model kind with the rationale") {
  auto& w = world();
  CliResult r = run_cli(w.dir, "eval unknown --config " + w.config() +
                                   " --set model.kind=transe --set model.dim=8 --out " +
                                   (w.dir.path() / "unk_bad").string());
  CHECK(r.exit_code == 6);
  CHECK(r.err.find("class=capability-mismatch") != std::string::npos);
  CHECK(r.err.find("unseen relation") != std::string::npos);
}

TEST_CASE("eval unknown smoke run over two folds") {
  auto& w = world();
  fs::path out = w.dir.path() / "unk";
  CliResult r = run_cli(w.dir, "eval unknown --config " + w.config() +
                                   " --set train.epochs=5 --set unknown.folds=2" +
                                   " --set unknown.repeats=2 --out " + out.string());
  REQUIRE(r.exit_code == 0);
  std::string records = slurp(out / "unknown_records.tsv");
  CHECK(records.find("unknown\tmicro\taccuracy\tfold:1\t") != std::string::npos);
  CHECK(records.find("unknown\tmicro\taccuracy\tfold:2\t") != std::string::npos);
  CHECK(records.find("unknown\tmicro\taccuracy\tmean\t") != std::string::npos);
  CHECK(records.find("bias_lo") != std::string::npos);
  CHECK(records.find("sigma") != std::string::npos);
}

TEST_CASE("score prints a distance and a sigma verdict for known surfaces") {
  auto& w = world();
  CliResult r = run_cli(w.dir, "score --model " + w.model() +
                                   " --head alan_old_film --rel film_starring"
                                   " --tail bree_gold_song");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("distance\t") != std::string::npos);
  CHECK(r.out.find("verdict\t") != std::string::npos);  // fit_sigma defaults on
}

TEST_CASE("score of fully unseen surfaces is deterministic across runs") {
  auto& w = world();
  std::string args = "score --model " + w.model() +
                     " --head qzx_glorp_zzz --rel zz_blarg --tail yyy_qqq";
  CliResult a = run_cli(w.dir, args);
  CliResult b = run_cli(w.dir, args);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("distance\t") != std::string::npos);
}

TEST_CASE("transe cannot score unseen surfaces") {
  auto& w = world();
  fs::path out = w.dir.path() / "transe_run";
  CliResult r = run_cli(w.dir, "train --config " + w.config() +
                                   " --set model.kind=transe --set model.dim=8" +
                                   " --set train.epochs=3 --out " + out.string());
  REQUIRE(r.exit_code == 0);
  CliResult good = run_cli(w.dir, "score --model " + (out / "model.bin").string() +
                                      " --head alan_old_film --rel film_starring"
                                      " --tail bree_gold_song");
  CHECK(good.exit_code == 0);
  CliResult bad = run_cli(w.dir, "score --model " + (out / "model.bin").string() +
                                     " --head never_seen_entity --rel film_starring"
                                     " --tail bree_gold_song");
  CHECK(bad.exit_code == 6);
  CHECK(bad.err.find("class=capability-mismatch") != std::string::npos);
}

TEST_CASE("inspect prints the model header") {
  auto& w = world();
  CliResult r = run_cli(w.dir, "inspect --model " + w.model());
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("kind\ttransw") != std::string::npos);
  CHECK(r.out.find("dim\t16") != std::string::npos);
  CHECK(r.out.find("format_version\t1") != std::string::npos);
  CHECK(r.out.find("sigma\t") != std::string::npos);
  CHECK(r.out.find("entities\t75") != std::string::npos);
}

TEST_CASE("eval on a different dataset fails the fingerprint pairing check") {
  auto& w = world();
  // Rebuild the dataset with one extra entity surface in train.
  fs::path alt = w.dir.path() / "alt_train.tsv";
  {
    std::ofstream out(alt);
    out << slurp(w.dir.path() / "kg" / "train.tsv");
    out << "zz_extra_node\tfilm_starring\talan_old_film\n";
  }
  CliResult r = run_cli(w.dir, "eval lp --model " + w.model() + " --config " + w.config() +
                                   " --set data.train=" + alt.string() + " --out " +
                                   (w.dir.path() / "lp_bad").string());
  CHECK(r.exit_code == 8);
  CHECK(r.err.find("class=fingerprint-mismatch") != std::string::npos);
}

TEST_CASE("usage errors exit with code 2") {
  auto& w = world();
  CliResult r = run_cli(w.dir, "train");  // --config missing
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("class=usage") != std::string::npos);
}
