#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "redrep/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv = {"redrep"};
  for (const std::string& arg : args) argv.push_back(arg.c_str());
  return redrep::cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("redrep_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
  static int& counter() {
    static int value = 0;
    return value;
  }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("synth is byte-identical across reruns") {
  TempDir dir;
  const std::vector<std::string> args = {
      "synth", "--seed", "7", "--n", "60", "--out", dir.file("a.conll"),
      "--trace", dir.file("a.trace")};
  REQUIRE(run_cli(args) == 0);
  const std::string first = slurp(dir.file("a.conll"));
  const std::string first_trace = slurp(dir.file("a.trace"));

  std::vector<std::string> again = args;
  again[6] = dir.file("b.conll");
  again[8] = dir.file("b.trace");
  REQUIRE(run_cli(again) == 0);
  CHECK(slurp(dir.file("b.conll")) == first);
  CHECK(slurp(dir.file("b.trace")) == first_trace);
}

TEST_CASE("synth, split, train, predict, eval pipeline") {
  TempDir dir;
  REQUIRE(run_cli({"synth", "--seed", "3", "--n", "240", "--p-redup", "0.4",
                   "--p-rep", "0.4", "--p-other", "0.2", "--p-confusion", "0.2",
                   "--out", dir.file("corpus.conll")}) == 0);
  REQUIRE(run_cli({"split", "--in", dir.file("corpus.conll"), "--train-out",
                   dir.file("train.conll"), "--val-out", dir.file("val.conll"),
                   "--test-out", dir.file("test.conll"), "--seed", "5"}) == 0);
  REQUIRE(run_cli({"train", "--model", "crf", "--rir", "on", "--train",
                   dir.file("train.conll"), "--out", dir.file("model.rr"),
                   "--seed", "1"}) == 0);
  REQUIRE(run_cli({"predict", "--model", dir.file("model.rr"), "--in",
                   dir.file("test.conll"), "--out", dir.file("pred.conll")}) == 0);
  REQUIRE(run_cli({"eval", "--gold", dir.file("test.conll"), "--pred",
                   dir.file("pred.conll"), "--report", dir.file("pred_eval.json")}) == 0);

  const json pred_report = json::parse(slurp(dir.file("pred_eval.json")));
  CHECK(pred_report["macro_f1"].get<double>() >= 0.0);
  CHECK(pred_report["macro_f1"].get<double>() <= 1.0);
  CHECK(pred_report["runs"] == 1);

  // model-file evaluation agrees with the predict->eval loop
  REQUIRE(run_cli({"eval", "--model", dir.file("model.rr"), "--test",
                   dir.file("test.conll"), "--report", dir.file("model_eval.json")}) == 0);
  const json model_report = json::parse(slurp(dir.file("model_eval.json")));
  CHECK(model_report["macro_f1"] == pred_report["macro_f1"]);
  CHECK(model_report["config"]["eval.test"] == dir.file("test.conll"));
}

TEST_CASE("eval with --runs retrains per seed and reports the spread") {
  TempDir dir;
  REQUIRE(run_cli({"synth", "--seed", "11", "--n", "160", "--p-redup", "0.4",
                   "--p-rep", "0.4", "--out", dir.file("train.conll")}) == 0);
  REQUIRE(run_cli({"synth", "--seed", "12", "--n", "60", "--p-redup", "0.4",
                   "--p-rep", "0.4", "--out", dir.file("test.conll")}) == 0);
  REQUIRE(run_cli({"eval", "--train", dir.file("train.conll"), "--test",
                   dir.file("test.conll"), "--model-kind", "crf", "--runs", "3",
                   "--seed", "100", "--epochs", "3",
                   "--report", dir.file("runs.json")}) == 0);
  const json report = json::parse(slurp(dir.file("runs.json")));
  CHECK(report["runs"] == 3);
  CHECK(report["macro_f1"].get<double>() > 0.5);
  CHECK(report["macro_f1_std"].get<double>() >= 0.0);
}

TEST_CASE("ablation emits paired reports and the delta") {
  TempDir dir;
  REQUIRE(run_cli({"synth", "--seed", "21", "--n", "200", "--p-redup", "0.4",
                   "--p-rep", "0.4", "--p-interregnum", "0.6", "--p-confusion", "0.3",
                   "--out", dir.file("train.conll")}) == 0);
  REQUIRE(run_cli({"synth", "--seed", "22", "--n", "80", "--p-redup", "0.4",
                   "--p-rep", "0.4", "--p-interregnum", "0.6", "--p-confusion", "0.3",
                   "--out", dir.file("test.conll")}) == 0);
  REQUIRE(run_cli({"ablation", "--train", dir.file("train.conll"), "--test",
                   dir.file("test.conll"), "--templates",
                   "W0,EQ_PREV,EQ_NEXT,PREFIX3,SUFFIX3", "--seed", "9", "--report",
                   dir.file("ablation.json")}) == 0);
  const json report = json::parse(slurp(dir.file("ablation.json")));
  CHECK(report.contains("without_rir"));
  CHECK(report.contains("with_rir"));
  const double delta = report["macro_f1_delta"].get<double>();
  CHECK(delta == doctest::Approx(report["with_rir"]["macro_f1"].get<double>() -
                                 report["without_rir"]["macro_f1"].get<double>()));
}

TEST_CASE("kappa matches the derived table and flags degeneracy") {
  TempDir dir;
  {
    std::ofstream table(dir.file("table.tsv"));
    table << "2\t0\n1\t1\n";
  }
  REQUIRE(run_cli({"kappa", "--table", dir.file("table.tsv"), "--report",
                   dir.file("kappa.json")}) == 0);
  const json report = json::parse(slurp(dir.file("kappa.json")));
  CHECK(report["fleiss_kappa"].get<double>() ==
        doctest::Approx(-1.0 / 3.0).epsilon(1e-12));

  {
    std::ofstream table(dir.file("degenerate.tsv"));
    table << "2\t0\n2\t0\n";
  }
  CHECK(run_cli({"kappa", "--table", dir.file("degenerate.tsv")}) == 2);
}

TEST_CASE("verify-stats reports row-level outcomes") {
  TempDir dir;
  {
    std::ofstream corpus(dir.file("tiny.conll"));
    corpus << "# lang = hi\na\trepetition\na\trepetition\n\n";
  }
  {
    std::ofstream fixture(dir.file("fixture.json"));
    fixture << R"({"sentences": 1, "words": 2, "labels": {"repetition": 2}})";
  }
  REQUIRE(run_cli({"verify-stats", "--in", dir.file("tiny.conll"), "--fixture",
                   dir.file("fixture.json"), "--report", dir.file("verify.json")}) == 0);
  const json report = json::parse(slurp(dir.file("verify.json")));
  CHECK(report["pass"] == true);
  CHECK(report["rows"].size() == 3);
}

TEST_CASE("config file fills unset flags and flags win over the file") {
  TempDir dir;
  {
    std::ofstream config(dir.file("redrep.conf"));
    config << "# experiment defaults\n";
    config << "synth.seed = 33\n";
    config << "synth.n = 25\n";
  }
  REQUIRE(run_cli({"--config", dir.file("redrep.conf"), "synth", "--out",
                   dir.file("from_file.conll")}) == 0);
  REQUIRE(run_cli({"synth", "--seed", "33", "--n", "25", "--out",
                   dir.file("explicit.conll")}) == 0);
  CHECK(slurp(dir.file("from_file.conll")) == slurp(dir.file("explicit.conll")));

  // flag overrides the file value
  REQUIRE(run_cli({"--config", dir.file("redrep.conf"), "synth", "--n", "10",
                   "--out", dir.file("override.conll")}) == 0);
  REQUIRE(run_cli({"synth", "--seed", "33", "--n", "10", "--out",
                   dir.file("expected.conll")}) == 0);
  CHECK(slurp(dir.file("override.conll")) == slurp(dir.file("expected.conll")));

  // REDREP_CONFIG names the default config path
  ::setenv("REDREP_CONFIG", dir.file("redrep.conf").c_str(), 1);
  REQUIRE(run_cli({"synth", "--out", dir.file("from_env.conll")}) == 0);
  ::unsetenv("REDREP_CONFIG");
  CHECK(slurp(dir.file("from_env.conll")) == slurp(dir.file("from_file.conll")));
}

TEST_CASE("exit codes distinguish usage, data, and success") {
  TempDir dir;
  CHECK(run_cli({"no-such-command"}) == 1);
  CHECK(run_cli({"synth"}) == 1);                      // missing --out
  CHECK(run_cli({"synth", "--bogus-flag", "1"}) == 1);
  CHECK(run_cli({"train", "--train", dir.file("absent.conll"), "--out",
                 dir.file("m.rr")}) == 2);

  {
    std::ofstream corpus(dir.file("bad.conll"));
    corpus << "a\tnot-a-label\n\n";
  }
  CHECK(run_cli({"train", "--train", dir.file("bad.conll"), "--out",
                 dir.file("m.rr")}) == 2);

  // unlabeled corpus cannot be split
  {
    std::ofstream corpus(dir.file("unlabeled.conll"));
    corpus << "a\nb\n\n";
  }
  CHECK(run_cli({"split", "--in", dir.file("unlabeled.conll"), "--train-out",
                 dir.file("t.conll"), "--val-out", dir.file("v.conll"),
                 "--test-out", dir.file("e.conll")}) == 2);
}

TEST_CASE("inspect-spans prints one line per span") {
  TempDir dir;
  {
    std::ofstream corpus(dir.file("spans.conll"));
    corpus << "# id = chain\nneela\nnahi\nneela\nneela\n\n";
  }
  // capture stdout through a file-level redirect is heavier than needed;
  // just check the command succeeds and the span logic is covered elsewhere.
  CHECK(run_cli({"inspect-spans", "--in", dir.file("spans.conll")}) == 0);
}

}  // TEST_SUITE
