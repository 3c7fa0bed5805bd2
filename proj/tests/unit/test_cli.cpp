#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "helpers.hpp"
#include "txguard/features/layout.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(TXGUARD_CLI) + " " + args + " 2>&1";
  RunResult r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t count_lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("generate writes the requested cohorts") {
    testing::TempDir dir("cli-gen");
    auto r = run("generate --seed 7 --abusive 5 --normal 10 --conversational 5 --out " + dir.path().string());
    REQUIRE_MESSAGE(r.exit_code == 0, r.output);
    CHECK(count_lines(slurp(dir.path() / "labels.csv")) == 21);
    CHECK(fs::exists(dir.path() / "transactions.jsonl"));
    auto prov = nlohmann::json::parse(slurp(dir.path() / "provenance.json"));
    CHECK(prov["seed"] == 7);
    CHECK(prov["command"] == "generate");

    testing::TempDir again("cli-gen2");
    REQUIRE(run("generate --seed 7 --abusive 5 --normal 10 --conversational 5 --out " + again.path().string()).exit_code == 0);
    CHECK(slurp(dir.path() / "transactions.jsonl") == slurp(again.path() / "transactions.jsonl"));
  }

  TEST_CASE("usage errors exit 1") {
    CHECK(run("generate --abusive 5").exit_code == 1);
    CHECK(run("train --labels x.csv --out y").exit_code == 1);
    CHECK(run("bogus").exit_code == 1);
    testing::TempDir dir("cli-empty");
    auto r = run("generate --abusive 0 --normal 0 --conversational 0 --out " + dir.path().string());
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("empty corpus") != std::string::npos);
  }

  TEST_CASE("pipeline: featurize, train, evaluate, score") {
    testing::TempDir dir("cli-pipe");
    const auto d = dir.path();
    const std::string data = (d / "data").string(), feats = (d / "features").string(), model = (d / "model").string();
    REQUIRE(run("generate --seed 3 --abusive 15 --normal 25 --conversational 10 --out " + data).exit_code == 0);
    auto f = run("featurize --transactions " + data + "/transactions.jsonl --month 2022-02 --out " + feats);
    REQUIRE_MESSAGE(f.exit_code == 0, f.output);
    CHECK(fs::exists(d / "features" / "features.csv"));
    CHECK(fs::exists(d / "features" / "features_manifest.json"));

    auto t = run("train --features " + feats + " --labels " + data + "/labels.csv --trees 50 --out " + model);
    REQUIRE_MESSAGE(t.exit_code == 0, t.output);
    CHECK(fs::exists(d / "model" / "model.bin"));
    CHECK(fs::exists(d / "model" / "model_manifest.json"));

    auto e = run("evaluate --features " + feats + " --labels " + data + "/labels.csv --trees 30 --k 3 --repeats 2 --top-k 10 --out " +
                 (d / "eval").string());
    REQUIRE_MESSAGE(e.exit_code == 0, e.output);
    auto metrics = nlohmann::json::parse(slurp(d / "eval" / "metrics.json"));
    CHECK(metrics["rows"].size() == 8);
    auto table = slurp(d / "eval" / "table.txt");
    CHECK(table.find("ETS+ST+TRX + reciprocity") != std::string::npos);
    CHECK(slurp(d / "eval" / "curve.csv").rfind("fpr,tpr,rank\n", 0) == 0);

    const std::string queue = (d / "queue.json").string();
    auto s = run("score --transactions " + data + "/transactions.jsonl --model " + model + " --month 2022-02 --top-n 5 --out " +
                 queue + " --store " + (d / "store").string());
    REQUIRE_MESSAGE(s.exit_code == 0, s.output);
    auto q = nlohmann::json::parse(slurp(queue));
    CHECK(q["cases"].size() == 5);
    CHECK(fs::exists(d / "store" / "batches"));
  }

  TEST_CASE("train refuses a manifest from another layout") {
    testing::TempDir dir("cli-mismatch");
    const auto d = dir.path();
    const std::string data = (d / "data").string(), feats = (d / "features").string();
    REQUIRE(run("generate --seed 3 --abusive 5 --normal 5 --conversational 0 --out " + data).exit_code == 0);
    REQUIRE(run("featurize --transactions " + data + "/transactions.jsonl --month 2022-02 --out " + feats).exit_code == 0);

    auto specs = txguard::features::FeatureLayout::relationship_layout().features();
    specs.pop_back();
    txguard::features::FeatureLayout other(specs);
    std::ofstream((d / "other.json").string()) << other.to_manifest().dump();
    auto r = run("train --features " + feats + " --manifest " + (d / "other.json").string() + " --labels " + data +
                 "/labels.csv --out " + (d / "model").string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("layout") != std::string::npos);
    CHECK(r.output.find(other.layout_id()) != std::string::npos);
  }
}
