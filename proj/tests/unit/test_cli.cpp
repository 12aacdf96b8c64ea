#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "wsn_cli/app.hpp"
#include "wsn_cli/config.hpp"

using namespace wsn;
using namespace wsn::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("wsn_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path config_path(const char* name) { return fs::path(WSN_SOURCE_DIR) / "configs" / name; }

std::string pointer_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const SchemaError& e) {
    return e.pointer();
  }
  return "<accepted>";
}

int run(std::vector<std::string> args, std::string* err_out = nullptr) {
  args.insert(args.begin(), "wsnsim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream err;
  const int code = run_app(static_cast<int>(argv.size()), argv.data(), err);
  if (err_out) *err_out = err.str();
  return code;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("minimal config takes every default") {
    const RunConfig c = parse_config_text(R"({"experiment": "ada"})");
    CHECK(c.experiment == Experiment::kAda);
    CHECK(c.scenario == default_scenario());
    CHECK(c.output_dir == "out");
  }

  TEST_CASE("schema errors point at the offending key") {
    CHECK(pointer_of(R"({"experiment": "ada", "field": {"theta": -1}})") == "/field/theta");
    CHECK(pointer_of(R"({"experiment": "ada", "field": {"thetta": 1}})") == "/field/thetta");
    CHECK(pointer_of(R"({"experiment": "ada", "extra": 1})") == "/extra");
    CHECK(pointer_of(R"({"field": {}})") == "/experiment");
    CHECK(pointer_of(R"({"experiment": "plot"})") == "/experiment");
    CHECK(pointer_of(R"({"experiment": "ada", "n_block": 0})") == "/n_block");
    CHECK(pointer_of(R"({"experiment": "ada", "num_blocks": 1})") == "/num_blocks");
    CHECK(pointer_of(R"({"experiment": "ada", "mu": "fast"})") == "/mu");
    CHECK(pointer_of(R"({"experiment": "ada", "seed": -3})") == "/seed");
    CHECK(pointer_of(R"({"experiment": "ada", "field": {"sigma_u": [1, 1]}})") == "/field/sigma_u");
    CHECK(pointer_of(R"({"experiment": "detect"})") == "/malicious");
    CHECK(pointer_of(R"({"experiment": "detect", "malicious": {"node_ids": [5, 42]}})") == "/malicious/node_ids/1");
    CHECK(pointer_of(R"({"experiment": "detect", "malicious": {"node_ids": [5], "scale": 1}})") == "/malicious/scale");
    CHECK(pointer_of(R"({"experiment": "sweep"})") == "/sweep");
    CHECK(pointer_of(R"({"experiment": "sweep", "sweep": {"axis": "n_block", "values": [4, 0]}})") == "/sweep/values/1");
    CHECK(pointer_of(R"({"experiment": "ada", "layout": {"nodes": [{"id": 1, "x": 9, "y": 1}]}})") == "/layout/nodes/0");
    CHECK(pointer_of(R"({"experiment": "ada", "channel": {"snr": 3}})") == "/channel/snr");
    CHECK(pointer_of("{not json")== "");
  }

  TEST_CASE("effective config round-trips") {
    for (const char* name : {"ada.json", "stdp.json", "detect.json", "sweep_beta.json", "sweep_block.json", "pipeline.json"}) {
      const RunConfig c = parse_config(config_path(name));
      CHECK(parse_config_text(effective_config_json(c)) == c);
    }
    RunConfig c = parse_config_text(R"({"experiment": "stdp", "mu": 0.004, "channel": {"snr_db": 20},
      "field": {"sigma_u": [1,1,1,1,1,1,1,1,1,2]}, "selection": {"target": 0.6}})");
    CHECK(parse_config_text(effective_config_json(c)) == c);
  }

  TEST_CASE("validate writes nothing; bad configs exit 1") {
    const fs::path dir = fresh_dir("validate");
    CHECK(run({"validate", "--config", config_path("ada.json").string(), "--out", dir.string()}) == kExitOk);
    CHECK(fs::is_empty(dir));
    std::ofstream(dir / "bad.json") << R"({"experiment": "ada", "field": {"theta": -1}})";
    std::string err;
    CHECK(run({"validate", "--config", (dir / "bad.json").string()}, &err) == kExitInvalid);
    CHECK(err.find("/field/theta") != std::string::npos);
    CHECK(run({"run", "--config", (dir / "missing.json").string()}) == kExitInvalid);
    CHECK(run({"frobnicate"}) == kExitInvalid);
    CHECK(run({"run"}) == kExitInvalid);
    CHECK(run({"sweep", "--config", config_path("ada.json").string(), "--out", dir.string()}) == kExitInvalid);
  }

  TEST_CASE("run twice with the same seed gives identical files") {
    const fs::path a = fresh_dir("det_a"), b = fresh_dir("det_b");
    CHECK(run({"run", "--config", config_path("ada.json").string(), "--seed", "42", "--out", a.string()}) == kExitOk);
    CHECK(run({"run", "--config", config_path("ada.json").string(), "--seed", "42", "--out", b.string()}) == kExitOk);
    // effective_config.json differs only in output_dir.
    for (const char* f : {"ada_iterations.csv", "ada_nodes.csv", "metadata.json"})
      CHECK(slurp(a / f) == slurp(b / f));
    CHECK(parse_config(a / "effective_config.json").scenario.seed == 42);
  }

  TEST_CASE("detect run labels nodes 5 and 9") {
    const fs::path dir = fresh_dir("detect");
    CHECK(run({"run", "--config", config_path("detect.json").string(), "--out", dir.string()}) == kExitOk);
    const std::string csv = slurp(dir / "detection.csv");
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "node_id,variance,threshold,label");
    std::vector<std::string> malicious;
    while (std::getline(in, line))
      if (line.ends_with(",Malicious")) malicious.push_back(line.substr(0, line.find(',')));
    CHECK(malicious == std::vector<std::string>{"5", "9"});
  }

  TEST_CASE("sweep subcommand writes merged and per-point output") {
    const fs::path dir = fresh_dir("sweep");
    CHECK(run({"sweep", "--config", config_path("sweep_block.json").string(), "--out", dir.string(), "--jobs", "2"}) ==
          kExitOk);
    CHECK(fs::exists(dir / "sweep.csv"));
    CHECK(fs::exists(dir / "point_0" / "stdp_transmission.csv"));
    CHECK(fs::exists(dir / "point_1" / "stdp_trace.csv"));
  }

  TEST_CASE("runtime failure exits 2") {
    const fs::path dir = fresh_dir("runtime");
    std::ofstream(dir / "cfg.json") << R"({"experiment": "stdp", "ingest_csv": "/nonexistent/readings.csv"})";
    std::string err;
    CHECK(run({"run", "--config", (dir / "cfg.json").string(), "--out", (dir / "out").string()}, &err) == kExitRuntime);
    CHECK_FALSE(err.empty());
  }

  TEST_CASE("the executable keeps standard output clean") {
    const fs::path dir = fresh_dir("stdout");
    const std::string cmd = std::string(WSNSIM_EXE) + " run --config " + config_path("stdp.json").string() + " --out " +
                            (dir / "o").string() + " > " + (dir / "stdout.txt").string() + " 2> " +
                            (dir / "stderr.txt").string();
    CHECK(std::system(cmd.c_str()) == 0);
    CHECK(slurp(dir / "stdout.txt").empty());
    const std::string bad = std::string(WSNSIM_EXE) + " validate --config /nonexistent.json > " +
                            (dir / "stdout2.txt").string() + " 2> " + (dir / "stderr2.txt").string();
    CHECK(WEXITSTATUS(std::system(bad.c_str())) == 1);
    CHECK(slurp(dir / "stdout2.txt").empty());
    CHECK_FALSE(slurp(dir / "stderr2.txt").empty());
  }
}
