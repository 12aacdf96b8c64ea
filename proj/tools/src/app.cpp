#include "wsn_cli/app.hpp"

#include <cstdint>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wsn/report.hpp"
#include "wsn/sim.hpp"
#include "wsn_cli/config.hpp"

namespace wsn::cli {
namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  unsigned jobs = 0;
};

void add_flags(CLI::App* cmd, Flags& flags, bool with_jobs) {
  cmd->add_option("--config", flags.config, "Scenario config (JSON)")->required();
  cmd->add_option("--seed", flags.seed, "Overrides the config seed");
  cmd->add_option("--out", flags.out, "Overrides output_dir");
  if (with_jobs) cmd->add_option("--jobs", flags.jobs, "Sweep worker threads (0 = all processors)");
}

RunReport execute(const RunConfig& cfg, bool force_sweep, unsigned jobs) {
  if (force_sweep || cfg.experiment == Experiment::kSweep) return sim::sweep(cfg.scenario, *cfg.sweep, jobs);
  switch (cfg.experiment) {
    case Experiment::kAda: return sim::run_ada(cfg.scenario);
    case Experiment::kStdp: return sim::run_stdp(cfg.scenario);
    case Experiment::kDetect: return sim::run_detect(cfg.scenario);
    case Experiment::kSweep: break;
  }
  return sim::sweep(cfg.scenario, *cfg.sweep, jobs);
}

std::string metadata_json(const RunReport& report) {
  nlohmann::json j = report.metadata;
  j["kind"] = std::string(to_string(report.kind));
  return j.dump(2) + "\n";
}

void write_all(const RunReport& report, const std::filesystem::path& dir) {
  write_report(report, dir);
  write_file_atomic(dir / "metadata.json", metadata_json(report));
  for (std::size_t i = 0; i < report.sub_reports.size(); ++i)
    write_all(report.sub_reports[i], dir / ("point_" + std::to_string(i)));
}

}  // namespace

int run_app(int argc, const char* const* argv, std::ostream& err) {
  CLI::App app{"Adaptive WSN models: node selection, dual prediction and malicious-node tracing"};
  app.require_subcommand(1);
  Flags flags;
  auto* run = app.add_subcommand("run", "Run the experiment named in the config");
  auto* sweep = app.add_subcommand("sweep", "Run the config's sweep block");
  auto* validate = app.add_subcommand("validate", "Check a config without running it");
  add_flags(run, flags, true);
  add_flags(sweep, flags, true);
  add_flags(validate, flags, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, err, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  RunConfig cfg;
  try {
    cfg = parse_config(flags.config);
    if (flags.seed) cfg.scenario.seed = *flags.seed;
    if (flags.out) cfg.output_dir = *flags.out;
    if (sweep->parsed() && !cfg.sweep) throw SchemaError("/sweep", "required by the sweep subcommand");
  } catch (const std::exception& e) {
    err << "wsnsim: invalid config " << flags.config << ": " << e.what() << '\n';
    return kExitInvalid;
  }
  if (validate->parsed()) return kExitOk;

  try {
    const RunReport report = execute(cfg, sweep->parsed(), flags.jobs);
    std::filesystem::create_directories(cfg.output_dir);
    write_file_atomic(cfg.output_dir / "effective_config.json", effective_config_json(cfg));
    write_all(report, cfg.output_dir);
  } catch (const std::exception& e) {
    err << "wsnsim: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace wsn::cli
