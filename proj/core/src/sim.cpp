#include "wsn/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>

#include "wsn/errors.hpp"
#include "wsn/ingest.hpp"
#include "wsn/random.hpp"

namespace wsn::sim {
namespace {

using stdp::MessageKind;

std::int64_t as_int(std::size_t v) { return static_cast<std::int64_t>(v); }

void stamp(RunReport& report, const Scenario& scenario) {
  report.metadata["config_hash"] = config_hash(scenario);
  report.metadata["seed"] = std::to_string(scenario.seed);
  report.metadata["scenario"] = to_json(scenario);
}

std::string join_ids(std::span<const int> ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(ids[i]);
  }
  return s;
}

std::string join_kinds(const std::vector<MessageKind>& kinds) {
  if (kinds.empty()) return "NONE";
  std::string s;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    if (i) s += '+';
    s += stdp::to_string(kinds[i]);
  }
  return s;
}

Cell optional_cell(const std::optional<double>& v) {
  return v ? Cell{*v} : Cell{std::monostate{}};
}

Table transmission_table(const StdpRun& run, double beta) {
  Table t{"stdp_transmission", {"beta", "node_id", "pct"}, {}};
  const auto pct = stdp::transmission_percentage(run.record);
  for (std::size_t i = 0; i < pct.size(); ++i)
    t.rows.push_back({beta, std::int64_t{run.node_ids[i]}, pct[i]});
  return t;
}

Table trace_table(const StdpRun& run) {
  Table t{"stdp_trace", {"round", "node_id", "phase", "kind", "error_glob", "error_new", "transmitted"}, {}};
  t.rows.reserve(run.trace.size());
  for (const auto& r : run.trace) {
    t.rows.push_back({as_int(r.round), std::int64_t{r.node_id}, std::string(stdp::to_string(r.phase)),
                      join_kinds(r.kinds), optional_cell(r.error_glob), optional_cell(r.error_new),
                      std::int64_t{r.transmitted ? 1 : 0}});
  }
  return t;
}

ObservationStream observation_stream(const Scenario& s) {
  if (s.ingest_csv)
    return load_stream_csv(*s.ingest_csv, s.layout, s.n_block, s.field.noise_var, s.seed);
  return generate_stream(s.layout, s.field, s.n_block, s.num_blocks, s.seed, {s.jitter});
}

}  // namespace

std::vector<int> participants(const Scenario& scenario) {
  std::vector<int> ids;
  if (scenario.selection.select_first) {
    const ada::SelectionGoal goal =
        scenario.selection.target ? ada::SelectionGoal{ada::AccuracyTarget{*scenario.selection.target}}
                                  : ada::SelectionGoal{ada::NodeCount{scenario.selection.count}};
    ids = ada::select_nodes(scenario.layout, scenario.field, goal).selected;
  } else {
    ids = scenario.layout.node_ids;
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

StdpRun simulate_stdp(const Scenario& scenario) {
  scenario.validate();
  StdpRun run;
  run.node_ids = participants(scenario);

  // The field is synthesised for the whole layout; participants read their own streams.
  ObservationStream stream = observation_stream(scenario);
  if (scenario.malicious) {
    const std::set<int> ids(scenario.malicious->node_ids.begin(), scenario.malicious->node_ids.end());
    stream = inject_malicious(stream, ids, scenario.malicious->scale, scenario.field, scenario.seed);
  }
  std::vector<const NodeStream*> chosen;
  for (int id : run.node_ids) chosen.push_back(&stream[scenario.layout.index_of(id)]);
  const std::size_t rounds = std::min(scenario.num_blocks, chosen.front()->size());

  stdp::Protocol protocol(run.node_ids, stdp::ProtocolConfig{scenario.n_block, scenario.thresholds,
                                                             scenario.mu, scenario.field.noise_var,
                                                             scenario.snr_db, scenario.seed});
  std::vector<ObservationBlock> blocks(chosen.size());
  run.trace.reserve(rounds * chosen.size());
  for (std::size_t r = 0; r < rounds; ++r) {
    for (std::size_t i = 0; i < chosen.size(); ++i) blocks[i] = (*chosen[i])[r];
    auto result = protocol.step_round(blocks);
    for (auto& row : result.rows) run.trace.push_back(std::move(row));
  }
  run.record = protocol.record();
  run.mu = protocol.mu().value_or(0.0);
  for (std::size_t i = 0; i < run.node_ids.size(); ++i)
    run.client_weights.push_back(protocol.client_history(i));
  return run;
}

std::vector<malicious::WeightHistory> weight_histories(const StdpRun& run) {
  std::vector<malicious::WeightHistory> out;
  for (std::size_t i = 0; i < run.node_ids.size(); ++i) {
    malicious::WeightHistory h{run.node_ids[i], {}};
    for (const auto& snap : run.client_weights[i]) h.snapshots.push_back(snap.weight);
    out.push_back(std::move(h));
  }
  return out;
}

RunReport run_ada(const Scenario& scenario) {
  scenario.validate();
  const CovariancePair cov = build_spatial_covariance(scenario.layout, scenario.field);
  const double mu = scenario.ada_mu_scale / max_eigenvalue(cov.ruu);
  const ada::DescentTrace trace = ada::steepest_descent(cov, RealVector(cov.size(), 0.0), mu);
  const ada::Selection curve =
      ada::select_nodes(scenario.layout, scenario.field, ada::NodeCount{scenario.layout.size()});

  RunReport report;
  report.kind = ReportKind::kAda;
  Table iters{"ada_iterations", {"iter", "accuracy"}, {}};
  for (std::size_t k = 0; k < trace.accuracy.size(); ++k)
    iters.rows.push_back({as_int(k), trace.accuracy[k]});
  Table nodes{"ada_nodes", {"k", "accuracy", "node_ids"}, {}};
  for (std::size_t k = 1; k <= curve.curve.size(); ++k)
    nodes.rows.push_back({as_int(k), curve.curve[k - 1],
                          join_ids(std::span<const int>(curve.ranking.data(), k))});
  report.tables = {std::move(iters), std::move(nodes)};

  stamp(report, scenario);
  report.metadata["mu"] = format_real(mu);
  report.metadata["converged"] = trace.converged ? "true" : "false";
  report.metadata["iterations"] = std::to_string(trace.iterations);
  if (scenario.selection.target) {
    const auto chosen = ada::select_nodes(scenario.layout, scenario.field,
                                          ada::AccuracyTarget{*scenario.selection.target});
    report.metadata["selected_node_ids"] = join_ids(chosen.selected);
  } else {
    const auto n = std::min(scenario.selection.count, curve.ranking.size());
    report.metadata["selected_node_ids"] = join_ids(std::span<const int>(curve.ranking.data(), n));
  }
  return report;
}

RunReport run_stdp(const Scenario& scenario) {
  const StdpRun run = simulate_stdp(scenario);
  RunReport report;
  report.kind = ReportKind::kStdp;
  report.tables = {transmission_table(run, scenario.thresholds.beta), trace_table(run)};
  stamp(report, scenario);
  report.metadata["mu"] = format_real(run.mu);
  report.metadata["node_ids"] = join_ids(run.node_ids);
  return report;
}

RunReport run_detect(const Scenario& scenario) {
  if (!scenario.malicious) throw InvalidArgument("detection needs a malicious node set");
  const StdpRun run = simulate_stdp(scenario);
  const auto histories = weight_histories(run);
  const malicious::DetectionReport detection = malicious::classify(histories, scenario.kappa);

  RunReport report;
  report.kind = ReportKind::kDetect;
  Table weights{"weights", {"round", "node_id", "tap_index", "value"}, {}};
  for (std::size_t i = 0; i < run.node_ids.size(); ++i)
    for (const auto& snap : run.client_weights[i])
      for (std::size_t k = 0; k < snap.weight.size(); ++k)
        weights.rows.push_back({as_int(snap.round), std::int64_t{run.node_ids[i]}, as_int(k), snap.weight[k]});
  Table det{"detection", {"node_id", "variance", "threshold", "label"}, {}};
  for (const auto& v : detection.nodes)
    det.rows.push_back({std::int64_t{v.node_id}, v.variance, detection.threshold_used,
                        std::string(malicious::to_string(v.label))});
  report.tables = {std::move(weights), std::move(det),
                   transmission_table(run, scenario.thresholds.beta), trace_table(run)};
  stamp(report, scenario);
  report.metadata["malicious_node_ids"] = join_ids(detection.malicious_ids());
  return report;
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kBeta: return "beta";
    case SweepAxis::kNBlock: return "n_block";
    case SweepAxis::kNodeCount: return "node_count";
  }
  return "unknown";
}

Scenario sweep_point(const Scenario& base, const SweepSpec& spec, std::size_t index) {
  const double value = spec.values.at(index);
  Scenario s = base;
  auto as_count = [&](const char* what) {
    if (!(value >= 1.0) || value != std::floor(value))
      throw InvalidArgument(std::string(what) + " sweep values must be positive integers");
    return static_cast<std::size_t>(value);
  };
  switch (spec.axis) {
    case SweepAxis::kBeta:
      if (!(value >= 0.0)) throw InvalidArgument("beta sweep values must be non-negative");
      s.thresholds.beta = value;
      break;
    case SweepAxis::kNBlock:
      s.n_block = as_count("n_block");
      break;
    case SweepAxis::kNodeCount:
      s.selection.select_first = true;
      s.selection.count = as_count("node_count");
      s.selection.target.reset();
      break;
  }
  s.seed = derive_seed(base.seed, static_cast<std::uint64_t>(StreamRole::kSweepPoint), index);
  return s;
}

RunReport sweep(const Scenario& base, const SweepSpec& spec, unsigned jobs) {
  if (spec.values.empty()) throw InvalidArgument("sweep needs at least one axis value");
  std::vector<Scenario> points;
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    points.push_back(sweep_point(base, spec, i));
    points.back().validate();
  }

  std::vector<std::optional<RunReport>> results(points.size());
  std::vector<std::exception_ptr> errors(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        results[i] = run_stdp(points[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(jobs, points.size()));
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  RunReport report;
  report.kind = ReportKind::kSweep;
  Table merged{"sweep", {"axis", "value", "node_id", "pct"}, {}};
  Table by_beta{"stdp_transmission", {"beta", "node_id", "pct"}, {}};
  for (std::size_t i = 0; i < results.size(); ++i) {
    RunReport& sub = *results[i];
    sub.metadata["axis"] = std::string(to_string(spec.axis));
    sub.metadata["axis_value"] = format_real(spec.values[i]);
    for (const auto& row : sub.find("stdp_transmission")->rows) {
      merged.rows.push_back({std::string(to_string(spec.axis)), spec.values[i], row[1], row[2]});
      by_beta.rows.push_back(row);
    }
    report.sub_reports.push_back(std::move(sub));
  }
  report.tables.push_back(std::move(merged));
  if (spec.axis == SweepAxis::kBeta) report.tables.push_back(std::move(by_beta));
  stamp(report, base);
  report.metadata["axis"] = std::string(to_string(spec.axis));
  return report;
}

}  // namespace wsn::sim
