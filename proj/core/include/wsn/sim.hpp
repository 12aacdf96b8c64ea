#pragma once

#include <cstddef>
#include <vector>

#include "wsn/ada.hpp"
#include "wsn/malicious.hpp"
#include "wsn/protocol.hpp"
#include "wsn/report.hpp"
#include "wsn/scenario.hpp"

namespace wsn::sim {

/// Raw outcome of an STDP simulation, before it is rendered into tables.
struct StdpRun {
  std::vector<int> node_ids;  // participating nodes, ascending id
  std::vector<stdp::TraceRow> trace;
  stdp::TransmissionRecord record;
  std::vector<std::vector<stdp::WeightSnapshot>> client_weights;  // per participant
  double mu = 0.0;
};

/// Node ids the STDP stage runs on: the ADA selection when enabled, else all.
std::vector<int> participants(const Scenario& scenario);

StdpRun simulate_stdp(const Scenario& scenario);

/// Weight histories of a finished run, one per participant.
std::vector<malicious::WeightHistory> weight_histories(const StdpRun& run);

RunReport run_ada(const Scenario& scenario);
RunReport run_stdp(const Scenario& scenario);
RunReport run_detect(const Scenario& scenario);

enum class SweepAxis { kBeta, kNBlock, kNodeCount };

struct SweepSpec {
  SweepAxis axis = SweepAxis::kBeta;
  std::vector<double> values;

  bool operator==(const SweepSpec&) const = default;
};

std::string_view to_string(SweepAxis axis);

/// Scenario of the i-th sweep point: axis value applied, seed derived from the base seed.
Scenario sweep_point(const Scenario& base, const SweepSpec& spec, std::size_t index);

/// One STDP sub-run per axis value (run concurrently on up to `jobs` threads,
/// 0 = hardware concurrency), merged into sweep.csv.
RunReport sweep(const Scenario& base, const SweepSpec& spec, unsigned jobs = 0);

}  // namespace wsn::sim
