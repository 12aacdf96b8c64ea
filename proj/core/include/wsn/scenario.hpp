#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wsn/fieldgen.hpp"
#include "wsn/protocol.hpp"

namespace wsn {

struct MaliciousSpec {
  std::vector<int> node_ids;
  double scale = 6.0;  // standard-deviation multiplier

  bool operator==(const MaliciousSpec&) const = default;
};

/// Optional ADA node selection applied before an STDP run.
struct SelectionSpec {
  bool select_first = false;
  std::size_t count = 6;
  std::optional<double> target;  // takes precedence over `count` when set

  bool operator==(const SelectionSpec&) const = default;
};

/// Full experiment configuration.
struct Scenario {
  NodeLayout layout;
  FieldParams field;
  std::size_t n_block = 5;
  std::size_t num_blocks = 200;
  stdp::Thresholds thresholds;
  std::optional<double> mu;   // STDP step; nullopt = automatic
  double ada_mu_scale = 1.0;  // ADA step is ada_mu_scale / λ_max
  std::optional<MaliciousSpec> malicious;
  std::optional<double> snr_db;  // nullopt = channel off
  std::uint64_t seed = 1;
  SelectionSpec selection;
  double kappa = 5.0;
  bool jitter = false;
  std::optional<std::string> ingest_csv;

  /// Throws InvalidArgument / UnknownNode / InvalidTheta on the first problem.
  void validate() const;

  bool operator==(const Scenario&) const = default;
};

/// Ten nodes on a jittered 4 m × 4 m grid, sink at the centre. The six nodes
/// nearest the sink are ids 2, 4, 5, 7, 9 and 10.
NodeLayout default_layout();

Scenario default_scenario();

/// Stable JSON rendering of every scenario field (defaults included).
std::string to_json(const Scenario& scenario);

/// FNV-1a 64 of the JSON rendering, as 16 hex digits.
std::string config_hash(const Scenario& scenario);

}  // namespace wsn
