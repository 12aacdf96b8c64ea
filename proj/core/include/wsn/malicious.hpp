#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "wsn/stdp.hpp"

namespace wsn::malicious {

struct WeightHistory {
  int node_id = 0;
  std::vector<stdp::WeightVector> snapshots;
};

enum class Label { kNormal, kMalicious };

struct NodeVerdict {
  int node_id;
  double variance;
  Label label;
};

struct DetectionReport {
  std::vector<NodeVerdict> nodes;
  double threshold_used = 0.0;

  std::vector<int> malicious_ids() const;
};

inline constexpr double kDefaultKappa = 5.0;

/// Population variance (n denominator) of every scalar entry of every
/// snapshot, pooled. Throws InsufficientHistory below two snapshots.
double weight_variance(const WeightHistory& history);

/// Flags nodes whose variance exceeds kappa × median(variances).
DetectionReport classify(std::span<const int> node_ids, std::span<const double> variances,
                         double kappa = kDefaultKappa);

DetectionReport classify(std::span<const WeightHistory> histories, double kappa = kDefaultKappa);

std::string_view to_string(Label label);

}  // namespace wsn::malicious
