#include "wsn/malicious.hpp"

#include <algorithm>
#include <string>

#include "wsn/errors.hpp"

namespace wsn::malicious {

std::vector<int> DetectionReport::malicious_ids() const {
  std::vector<int> ids;
  for (const auto& n : nodes)
    if (n.label == Label::kMalicious) ids.push_back(n.node_id);
  return ids;
}

std::string_view to_string(Label label) {
  return label == Label::kMalicious ? "Malicious" : "Normal";
}

double weight_variance(const WeightHistory& history) {
  if (history.snapshots.size() < 2)
    throw InsufficientHistory("node " + std::to_string(history.node_id) + " has " +
                              std::to_string(history.snapshots.size()) +
                              " weight snapshots; need at least 2");
  const std::size_t n = history.snapshots.front().size();
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& w : history.snapshots) {
    if (w.size() != n) throw DimensionMismatch("weight snapshots differ in length");
    for (double v : w) sum += v;
    count += w.size();
  }
  const double mean = sum / static_cast<double>(count);
  double ss = 0.0;
  for (const auto& w : history.snapshots)
    for (double v : w) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(count);
}

DetectionReport classify(std::span<const int> node_ids, std::span<const double> variances,
                         double kappa) {
  if (node_ids.size() != variances.size()) throw DimensionMismatch("ids and variances differ in length");
  if (variances.size() < 2) throw InvalidArgument("classification needs at least two nodes");
  if (!(kappa > 1.0)) throw InvalidArgument("kappa must exceed 1");

  std::vector<double> sorted(variances.begin(), variances.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  const double median = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);

  DetectionReport report;
  report.threshold_used = kappa * median;
  for (std::size_t i = 0; i < variances.size(); ++i) {
    const Label label = variances[i] > report.threshold_used ? Label::kMalicious : Label::kNormal;
    report.nodes.push_back({node_ids[i], variances[i], label});
  }
  return report;
}

DetectionReport classify(std::span<const WeightHistory> histories, double kappa) {
  std::vector<int> ids;
  std::vector<double> variances;
  for (const auto& h : histories) {
    ids.push_back(h.node_id);
    variances.push_back(weight_variance(h));
  }
  return classify(ids, variances, kappa);
}

}  // namespace wsn::malicious
