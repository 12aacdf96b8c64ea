#include "wsn/ada.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "wsn/errors.hpp"

namespace wsn::ada {

double step_size_bound(const SymMatrix& ruu) { return 2.0 / max_eigenvalue(ruu); }

double mmse(const CovariancePair& cov, std::span<const double> w) {
  if (w.size() != cov.size()) throw DimensionMismatch("weight length does not match covariance");
  const double cross = dot(cov.rdu, w);
  const RealVector rw = cov.ruu.multiply(w);
  return cov.sigma_d_sq - 2.0 * cross + dot(w, rw);
}

double accuracy(const CovariancePair& cov, std::span<const double> w) {
  return 1.0 - mmse(cov, w) / cov.sigma_d_sq;
}

double optimal_accuracy(const CovariancePair& cov) {
  return accuracy(cov, solve_spd(cov.ruu, cov.rdu));
}

DescentTrace steepest_descent(const CovariancePair& cov, const RealVector& w0, double mu,
                              double tol, int max_iter) {
  const std::size_t m = cov.size();
  if (w0.size() != m) throw DimensionMismatch("initial weight length does not match covariance");
  const double bound = step_size_bound(cov.ruu);
  // The bound itself is allowed; the slack absorbs rounding in 2/λ̂.
  if (!(mu > 0.0) || mu > bound * (1.0 + 1e-12)) {
    throw StepSizeOutOfRange("step size " + std::to_string(mu) + " outside (0, " +
                             std::to_string(bound) + "]");
  }

  DescentTrace trace;
  trace.mu = mu;
  const double target = tol * norm(cov.rdu);

  auto residual_of = [&](const RealVector& w) {
    RealVector r = cov.ruu.multiply(w);
    for (std::size_t i = 0; i < m; ++i) r[i] = cov.rdu[i] - r[i];
    return r;
  };
  auto record = [&](RealVector w) {
    const double j = mmse(cov, w);
    trace.mmse.push_back(j);
    trace.accuracy.push_back(1.0 - j / cov.sigma_d_sq);
    trace.weights.push_back(std::move(w));
  };

  RealVector w = w0;
  RealVector r = residual_of(w);
  record(w);
  if (norm(r) <= target) {
    trace.converged = true;
    return trace;
  }
  for (int k = 1; k <= max_iter; ++k) {
    for (std::size_t i = 0; i < m; ++i) w[i] += mu * r[i];
    r = residual_of(w);
    record(w);
    trace.iterations = k;
    if (norm(r) <= target) {
      trace.converged = true;
      break;
    }
  }
  return trace;
}

Selection select_nodes(const NodeLayout& layout, const FieldParams& params, SelectionGoal goal) {
  const CovariancePair cov = build_spatial_covariance(layout, params);
  const std::size_t m = layout.size();

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double da = distance(layout.positions[a], layout.sink);
    const double db = distance(layout.positions[b], layout.sink);
    if (da != db) return da < db;
    return layout.node_ids[a] < layout.node_ids[b];
  });

  Selection out;
  for (std::size_t idx : order) out.ranking.push_back(layout.node_ids[idx]);
  out.curve.reserve(m);
  for (std::size_t k = 1; k <= m; ++k) {
    const std::span<const std::size_t> prefix(order.data(), k);
    out.curve.push_back(optimal_accuracy(cov.subset(prefix)));
  }

  std::size_t keep = 0;
  if (const auto* count = std::get_if<NodeCount>(&goal)) {
    if (count->value < 1 || count->value > m)
      throw InvalidArgument("node count must lie in [1, " + std::to_string(m) + "]");
    keep = count->value;
  } else {
    const double target = std::get<AccuracyTarget>(goal).value;
    if (!(target > 0.0 && target <= 1.0)) throw InvalidArgument("accuracy target must lie in (0, 1]");
    const auto it = std::find_if(out.curve.begin(), out.curve.end(),
                                 [target](double a) { return a >= target; });
    if (it == out.curve.end()) {
      throw TargetUnreachable("accuracy target " + std::to_string(target) +
                              " exceeds the all-node accuracy " + std::to_string(out.curve.back()));
    }
    keep = static_cast<std::size_t>(it - out.curve.begin()) + 1;
  }
  out.selected.assign(out.ranking.begin(), out.ranking.begin() + static_cast<std::ptrdiff_t>(keep));
  return out;
}

}  // namespace wsn::ada
