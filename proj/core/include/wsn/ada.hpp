#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "wsn/fieldgen.hpp"
#include "wsn/numerics.hpp"

namespace wsn::ada {

/// 2/λ_max(R_uu): the largest step for which steepest descent converges.
double step_size_bound(const SymMatrix& ruu);

struct DescentTrace {
  std::vector<RealVector> weights;  // w_0 … w_K
  std::vector<double> mmse;         // J(w_k)
  std::vector<double> accuracy;     // 1 - J(w_k)/σ_d²
  double mu = 0.0;
  bool converged = false;
  int iterations = 0;

  const RealVector& final_weight() const { return weights.back(); }
};

inline constexpr double kDescentTolerance = 1e-8;
inline constexpr int kDescentMaxIter = 50'000;

/// Iterates w_k = w_{k-1} + μ(R_du − R_uu w_{k-1}) until the normal-equation
/// residual drops to tol·‖R_du‖ or max_iter is hit (converged = false, not an
/// error). Throws StepSizeOutOfRange unless 0 < μ ≤ 2/λ_max.
DescentTrace steepest_descent(const CovariancePair& cov, const RealVector& w0, double mu,
                              double tol = kDescentTolerance, int max_iter = kDescentMaxIter);

/// J(w) = σ_d² − R_duᵀw − wᵀR_du + wᵀR_uu w.
double mmse(const CovariancePair& cov, std::span<const double> w);

double accuracy(const CovariancePair& cov, std::span<const double> w);

/// Accuracy at the normal-equation optimum w* = R_uu⁻¹ R_du.
double optimal_accuracy(const CovariancePair& cov);

struct AccuracyTarget {
  double value;
};
struct NodeCount {
  std::size_t value;
};
using SelectionGoal = std::variant<AccuracyTarget, NodeCount>;

struct Selection {
  std::vector<int> ranking;   // all node ids by ascending sink distance
  std::vector<double> curve;  // curve[k-1]: optimal accuracy of the first k ranked nodes
  std::vector<int> selected;  // chosen prefix of `ranking`
};

/// Ranks nodes by sink distance (ties by id) and keeps the shortest prefix whose
/// optimal accuracy reaches the target, or exactly the requested count.
Selection select_nodes(const NodeLayout& layout, const FieldParams& params, SelectionGoal goal);

}  // namespace wsn::ada
