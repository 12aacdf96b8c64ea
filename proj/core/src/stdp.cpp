#include "wsn/stdp.hpp"

#include <cmath>
#include <string>

#include "wsn/errors.hpp"

namespace wsn::stdp {
namespace {

void check_blocks(std::span<const double> w, std::span<const ObservationBlock> blocks) {
  for (const auto& b : blocks) {
    if (b.samples.size() != w.size()) {
      throw DimensionMismatch("block of node " + std::to_string(b.node_id) + " has " +
                              std::to_string(b.samples.size()) + " samples, weight has " +
                              std::to_string(w.size()));
    }
  }
}

}  // namespace

WeightVector initial_weight(std::size_t n) {
  if (n == 0) throw InvalidArgument("weight length must be >= 1");
  return WeightVector(n, 1.0 / std::sqrt(static_cast<double>(n)));
}

WeightVector global_lms_update(std::span<const double> w_prev,
                               std::span<const ObservationBlock> blocks, double mu) {
  if (!(mu > 0.0)) throw InvalidArgument("step size must be positive");
  check_blocks(w_prev, blocks);
  const std::size_t n = w_prev.size();
  RealVector gradient(n, 0.0);
  for (const auto& b : blocks) {
    const double e = b.desired - dot(b.samples, w_prev);
    for (std::size_t k = 0; k < n; ++k) gradient[k] += b.samples[k] * e;
  }
  WeightVector w(w_prev.begin(), w_prev.end());
  for (std::size_t k = 0; k < n; ++k) w[k] += mu * gradient[k];
  return w;
}

WeightVector global_ia_update(std::span<const double> w_prev,
                              std::span<const ObservationBlock> blocks, double mu) {
  if (!(mu > 0.0)) throw InvalidArgument("step size must be positive");
  check_blocks(w_prev, blocks);
  const std::size_t n = w_prev.size();
  RealVector sum(n, 0.0);
  for (const auto& b : blocks) {
    // R_DU,i - R_UU,i w with R_UU,i = u_iᵀu_i (rank one) and R_DU,i = u_iᵀd_i.
    const double uw = dot(b.samples, w_prev);
    for (std::size_t k = 0; k < n; ++k) sum[k] += b.samples[k] * b.desired - b.samples[k] * uw;
  }
  WeightVector w(w_prev.begin(), w_prev.end());
  for (std::size_t k = 0; k < n; ++k) w[k] += mu * sum[k];
  return w;
}

RealVector sink_predict(std::span<const ObservationBlock> blocks, std::span<const double> w) {
  check_blocks(w, blocks);
  RealVector y;
  y.reserve(blocks.size());
  for (const auto& b : blocks) y.push_back(dot(b.samples, w));
  return y;
}

RealVector sink_errors(std::span<const double> desired, std::span<const double> predicted) {
  if (desired.size() != predicted.size()) throw DimensionMismatch("error vectors differ in length");
  RealVector e(desired.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = desired[i] - predicted[i];
  return e;
}

double client_desired(std::span<const double> u, std::span<const double> w_glob, double noise) {
  return dot(u, w_glob) + noise;
}

ClientStep client_update(std::span<const double> w_prev, std::span<const double> u, double d_new,
                         double mu) {
  if (u.size() != w_prev.size()) throw DimensionMismatch("client block and weight differ in length");
  const double e_prev = d_new - dot(u, w_prev);
  ClientStep step{WeightVector(w_prev.begin(), w_prev.end()), 0.0, 0.0};
  for (std::size_t k = 0; k < u.size(); ++k) step.weight[k] += mu * u[k] * e_prev;
  step.prediction = dot(u, step.weight);
  step.error = d_new - step.prediction;
  return step;
}

double block_covariance_max_eigenvalue(std::span<const ObservationBlock> blocks) {
  if (blocks.empty()) throw InvalidArgument("need at least one block");
  const std::size_t n = blocks.front().samples.size();
  Matrix r(n);
  for (const auto& b : blocks) {
    if (b.samples.size() != n) throw DimensionMismatch("blocks differ in length");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r(i, j) += b.samples[i] * b.samples[j];
  }
  const double inv = 1.0 / static_cast<double>(blocks.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r(i, j) *= inv;
  return max_eigenvalue(SymMatrix(std::move(r)));
}

}  // namespace wsn::stdp
