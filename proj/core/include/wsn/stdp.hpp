#pragma once

#include <cstddef>
#include <span>

#include "wsn/fieldgen.hpp"
#include "wsn/numerics.hpp"

namespace wsn::stdp {

/// N temporal taps shared by the sink's global filter and each client filter.
using WeightVector = RealVector;

/// col{1, …, 1}/√n.
WeightVector initial_weight(std::size_t n);

/// One simultaneous LMS sweep over the received blocks:
/// w + μ Σ u_iᵀ(d_i − u_i w).
WeightVector global_lms_update(std::span<const double> w_prev,
                               std::span<const ObservationBlock> blocks, double mu);

/// The same sweep written with instantaneous covariance estimates:
/// w + μ Σ (u_iᵀd_i − (u_iᵀu_i) w).
WeightVector global_ia_update(std::span<const double> w_prev,
                              std::span<const ObservationBlock> blocks, double mu);

/// Sink-side predictions y_i = u_i·w for every received block.
RealVector sink_predict(std::span<const ObservationBlock> blocks, std::span<const double> w);

/// Componentwise d − y.
RealVector sink_errors(std::span<const double> desired, std::span<const double> predicted);

/// d_new = u·w_glob + noise, where `noise` is an already-drawn sample of v_i.
double client_desired(std::span<const double> u, std::span<const double> w_glob, double noise);

struct ClientStep {
  WeightVector weight;  // w_new
  double prediction;    // y_new = u·w_new
  double error;         // d_new − y_new
};

/// Single-datum LMS step at a client, followed by its post-update error.
ClientStep client_update(std::span<const double> w_prev, std::span<const double> u, double d_new,
                         double mu);

/// λ_max of the empirical block covariance (1/M) Σ u_iᵀu_i.
double block_covariance_max_eigenvalue(std::span<const ObservationBlock> blocks);

}  // namespace wsn::stdp
