#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "wsn/numerics.hpp"

namespace wsn {

struct Point {
  double x = 0.0;  // meters
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

double distance(Point a, Point b) noexcept;

/// Node placement inside a square sensing region of the given side.
struct NodeLayout {
  double side = 4.0;
  Point sink{2.0, 2.0};
  std::vector<Point> positions;
  std::vector<int> node_ids;

  std::size_t size() const noexcept { return node_ids.size(); }
  /// Index of `id` in layout order; throws UnknownNode.
  std::size_t index_of(int id) const;
  bool contains(int id) const noexcept;
  /// Throws InvalidArgument when positions leave [0, side]² or ids repeat.
  void validate() const;
  /// Layout restricted to the given ids, in the given order.
  NodeLayout subset(const std::vector<int>& ids) const;

  bool operator==(const NodeLayout&) const = default;
};

struct FieldParams {
  double theta = 2.0;                // range parameter (m)
  std::vector<double> sigma_u{1.0};  // one entry per node, or one shared entry
  double sigma_d = 1.0;
  double noise_var = 0.01;   // variance of the measurement noise v_i
  double temporal_phi = 0.9; // AR(1) coefficient along each node's samples

  double sigma_u_at(std::size_t node_index) const;
  void validate(std::size_t node_count) const;
  /// Same parameters with sigma_u reduced to the given node indices.
  FieldParams subset(std::span<const std::size_t> node_indices) const;

  bool operator==(const FieldParams&) const = default;
};

/// Second-order statistics {R_uu, R_du, σ_d²} of the spatial estimation problem.
struct CovariancePair {
  SymMatrix ruu;
  RealVector rdu;
  double sigma_d_sq = 1.0;

  std::size_t size() const noexcept { return rdu.size(); }
  /// Restriction to a node subset (principal submatrix of R_uu, matching R_du entries).
  CovariancePair subset(std::span<const std::size_t> idx) const;
};

/// One node's window of N consecutive samples and its scalar desired value.
struct ObservationBlock {
  int node_id = 0;
  std::size_t block_index = 0;
  RealVector samples;
  double desired = 0.0;

  bool operator==(const ObservationBlock&) const = default;
};

using NodeStream = std::vector<ObservationBlock>;
/// Streams in layout order; every node has the same number of blocks.
using ObservationStream = std::vector<NodeStream>;

/// Power-exponential correlation e^{-distance/theta}.
double correlation_coefficient(double distance, double theta);

CovariancePair build_spatial_covariance(const NodeLayout& layout, const FieldParams& params);

struct StreamOptions {
  bool jitter = false;  // add 1e-10·σ_u² to the R_uu diagonal before factoring
};

/// Spatially correlated (via the Cholesky factor of R_uu), AR(1)-in-time samples;
/// desired values follow d = u·w₀ + v with w₀ the all-equal unit weight.
ObservationStream generate_stream(const NodeLayout& layout, const FieldParams& params,
                                  std::size_t n, std::size_t num_blocks, std::uint64_t seed,
                                  StreamOptions options = {});

/// Replaces the listed nodes' samples with an independent AR(1) stream whose
/// standard deviation is `scale` times nominal. The measurement noise of each
/// block is kept; other nodes are untouched.
ObservationStream inject_malicious(const ObservationStream& stream, const std::set<int>& node_ids,
                                   double scale, const FieldParams& params, std::uint64_t seed);

/// Adds white Gaussian noise at `snr_db` relative to the block's mean sample
/// power (samples) and the desired value's power. nullopt means channel off.
ObservationBlock awgn_channel(const ObservationBlock& block, std::optional<double> snr_db,
                              std::uint64_t seed);

}  // namespace wsn
