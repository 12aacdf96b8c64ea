#include "wsn/fieldgen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wsn/errors.hpp"
#include "wsn/random.hpp"
#include "wsn/stdp.hpp"

namespace wsn {

double distance(Point a, Point b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

std::size_t NodeLayout::index_of(int id) const {
  const auto it = std::find(node_ids.begin(), node_ids.end(), id);
  if (it == node_ids.end()) throw UnknownNode("node " + std::to_string(id) + " is not in the layout");
  return static_cast<std::size_t>(it - node_ids.begin());
}

bool NodeLayout::contains(int id) const noexcept {
  return std::find(node_ids.begin(), node_ids.end(), id) != node_ids.end();
}

void NodeLayout::validate() const {
  if (!(side > 0.0)) throw InvalidArgument("layout side must be positive");
  if (node_ids.empty()) throw InvalidArgument("layout needs at least one node");
  if (positions.size() != node_ids.size())
    throw DimensionMismatch("layout has " + std::to_string(positions.size()) + " positions for " +
                            std::to_string(node_ids.size()) + " node ids");
  auto inside = [&](Point p) { return p.x >= 0.0 && p.x <= side && p.y >= 0.0 && p.y <= side; };
  if (!inside(sink)) throw InvalidArgument("sink lies outside the sensing region");
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (!inside(positions[i]))
      throw InvalidArgument("node " + std::to_string(node_ids[i]) + " lies outside the sensing region");
    if (node_ids[i] <= 0) throw InvalidArgument("node ids must be positive");
    for (std::size_t j = 0; j < i; ++j)
      if (node_ids[j] == node_ids[i])
        throw InvalidArgument("duplicate node id " + std::to_string(node_ids[i]));
  }
}

NodeLayout NodeLayout::subset(const std::vector<int>& ids) const {
  NodeLayout out;
  out.side = side;
  out.sink = sink;
  for (int id : ids) {
    out.positions.push_back(positions[index_of(id)]);
    out.node_ids.push_back(id);
  }
  return out;
}

double FieldParams::sigma_u_at(std::size_t node_index) const {
  return sigma_u.size() == 1 ? sigma_u.front() : sigma_u.at(node_index);
}

void FieldParams::validate(std::size_t node_count) const {
  if (!(theta > 0.0)) throw InvalidTheta("theta must be positive");
  if (sigma_u.empty() || (sigma_u.size() != 1 && sigma_u.size() != node_count))
    throw DimensionMismatch("sigma_u needs 1 or " + std::to_string(node_count) + " entries");
  for (double s : sigma_u)
    if (!(s > 0.0)) throw InvalidArgument("sigma_u entries must be positive");
  if (!(sigma_d > 0.0)) throw InvalidArgument("sigma_d must be positive");
  if (!(noise_var >= 0.0)) throw InvalidArgument("noise_var must be non-negative");
  if (!(temporal_phi >= 0.0 && temporal_phi < 1.0))
    throw InvalidArgument("temporal_phi must lie in [0, 1)");
}

FieldParams FieldParams::subset(std::span<const std::size_t> node_indices) const {
  FieldParams out = *this;
  if (sigma_u.size() > 1) {
    out.sigma_u.clear();
    for (std::size_t i : node_indices) out.sigma_u.push_back(sigma_u.at(i));
  }
  return out;
}

CovariancePair CovariancePair::subset(std::span<const std::size_t> idx) const {
  CovariancePair out{ruu.principal(idx), {}, sigma_d_sq};
  out.rdu.reserve(idx.size());
  for (std::size_t i : idx) out.rdu.push_back(rdu.at(i));
  return out;
}

double correlation_coefficient(double dist, double theta) {
  if (!(theta > 0.0)) throw InvalidTheta("theta must be positive");
  if (!(dist >= 0.0)) throw InvalidArgument("distance must be non-negative");
  return std::exp(-dist / theta);
}

CovariancePair build_spatial_covariance(const NodeLayout& layout, const FieldParams& params) {
  layout.validate();
  params.validate(layout.size());
  const std::size_t m = layout.size();
  Matrix ruu(m);
  RealVector rdu(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double si = params.sigma_u_at(i);
    ruu(i, i) = si * si;
    for (std::size_t j = 0; j < i; ++j) {
      const double rho =
          correlation_coefficient(distance(layout.positions[i], layout.positions[j]), params.theta);
      const double c = si * params.sigma_u_at(j) * rho;
      ruu(i, j) = c;
      ruu(j, i) = c;
    }
    rdu[i] = params.sigma_d * si *
             correlation_coefficient(distance(layout.positions[i], layout.sink), params.theta);
  }
  return {SymMatrix(std::move(ruu)), std::move(rdu), params.sigma_d * params.sigma_d};
}

namespace {

// Fills one node's AR(1) series driven by a unit-variance innovation sequence.
void ar1_in_place(std::vector<double>& series, double phi) {
  const double gain = std::sqrt(1.0 - phi * phi);
  for (std::size_t t = 1; t < series.size(); ++t)
    series[t] = phi * series[t - 1] + gain * series[t];
}

NodeStream chunk_into_blocks(int node_id, const std::vector<double>& samples, std::size_t n,
                             std::size_t num_blocks, std::span<const double> w_gen, Rng& noise_rng,
                             double noise_sd) {
  std::normal_distribution<double> normal(0.0, 1.0);
  NodeStream out;
  out.reserve(num_blocks);
  for (std::size_t b = 0; b < num_blocks; ++b) {
    ObservationBlock block;
    block.node_id = node_id;
    block.block_index = b;
    block.samples.assign(samples.begin() + static_cast<std::ptrdiff_t>(b * n),
                         samples.begin() + static_cast<std::ptrdiff_t>((b + 1) * n));
    const double v = normal(noise_rng);
    block.desired = dot(block.samples, w_gen) + noise_sd * v;
    out.push_back(std::move(block));
  }
  return out;
}

}  // namespace

ObservationStream generate_stream(const NodeLayout& layout, const FieldParams& params,
                                  std::size_t n, std::size_t num_blocks, std::uint64_t seed,
                                  StreamOptions options) {
  if (n == 0) throw InvalidArgument("block length must be >= 1");
  if (num_blocks == 0) throw InvalidArgument("num_blocks must be >= 1");
  const CovariancePair cov = build_spatial_covariance(layout, params);
  const std::size_t m = layout.size();

  Matrix ruu = cov.ruu.matrix();
  if (options.jitter)
    for (std::size_t i = 0; i < m; ++i) ruu(i, i) += 1e-10 * ruu(i, i);
  const Matrix lower = cholesky_factor(SymMatrix(std::move(ruu)));

  const std::size_t total = n * num_blocks;
  // Standard normal innovations, one engine per node.
  std::vector<std::vector<double>> z(m, std::vector<double>(total));
  for (std::size_t i = 0; i < m; ++i) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(layout.node_ids[i]), StreamRole::kInnovation);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& v : z[i]) v = normal(rng);
  }
  // Spatial mixing per sample index: e(t) = L z(t).
  std::vector<std::vector<double>> series(m, std::vector<double>(total, 0.0));
  for (std::size_t t = 0; t < total; ++t)
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k <= i; ++k) s += lower(i, k) * z[k][t];
      series[i][t] = s;
    }
  for (auto& s : series) ar1_in_place(s, params.temporal_phi);

  const RealVector w_gen = stdp::initial_weight(n);
  const double noise_sd = std::sqrt(params.noise_var);
  ObservationStream out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    Rng noise_rng = make_rng(seed, static_cast<std::uint64_t>(layout.node_ids[i]),
                             StreamRole::kMeasurementNoise);
    out.push_back(chunk_into_blocks(layout.node_ids[i], series[i], n, num_blocks, w_gen,
                                    noise_rng, noise_sd));
  }
  return out;
}

ObservationStream inject_malicious(const ObservationStream& stream, const std::set<int>& node_ids,
                                   double scale, const FieldParams& params, std::uint64_t seed) {
  if (!(scale > 1.0)) throw InvalidArgument("malicious scale must exceed 1");
  for (int id : node_ids) {
    const bool known = std::any_of(stream.begin(), stream.end(), [id](const NodeStream& s) {
      return !s.empty() && s.front().node_id == id;
    });
    if (!known) throw UnknownNode("node " + std::to_string(id) + " is not in the stream");
  }

  ObservationStream out = stream;
  for (std::size_t i = 0; i < out.size(); ++i) {
    NodeStream& node = out[i];
    if (node.empty() || !node_ids.contains(node.front().node_id)) continue;
    const int id = node.front().node_id;
    const std::size_t n = node.front().samples.size();
    const double sd = scale * params.sigma_u_at(i);

    std::vector<double> series(n * node.size());
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(id), StreamRole::kMalicious);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& v : series) v = normal(rng);
    ar1_in_place(series, params.temporal_phi);

    const RealVector w_gen = stdp::initial_weight(n);
    for (std::size_t b = 0; b < node.size(); ++b) {
      ObservationBlock& block = node[b];
      const double noise = block.desired - dot(block.samples, w_gen);
      for (std::size_t k = 0; k < n; ++k) block.samples[k] = sd * series[b * n + k];
      block.desired = dot(block.samples, w_gen) + noise;
    }
  }
  return out;
}

ObservationBlock awgn_channel(const ObservationBlock& block, std::optional<double> snr_db,
                              std::uint64_t seed) {
  if (!snr_db) return block;
  ObservationBlock out = block;
  const double ratio = std::pow(10.0, *snr_db / 10.0);
  double power = 0.0;
  for (double s : block.samples) power += s * s;
  power /= static_cast<double>(std::max<std::size_t>(block.samples.size(), 1));

  Rng rng = make_rng(seed, static_cast<std::uint64_t>(block.node_id), StreamRole::kChannel);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sample_sd = std::sqrt(power / ratio);
  for (double& s : out.samples) s += sample_sd * normal(rng);
  out.desired += std::sqrt(block.desired * block.desired / ratio) * normal(rng);
  return out;
}

}  // namespace wsn
