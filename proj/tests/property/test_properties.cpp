#include <doctest.h>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "protocol_invariants.hpp"
#include "reference_weights.hpp"
#include "wsn/ada.hpp"
#include "wsn/errors.hpp"
#include "wsn/malicious.hpp"
#include "wsn/protocol.hpp"
#include "wsn/scenario.hpp"

using namespace wsn;

TEST_SUITE("properties") {
  TEST_CASE("random layouts: SPD covariance and optimal accuracy in [0, 1]") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> theta(0.2, 8.0), sig(0.3, 3.0);
    for (int trial = 0; trial < 10000; ++trial) {
      const NodeLayout l = oracle::random_layout(rng, 10);
      FieldParams p;
      p.theta = theta(rng);
      p.sigma_d = sig(rng);
      p.sigma_u.clear();
      for (std::size_t i = 0; i < l.size(); ++i) p.sigma_u.push_back(sig(rng));
      const auto cov = build_spatial_covariance(l, p);
      for (std::size_t i = 0; i < l.size(); ++i) {
        REQUIRE(cov.ruu(i, i) == p.sigma_u[i] * p.sigma_u[i]);
        for (std::size_t j = 0; j < i; ++j) REQUIRE(cov.ruu(i, j) == cov.ruu(j, i));
      }
      REQUIRE_NOTHROW(cholesky_factor(cov.ruu));
      const double acc = ada::optimal_accuracy(cov);
      REQUIRE(acc >= -1e-9);
      REQUIRE(acc <= 1.0 + 1e-9);
    }
  }

  TEST_CASE("correlation is strictly decreasing in distance") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(0.0, 20.0), theta(0.1, 10.0);
    for (int trial = 0; trial < 10000; ++trial) {
      double a = d(rng), b = d(rng);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      const double t = theta(rng);
      const double ra = correlation_coefficient(a, t), rb = correlation_coefficient(b, t);
      REQUIRE(ra > 0.0);
      REQUIRE(ra <= 1.0);
      if (rb > 0.0) REQUIRE(ra > rb);
    }
  }

  TEST_CASE("solve round trip and Rayleigh bound") {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t n = 1 + trial % 10;
      const SymMatrix a = oracle::random_spd(rng, n);
      RealVector x(n), v(n);
      for (double& e : x) e = g(rng);
      for (double& e : v) e = g(rng);
      const auto back = solve_spd(a, a.multiply(x));
      RealVector diff(n);
      for (std::size_t i = 0; i < n; ++i) diff[i] = back[i] - x[i];
      REQUIRE(norm(diff) <= 1e-9 * norm(x));
      const double lambda = max_eigenvalue(a);
      REQUIRE(lambda >= dot(v, a.multiply(v)) / dot(v, v) - 1e-8 * lambda);
    }
  }

  TEST_CASE("descent is monotone for any step inside the bound") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> frac(0.05, 0.999);
    for (int trial = 0; trial < 200; ++trial) {
      const NodeLayout l = oracle::random_layout(rng, 10, 4.0, 0.3);
      const auto cov = build_spatial_covariance(l, FieldParams{});
      const double mu = frac(rng) * ada::step_size_bound(cov.ruu);
      const auto t = ada::steepest_descent(cov, RealVector(l.size(), 0.0), mu, 1e-8, 5000);
      for (std::size_t k = 1; k < t.mmse.size(); ++k)
        REQUIRE(t.mmse[k] <= t.mmse[k - 1] + 16.0 * DBL_EPSILON * cov.sigma_d_sq);
    }
  }

  TEST_CASE("prefix accuracy never decreases as nodes are added") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 500; ++trial) {
      const NodeLayout l = oracle::random_layout(rng, 10, 4.0, 0.1);
      const auto sel = ada::select_nodes(l, FieldParams{}, ada::NodeCount{l.size()});
      for (std::size_t k = 1; k < sel.curve.size(); ++k) REQUIRE(sel.curve[k] >= sel.curve[k - 1] - 1e-10);
    }
  }

  TEST_CASE("instantaneous and LMS global updates agree") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> mu(1e-4, 0.5);
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t n = 1 + trial % 8, m = 1 + trial % 11;
      RealVector w(n);
      for (double& e : w) e = g(rng);
      std::vector<ObservationBlock> blocks;
      for (std::size_t i = 0; i < m; ++i) {
        ObservationBlock b{static_cast<int>(i + 1), 0, RealVector(n), g(rng)};
        for (double& e : b.samples) e = g(rng);
        blocks.push_back(b);
      }
      const double step = mu(rng);
      const auto lms = stdp::global_lms_update(w, blocks, step);
      const auto ia = stdp::global_ia_update(w, blocks, step);
      for (std::size_t k = 0; k < n; ++k) REQUIRE(std::fabs(lms[k] - ia[k]) <= 1e-12 * std::max(1.0, std::fabs(lms[k])));
    }
  }

  TEST_CASE("fuzzed protocol rounds keep the safety invariants") {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> th(0.0, 0.6), snr(5.0, 40.0);
    std::uniform_int_distribution<int> coin(0, 3);
    std::size_t rounds_checked = 0;
    for (std::uint64_t run = 0; rounds_checked < 10000; ++run) {
      Scenario s = default_scenario();
      s.n_block = 1 + run % 6;
      const std::size_t rounds = 50 + run % 150;
      auto stream = generate_stream(s.layout, s.field, s.n_block, rounds, run + 1);
      if (coin(rng) == 0) stream = inject_malicious(stream, {5, 9}, 6.0, s.field, run + 1);
      stdp::ProtocolConfig c;
      c.n_block = s.n_block;
      c.thresholds = {th(rng), th(rng)};
      c.seed = run;
      if (coin(rng) == 0) c.snr_db = snr(rng);
      stdp::Protocol p(s.layout.node_ids, c);
      std::vector<ObservationBlock> blocks(stream.size());
      for (std::size_t r = 0; r < rounds; ++r) {
        std::vector<stdp::Phase> before;
        for (std::size_t i = 0; i < stream.size(); ++i) {
          blocks[i] = stream[i][r];
          before.push_back(p.mode(i).phase);
        }
        const auto res = p.step_round(blocks);
        const std::string problem = invariants::check_round(res, before, p, c.thresholds);
        REQUIRE_MESSAGE(problem.empty(), problem);
        for (const auto& m : res.messages) REQUIRE((m.from == stdp::kSinkId) != (m.to == stdp::kSinkId));
        ++rounds_checked;
      }
    }
  }

  TEST_CASE("classification is scale equivariant and order independent") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> c(0.01, 100.0);
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<malicious::WeightHistory> hs;
      for (int id = 1; id <= 8; ++id) {
        malicious::WeightHistory h{id, {}};
        const double spread = id % 4 == 0 ? 6.0 : 1.0;
        for (int k = 0; k < 6; ++k) h.snapshots.push_back({spread * g(rng), spread * g(rng)});
        hs.push_back(h);
      }
      const auto base = malicious::classify(hs, 5.0);
      const double scale = c(rng);
      auto scaled = hs;
      for (auto& h : scaled)
        for (auto& w : h.snapshots)
          for (double& v : w) v *= scale;
      const auto r = malicious::classify(scaled, 5.0);
      for (std::size_t i = 0; i < hs.size(); ++i) {
        REQUIRE(r.nodes[i].variance == doctest::Approx(base.nodes[i].variance * scale * scale).epsilon(1e-9));
        REQUIRE(r.nodes[i].label == base.nodes[i].label);
      }
      auto shuffled = hs;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      auto ids = malicious::classify(shuffled, 5.0).malicious_ids();
      std::sort(ids.begin(), ids.end());
      REQUIRE(ids == base.malicious_ids());
    }
  }

  TEST_CASE("published variances keep their labels for kappa up to 5.2") {
    std::vector<int> ids;
    std::vector<double> vars;
    for (const auto& col : reference_weights::kColumns) {
      ids.push_back(col.node_id);
      vars.push_back(col.printed_variance);
    }
    for (double kappa = 2.0; kappa <= 5.2 + 1e-12; kappa += 0.05)
      REQUIRE(malicious::classify(ids, vars, kappa).malicious_ids() == std::vector<int>{5, 9});
    // Node 9 sits 5.24x above the median, so a stricter rule no longer flags it.
    for (double kappa = 5.3; kappa <= 10.0; kappa += 0.1)
      REQUIRE(malicious::classify(ids, vars, kappa).malicious_ids() == std::vector<int>{5});
  }
}
