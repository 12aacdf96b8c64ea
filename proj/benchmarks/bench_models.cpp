#include <benchmark/benchmark.h>

#include "wsn/ada.hpp"
#include "wsn/fieldgen.hpp"
#include "wsn/protocol.hpp"
#include "wsn/scenario.hpp"

namespace {

void BM_SteepestDescent(benchmark::State& state) {
  const wsn::Scenario s = wsn::default_scenario();
  const auto cov = wsn::build_spatial_covariance(s.layout, s.field);
  const double mu = 1.0 / wsn::max_eigenvalue(cov.ruu);
  const wsn::RealVector w0(s.layout.size(), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(wsn::ada::steepest_descent(cov, w0, mu));
}
BENCHMARK(BM_SteepestDescent);

void BM_ProtocolRound(benchmark::State& state) {
  const wsn::Scenario s = wsn::default_scenario();
  const std::size_t rounds = 256;
  const auto stream = wsn::generate_stream(s.layout, s.field, s.n_block, rounds, s.seed);
  wsn::stdp::ProtocolConfig c;
  c.n_block = s.n_block;
  c.thresholds = s.thresholds;
  std::vector<wsn::ObservationBlock> blocks(stream.size());
  for (auto _ : state) {
    wsn::stdp::Protocol p(s.layout.node_ids, c);
    for (std::size_t r = 0; r < rounds; ++r) {
      for (std::size_t i = 0; i < stream.size(); ++i) blocks[i] = stream[i][r];
      benchmark::DoNotOptimize(p.step_round(blocks));
    }
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rounds));
}
BENCHMARK(BM_ProtocolRound);

}  // namespace
