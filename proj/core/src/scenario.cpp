#include "wsn/scenario.hpp"

#include <cstdio>

#include <nlohmann/json.hpp>

#include "wsn/errors.hpp"

namespace wsn {

NodeLayout default_layout() {
  NodeLayout layout;
  layout.side = 4.0;
  layout.sink = {2.0, 2.0};
  layout.node_ids = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  layout.positions = {
      {0.4, 0.5}, {1.5, 1.4}, {3.6, 0.4}, {2.6, 1.3}, {1.2, 2.3},
      {0.3, 3.5}, {2.8, 2.5}, {3.5, 3.7}, {1.8, 3.0}, {2.4, 2.9},
  };
  return layout;
}

Scenario default_scenario() {
  Scenario s;
  s.layout = default_layout();
  return s;
}

void Scenario::validate() const {
  layout.validate();
  field.validate(layout.size());
  if (n_block < 1) throw InvalidArgument("n_block must be >= 1");
  if (num_blocks < 2) throw InvalidArgument("num_blocks must be >= 2");
  if (!(thresholds.alpha >= 0.0) || !(thresholds.beta >= 0.0))
    throw InvalidArgument("thresholds must be non-negative");
  if (mu && !(*mu > 0.0)) throw InvalidArgument("mu must be positive");
  if (!(ada_mu_scale > 0.0 && ada_mu_scale <= 2.0))
    throw InvalidArgument("ada_mu_scale must lie in (0, 2]");
  if (malicious) {
    if (!(malicious->scale > 1.0)) throw InvalidArgument("malicious scale must exceed 1");
    for (int id : malicious->node_ids) layout.index_of(id);
  }
  if (selection.count < 1 || selection.count > layout.size())
    throw InvalidArgument("selection count must lie in [1, node count]");
  if (selection.target && !(*selection.target > 0.0 && *selection.target <= 1.0))
    throw InvalidArgument("selection target must lie in (0, 1]");
  if (!(kappa > 1.0)) throw InvalidArgument("kappa must exceed 1");
}

std::string to_json(const Scenario& s) {
  using nlohmann::json;
  json nodes = json::array();
  for (std::size_t i = 0; i < s.layout.size(); ++i)
    nodes.push_back({{"id", s.layout.node_ids[i]},
                     {"x", s.layout.positions[i].x},
                     {"y", s.layout.positions[i].y}});
  json sigma_u = s.field.sigma_u.size() == 1 ? json(s.field.sigma_u.front()) : json(s.field.sigma_u);

  json j;
  j["seed"] = s.seed;
  j["layout"] = {{"side", s.layout.side}, {"sink", {s.layout.sink.x, s.layout.sink.y}}, {"nodes", nodes}};
  j["field"] = {{"theta", s.field.theta},
                {"sigma_u", sigma_u},
                {"sigma_d", s.field.sigma_d},
                {"noise_var", s.field.noise_var},
                {"temporal_phi", s.field.temporal_phi}};
  j["n_block"] = s.n_block;
  j["num_blocks"] = s.num_blocks;
  j["thresholds"] = {{"alpha", s.thresholds.alpha}, {"beta", s.thresholds.beta}};
  j["mu"] = s.mu ? json(*s.mu) : json("auto");
  j["ada_mu_scale"] = s.ada_mu_scale;
  j["malicious"] = s.malicious ? json{{"node_ids", s.malicious->node_ids}, {"scale", s.malicious->scale}}
                               : json(nullptr);
  j["channel"] = s.snr_db ? json{{"snr_db", *s.snr_db}} : json("off");
  j["selection"] = {{"select_first", s.selection.select_first},
                    {"count", s.selection.count},
                    {"target", s.selection.target ? json(*s.selection.target) : json(nullptr)}};
  j["kappa"] = s.kappa;
  j["jitter"] = s.jitter;
  j["ingest_csv"] = s.ingest_csv ? json(*s.ingest_csv) : json(nullptr);
  return j.dump(2);
}

std::string config_hash(const Scenario& scenario) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_json(scenario)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace wsn
