#include "wsn_cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

namespace wsn::cli {
namespace {

using nlohmann::json;

std::string child(const std::string& ptr, std::string_view key) {
  std::string out = ptr + "/";
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

std::string child(const std::string& ptr, std::size_t index) { return ptr + "/" + std::to_string(index); }

/// An object node whose keys are checked against an allow-list.
class Object {
 public:
  Object(const json& j, std::string ptr, std::initializer_list<std::string_view> allowed)
      : j_(j), ptr_(std::move(ptr)) {
    if (!j_.is_object()) throw SchemaError(ptr_, "expected an object");
    for (const auto& [key, value] : j_.items())
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
        throw SchemaError(child(ptr_, key), "unknown key");
  }

  const json* find(std::string_view key) const {
    auto it = j_.find(std::string(key));
    return it == j_.end() ? nullptr : &*it;
  }
  std::string at(std::string_view key) const { return child(ptr_, key); }

 private:
  const json& j_;
  std::string ptr_;
};

double real(const json& j, const std::string& ptr) {
  if (!j.is_number()) throw SchemaError(ptr, "expected a number");
  return j.get<double>();
}

double real_where(const json& j, const std::string& ptr, bool (*ok)(double), const char* what) {
  const double v = real(j, ptr);
  if (!ok(v)) throw SchemaError(ptr, std::string("must be ") + what);
  return v;
}

bool positive(double v) { return v > 0.0; }
bool non_negative(double v) { return v >= 0.0; }

std::int64_t integer(const json& j, const std::string& ptr) {
  if (!j.is_number_integer()) throw SchemaError(ptr, "expected an integer");
  if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
    throw SchemaError(ptr, "integer out of range");
  return j.get<std::int64_t>();
}

std::size_t count_at_least(const json& j, const std::string& ptr, std::int64_t lo) {
  const std::int64_t v = integer(j, ptr);
  if (v < lo) throw SchemaError(ptr, "must be >= " + std::to_string(lo));
  return static_cast<std::size_t>(v);
}

int node_id(const json& j, const std::string& ptr) {
  const std::int64_t v = integer(j, ptr);
  if (v < 1 || v > std::numeric_limits<int>::max()) throw SchemaError(ptr, "node ids must be positive");
  return static_cast<int>(v);
}

bool boolean(const json& j, const std::string& ptr) {
  if (!j.is_boolean()) throw SchemaError(ptr, "expected true or false");
  return j.get<bool>();
}

std::string text(const json& j, const std::string& ptr) {
  if (!j.is_string()) throw SchemaError(ptr, "expected a string");
  return j.get<std::string>();
}

void parse_layout(const json& j, NodeLayout& layout) {
  const std::string ptr = "/layout";
  Object o(j, ptr, {"side", "sink", "nodes"});
  if (auto* v = o.find("side")) layout.side = real_where(*v, o.at("side"), positive, "positive");
  if (auto* v = o.find("sink")) {
    const std::string p = o.at("sink");
    if (!v->is_array() || v->size() != 2) throw SchemaError(p, "expected [x, y]");
    layout.sink = {real((*v)[0], child(p, 0)), real((*v)[1], child(p, 1))};
  }
  if (auto* v = o.find("nodes")) {
    const std::string p = o.at("nodes");
    if (!v->is_array() || v->empty()) throw SchemaError(p, "expected a non-empty array");
    layout.node_ids.clear();
    layout.positions.clear();
    for (std::size_t i = 0; i < v->size(); ++i) {
      Object node((*v)[i], child(p, i), {"id", "x", "y"});
      for (const char* key : {"id", "x", "y"})
        if (!node.find(key)) throw SchemaError(node.at(key), "required");
      const int id = node_id(*node.find("id"), node.at("id"));
      if (std::count(layout.node_ids.begin(), layout.node_ids.end(), id))
        throw SchemaError(node.at("id"), "duplicate node id");
      layout.node_ids.push_back(id);
      layout.positions.push_back({real(*node.find("x"), node.at("x")), real(*node.find("y"), node.at("y"))});
    }
  }
  auto inside = [&](Point q) { return q.x >= 0.0 && q.x <= layout.side && q.y >= 0.0 && q.y <= layout.side; };
  if (!inside(layout.sink)) throw SchemaError(child(ptr, "sink"), "sink lies outside the sensing region");
  for (std::size_t i = 0; i < layout.positions.size(); ++i)
    if (!inside(layout.positions[i]))
      throw SchemaError(child(child(ptr, "nodes"), i), "node lies outside the sensing region");
}

void parse_field(const json& j, FieldParams& field, std::size_t node_count) {
  Object o(j, "/field", {"theta", "sigma_u", "sigma_d", "noise_var", "temporal_phi"});
  if (auto* v = o.find("theta")) field.theta = real_where(*v, o.at("theta"), positive, "positive");
  if (auto* v = o.find("sigma_u")) {
    const std::string p = o.at("sigma_u");
    if (v->is_array()) {
      if (v->size() != node_count)
        throw SchemaError(p, "needs one entry per node (" + std::to_string(node_count) + ")");
      field.sigma_u.clear();
      for (std::size_t i = 0; i < v->size(); ++i)
        field.sigma_u.push_back(real_where((*v)[i], child(p, i), positive, "positive"));
    } else {
      field.sigma_u = {real_where(*v, p, positive, "positive")};
    }
  }
  if (auto* v = o.find("sigma_d")) field.sigma_d = real_where(*v, o.at("sigma_d"), positive, "positive");
  if (auto* v = o.find("noise_var"))
    field.noise_var = real_where(*v, o.at("noise_var"), non_negative, "non-negative");
  if (auto* v = o.find("temporal_phi"))
    field.temporal_phi = real_where(
        *v, o.at("temporal_phi"), [](double x) { return x >= 0.0 && x < 1.0; }, "in [0, 1)");
}

void parse_thresholds(const json& j, stdp::Thresholds& t) {
  Object o(j, "/thresholds", {"alpha", "beta"});
  if (auto* v = o.find("alpha")) t.alpha = real_where(*v, o.at("alpha"), non_negative, "non-negative");
  if (auto* v = o.find("beta")) t.beta = real_where(*v, o.at("beta"), non_negative, "non-negative");
}

std::optional<MaliciousSpec> parse_malicious(const json& j, const NodeLayout& layout) {
  if (j.is_null()) return std::nullopt;
  Object o(j, "/malicious", {"node_ids", "scale"});
  MaliciousSpec spec;
  const json* ids = o.find("node_ids");
  if (!ids) throw SchemaError(o.at("node_ids"), "required");
  if (!ids->is_array() || ids->empty()) throw SchemaError(o.at("node_ids"), "expected a non-empty array");
  for (std::size_t i = 0; i < ids->size(); ++i) {
    const std::string p = child(o.at("node_ids"), i);
    const int id = node_id((*ids)[i], p);
    if (!layout.contains(id)) throw SchemaError(p, "unknown node id " + std::to_string(id));
    if (std::count(spec.node_ids.begin(), spec.node_ids.end(), id)) throw SchemaError(p, "duplicate node id");
    spec.node_ids.push_back(id);
  }
  if (auto* v = o.find("scale"))
    spec.scale = real_where(*v, o.at("scale"), [](double x) { return x > 1.0; }, "greater than 1");
  return spec;
}

std::optional<double> parse_channel(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "off") throw SchemaError("/channel", "expected \"off\" or {\"snr_db\": ...}");
    return std::nullopt;
  }
  Object o(j, "/channel", {"snr_db"});
  const json* v = o.find("snr_db");
  if (!v) throw SchemaError(o.at("snr_db"), "required");
  return real(*v, o.at("snr_db"));
}

void parse_selection(const json& j, SelectionSpec& sel, std::size_t node_count) {
  Object o(j, "/selection", {"select_first", "count", "target"});
  if (auto* v = o.find("select_first")) sel.select_first = boolean(*v, o.at("select_first"));
  if (auto* v = o.find("count")) {
    sel.count = count_at_least(*v, o.at("count"), 1);
    if (sel.count > node_count) throw SchemaError(o.at("count"), "exceeds the node count");
  }
  if (auto* v = o.find("target")) {
    if (v->is_null())
      sel.target.reset();
    else
      sel.target = real_where(*v, o.at("target"), [](double x) { return x > 0.0 && x <= 1.0; }, "in (0, 1]");
  }
}

sim::SweepSpec parse_sweep(const json& j) {
  Object o(j, "/sweep", {"axis", "values"});
  sim::SweepSpec spec;
  const json* axis = o.find("axis");
  if (!axis) throw SchemaError(o.at("axis"), "required");
  const std::string name = text(*axis, o.at("axis"));
  if (name == "beta") spec.axis = sim::SweepAxis::kBeta;
  else if (name == "n_block") spec.axis = sim::SweepAxis::kNBlock;
  else if (name == "node_count") spec.axis = sim::SweepAxis::kNodeCount;
  else throw SchemaError(o.at("axis"), "expected beta, n_block or node_count");
  const json* values = o.find("values");
  if (!values) throw SchemaError(o.at("values"), "required");
  if (!values->is_array() || values->empty()) throw SchemaError(o.at("values"), "expected a non-empty array");
  for (std::size_t i = 0; i < values->size(); ++i) spec.values.push_back(real((*values)[i], child(o.at("values"), i)));
  return spec;
}

Experiment parse_experiment(const json& j) {
  const std::string name = text(j, "/experiment");
  if (name == "ada") return Experiment::kAda;
  if (name == "stdp") return Experiment::kStdp;
  if (name == "detect") return Experiment::kDetect;
  if (name == "sweep") return Experiment::kSweep;
  throw SchemaError("/experiment", "expected ada, stdp, detect or sweep");
}

RunConfig parse_document(const json& doc) {
  Object o(doc, "",
           {"experiment", "output_dir", "seed", "layout", "field", "n_block", "num_blocks", "thresholds", "mu",
            "ada_mu_scale", "malicious", "channel", "selection", "kappa", "jitter", "ingest_csv", "sweep"});
  RunConfig cfg;
  cfg.scenario = default_scenario();
  Scenario& s = cfg.scenario;

  const json* experiment = o.find("experiment");
  if (!experiment) throw SchemaError("/experiment", "required");
  cfg.experiment = parse_experiment(*experiment);
  if (auto* v = o.find("output_dir")) cfg.output_dir = text(*v, "/output_dir");

  if (auto* v = o.find("seed")) {
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0))
      throw SchemaError("/seed", "expected an unsigned 64-bit integer");
    s.seed = v->get<std::uint64_t>();
  }
  if (auto* v = o.find("layout")) parse_layout(*v, s.layout);
  if (auto* v = o.find("field")) parse_field(*v, s.field, s.layout.size());
  if (s.field.sigma_u.size() != 1 && s.field.sigma_u.size() != s.layout.size())
    throw SchemaError("/field/sigma_u", "needs one entry per node");
  if (auto* v = o.find("n_block")) s.n_block = count_at_least(*v, "/n_block", 1);
  if (auto* v = o.find("num_blocks")) s.num_blocks = count_at_least(*v, "/num_blocks", 2);
  if (auto* v = o.find("thresholds")) parse_thresholds(*v, s.thresholds);
  if (auto* v = o.find("mu")) {
    if (v->is_string()) {
      if (v->get<std::string>() != "auto") throw SchemaError("/mu", "expected \"auto\" or a positive number");
      s.mu.reset();
    } else {
      s.mu = real_where(*v, "/mu", positive, "positive");
    }
  }
  if (auto* v = o.find("ada_mu_scale"))
    s.ada_mu_scale = real_where(*v, "/ada_mu_scale", [](double x) { return x > 0.0 && x <= 2.0; }, "in (0, 2]");
  if (auto* v = o.find("malicious")) s.malicious = parse_malicious(*v, s.layout);
  if (auto* v = o.find("channel")) s.snr_db = parse_channel(*v);
  if (auto* v = o.find("selection")) parse_selection(*v, s.selection, s.layout.size());
  if (auto* v = o.find("kappa"))
    s.kappa = real_where(*v, "/kappa", [](double x) { return x > 1.0; }, "greater than 1");
  if (auto* v = o.find("jitter")) s.jitter = boolean(*v, "/jitter");
  if (auto* v = o.find("ingest_csv")) {
    if (v->is_null()) s.ingest_csv.reset();
    else s.ingest_csv = text(*v, "/ingest_csv");
  }

  if (auto* v = o.find("sweep")) cfg.sweep = parse_sweep(*v);
  if (cfg.experiment == Experiment::kSweep && !cfg.sweep) throw SchemaError("/sweep", "required for a sweep");
  if (cfg.experiment == Experiment::kDetect && !s.malicious)
    throw SchemaError("/malicious", "required for a detect experiment");

  try {
    s.validate();
  } catch (const Error& e) {
    throw SchemaError("", e.what());
  }
  if (cfg.sweep) {
    for (std::size_t i = 0; i < cfg.sweep->values.size(); ++i) {
      try {
        sim::sweep_point(s, *cfg.sweep, i).validate();
      } catch (const Error& e) {
        throw SchemaError(child("/sweep/values", i), e.what());
      }
    }
  }
  return cfg;
}

}  // namespace

SchemaError::SchemaError(std::string pointer, const std::string& what)
    : Error((pointer.empty() ? std::string("/") : pointer) + ": " + what), pointer_(std::move(pointer)) {}

std::string_view to_string(Experiment experiment) {
  switch (experiment) {
    case Experiment::kAda: return "ada";
    case Experiment::kStdp: return "stdp";
    case Experiment::kDetect: return "detect";
    case Experiment::kSweep: return "sweep";
  }
  return "unknown";
}

RunConfig parse_config_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_document(doc);
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read error on " + path.string());
  return parse_config_text(buf.str());
}

std::string effective_config_json(const RunConfig& config) {
  json j = json::parse(to_json(config.scenario));
  j["experiment"] = std::string(to_string(config.experiment));
  j["output_dir"] = config.output_dir.string();
  if (config.sweep)
    j["sweep"] = {{"axis", std::string(sim::to_string(config.sweep->axis))}, {"values", config.sweep->values}};
  return j.dump(2) + "\n";
}

}  // namespace wsn::cli
