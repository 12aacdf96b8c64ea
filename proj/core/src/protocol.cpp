#include "wsn/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wsn/errors.hpp"

namespace wsn::stdp {

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::kRawTransmit: return "RAW_TRANSMIT";
    case Phase::kSinkAdaptive: return "SINK_ADAPTIVE";
    case Phase::kClientAdaptive: return "CLIENT_ADAPTIVE";
    case Phase::kClientPredicting: return "CLIENT_PREDICTING";
  }
  return "UNKNOWN";
}

std::string_view to_string(MessageKind kind) {
  switch (kind) {
    case MessageKind::kQuery: return "QUERY";
    case MessageKind::kDataBlock: return "DATA_BLOCK";
    case MessageKind::kGlobalWeight: return "GLOBAL_WEIGHT";
    case MessageKind::kNodeWeight: return "NODE_WEIGHT";
  }
  return "UNKNOWN";
}

std::vector<double> transmission_percentage(const TransmissionRecord& record) {
  std::vector<double> pct;
  pct.reserve(record.total.size());
  for (std::size_t i = 0; i < record.total.size(); ++i) {
    if (record.total[i] == 0) throw InvalidArgument("no blocks sensed yet");
    pct.push_back(100.0 * static_cast<double>(record.transmitted[i]) /
                  static_cast<double>(record.total[i]));
  }
  return pct;
}

Protocol::Protocol(std::vector<int> node_ids, ProtocolConfig config)
    : ids_(std::move(node_ids)), config_(config) {
  if (ids_.empty()) throw InvalidArgument("protocol needs at least one node");
  if (config_.n_block == 0) throw InvalidArgument("block length must be >= 1");
  if (!(config_.thresholds.alpha >= 0.0) || !(config_.thresholds.beta >= 0.0))
    throw InvalidArgument("thresholds must be non-negative");
  if (config_.mu && !(*config_.mu > 0.0)) throw InvalidArgument("step size must be positive");
  if (!(config_.noise_var >= 0.0)) throw InvalidArgument("noise_var must be non-negative");

  global_ = initial_weight(config_.n_block);
  phase_one_cov_ = Matrix(config_.n_block);
  nodes_.reserve(ids_.size());
  for (int id : ids_) {
    if (id == kSinkId) throw InvalidArgument("node id 0 is reserved for the sink");
    if (std::count(ids_.begin(), ids_.end(), id) != 1)
      throw InvalidArgument("duplicate node id " + std::to_string(id));
    nodes_.push_back(NodeState{id, NodeMode{}, {}, global_, std::nullopt, {},
                               make_rng(config_.seed, static_cast<std::uint64_t>(id),
                                        StreamRole::kClientNoise)});
  }
  record_.node_ids = ids_;
  record_.transmitted.assign(ids_.size(), 0);
  record_.total.assign(ids_.size(), 0);
}

void Protocol::enter(NodeState& node, Phase phase) {
  node.mode.phase = phase;
  switch (phase) {
    case Phase::kRawTransmit:
      node.mode.sink_filter = FilterMode::kIdle;
      node.mode.client_filter = FilterMode::kIdle;
      break;
    case Phase::kSinkAdaptive:
      node.mode.sink_filter = FilterMode::kActive;
      node.mode.client_filter = FilterMode::kIdle;
      break;
    case Phase::kClientAdaptive:
      node.mode.sink_filter = FilterMode::kIdle;
      node.mode.client_filter = FilterMode::kActive;
      break;
    case Phase::kClientPredicting:
      node.mode.sink_filter = FilterMode::kIdle;
      node.mode.client_filter = FilterMode::kIdle;
      break;
  }
}

void Protocol::validate(const Message& message) const {
  const bool from_sink = message.from == kSinkId;
  const int node_id = from_sink ? message.to : message.from;
  const auto it = std::find(ids_.begin(), ids_.end(), node_id);
  if (it == ids_.end() || (from_sink && message.to == kSinkId) || (!from_sink && message.to != kSinkId))
    throw ProtocolViolation("message between unknown endpoints " + std::to_string(message.from) +
                            " -> " + std::to_string(message.to));
  const Phase phase = nodes_[static_cast<std::size_t>(it - ids_.begin())].mode.phase;
  const std::string where = std::string(to_string(message.kind)) + " for node " +
                            std::to_string(node_id) + " in " + std::string(to_string(phase));

  auto weight_ok = [&] {
    const auto* w = std::get_if<WeightVector>(&message.payload);
    return w != nullptr && w->size() == config_.n_block;
  };
  switch (message.kind) {
    case MessageKind::kQuery:
      if (!from_sink || phase != Phase::kRawTransmit) throw ProtocolViolation("unexpected " + where);
      break;
    case MessageKind::kDataBlock: {
      const auto* block = std::get_if<ObservationBlock>(&message.payload);
      if (from_sink || phase == Phase::kClientPredicting || block == nullptr ||
          block->node_id != node_id)
        throw ProtocolViolation("unexpected " + where);
      break;
    }
    case MessageKind::kGlobalWeight:
      if (!from_sink || !(phase == Phase::kRawTransmit || phase == Phase::kSinkAdaptive) ||
          !weight_ok())
        throw ProtocolViolation("unexpected " + where);
      break;
    case MessageKind::kNodeWeight:
      if (from_sink || phase != Phase::kClientAdaptive || !weight_ok())
        throw ProtocolViolation("unexpected " + where);
      break;
  }
}

void Protocol::accept(const Message& message, RoundResult& out) {
  validate(message);
  const int node_id = message.from == kSinkId ? message.to : message.from;
  const auto index = static_cast<std::size_t>(std::find(ids_.begin(), ids_.end(), node_id) - ids_.begin());
  NodeState& node = nodes_[index];
  switch (message.kind) {
    case MessageKind::kGlobalWeight: {
      const auto& w = std::get<WeightVector>(message.payload);
      node.global_copy = w;
      enter(node, Phase::kClientAdaptive);
      break;
    }
    case MessageKind::kNodeWeight:
      node.reported = std::get<WeightVector>(message.payload);
      enter(node, Phase::kClientPredicting);
      break;
    case MessageKind::kQuery:
    case MessageKind::kDataBlock:
      break;
  }
  out.rows[index].kinds.push_back(message.kind);
  out.messages.push_back(message);
}

RoundResult Protocol::step_round(std::span<const ObservationBlock> blocks) {
  if (blocks.size() != nodes_.size())
    throw DimensionMismatch("expected " + std::to_string(nodes_.size()) + " blocks, got " +
                            std::to_string(blocks.size()));
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].node_id != ids_[i])
      throw InvalidArgument("block " + std::to_string(i) + " belongs to node " +
                            std::to_string(blocks[i].node_id) + ", expected " + std::to_string(ids_[i]));
    if (blocks[i].samples.size() != config_.n_block)
      throw DimensionMismatch("block of node " + std::to_string(ids_[i]) + " has wrong length");
  }

  RoundResult out;
  out.rows.reserve(nodes_.size());
  for (const auto& node : nodes_)
    out.rows.push_back(TraceRow{round_, node.id, node.mode.phase, {}, std::nullopt, std::nullopt, false});

  if (round_ == 0)
    for (const auto& node : nodes_) accept(Message{MessageKind::kQuery, kSinkId, node.id, {}}, out);

  const double beta = config_.thresholds.beta;
  const double noise_sd = std::sqrt(config_.noise_var);
  // Clients only run from round 1 on, so mu is always sized by then.
  const double mu = mu_.value_or(0.0);

  std::vector<ObservationBlock> received;
  std::vector<std::size_t> received_from;
  std::vector<bool> sent(nodes_.size(), false);

  // Clients, in node order.
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    NodeState& node = nodes_[i];
    const auto& u = blocks[i].samples;
    bool send = false;
    switch (node.mode.phase) {
      case Phase::kRawTransmit:
      case Phase::kSinkAdaptive:
        send = true;
        break;
      case Phase::kClientAdaptive: {
        std::normal_distribution<double> normal(0.0, 1.0);
        const double d_new = client_desired(u, node.global_copy, noise_sd * normal(node.noise));
        ClientStep step = client_update(node.client, u, d_new, mu);
        node.client = step.weight;
        node.history.push_back({round_, node.client});
        out.rows[i].error_new = step.error;
        if (std::abs(step.error) > beta) {
          send = true;
        } else {
          accept(Message{MessageKind::kNodeWeight, node.id, kSinkId, node.client}, out);
        }
        break;
      }
      case Phase::kClientPredicting: {
        std::normal_distribution<double> normal(0.0, 1.0);
        const double d_new = client_desired(u, node.global_copy, noise_sd * normal(node.noise));
        const double e = d_new - dot(u, node.client);
        out.rows[i].error_new = e;
        if (std::abs(e) > beta) {
          enter(node, Phase::kRawTransmit);
          node.client = initial_weight(config_.n_block);
          send = true;
        }
        break;
      }
    }
    if (send) {
      const std::uint64_t channel_seed =
          derive_seed(config_.seed, static_cast<std::uint64_t>(node.id), round_);
      accept(Message{MessageKind::kDataBlock, node.id, kSinkId,
                     awgn_channel(blocks[i], config_.snr_db, channel_seed)},
             out);
      received.push_back(std::get<ObservationBlock>(out.messages.back().payload));
      received_from.push_back(i);
      sent[i] = true;
    }
  }

  // Sink. Phase I blocks feed the running estimate of R_UU that sizes mu.
  bool restarted = false;
  for (std::size_t r = 0; r < received.size(); ++r) {
    if (nodes_[received_from[r]].mode.phase != Phase::kRawTransmit) continue;
    const auto& u = received[r].samples;
    for (std::size_t a = 0; a < u.size(); ++a)
      for (std::size_t b = 0; b < u.size(); ++b) phase_one_cov_(a, b) += u[a] * u[b];
    ++phase_one_blocks_;
    restarted = true;
  }
  if (config_.mu) {
    mu_ = config_.mu;
  } else if (restarted) {
    Matrix mean = phase_one_cov_;
    for (std::size_t a = 0; a < mean.order(); ++a)
      for (std::size_t b = 0; b < mean.order(); ++b) mean(a, b) /= static_cast<double>(phase_one_blocks_);
    const double lambda = max_eigenvalue(SymMatrix(std::move(mean)));
    if (!(lambda > 0.0)) throw InvalidArgument("Phase I blocks carry no energy; cannot size the step");
    mu_ = 0.5 / (static_cast<double>(nodes_.size()) * lambda);
  }

  std::vector<ObservationBlock> adapt_blocks;
  std::vector<std::size_t> adapt_nodes;
  for (std::size_t r = 0; r < received.size(); ++r) {
    const Phase p = nodes_[received_from[r]].mode.phase;
    if (p == Phase::kRawTransmit || p == Phase::kSinkAdaptive) {
      adapt_blocks.push_back(received[r]);
      adapt_nodes.push_back(received_from[r]);
    }
  }
  if (!adapt_blocks.empty()) {
    global_ = global_lms_update(global_, adapt_blocks, *mu_);
    const RealVector desired = [&] {
      RealVector d;
      for (const auto& b : adapt_blocks) d.push_back(b.desired);
      return d;
    }();
    const RealVector errors = sink_errors(desired, sink_predict(adapt_blocks, global_));
    for (std::size_t r = 0; r < adapt_nodes.size(); ++r) {
      NodeState& node = nodes_[adapt_nodes[r]];
      out.rows[adapt_nodes[r]].error_glob = errors[r];
      if (std::abs(errors[r]) <= config_.thresholds.alpha) {
        accept(Message{MessageKind::kGlobalWeight, kSinkId, node.id, global_}, out);
      } else {
        enter(node, Phase::kSinkAdaptive);
      }
    }
  }

  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    ++record_.total[i];
    if (sent[i]) ++record_.transmitted[i];
    out.rows[i].phase = nodes_[i].mode.phase;
    out.rows[i].transmitted = sent[i];
  }
  ++round_;
  return out;
}

}  // namespace wsn::stdp
