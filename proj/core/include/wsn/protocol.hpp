#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "wsn/fieldgen.hpp"
#include "wsn/random.hpp"
#include "wsn/stdp.hpp"

namespace wsn::stdp {

enum class FilterMode { kActive, kIdle };

enum class Phase {
  kRawTransmit,       // Phase I: sends raw blocks, no filter running
  kSinkAdaptive,      // sink filter adapts on this node's blocks
  kClientAdaptive,    // node holds the global weight and adapts locally
  kClientPredicting,  // node silent; both filters idle
};

struct NodeMode {
  FilterMode sink_filter = FilterMode::kIdle;
  FilterMode client_filter = FilterMode::kIdle;
  Phase phase = Phase::kRawTransmit;

  bool operator==(const NodeMode&) const = default;
};

enum class MessageKind { kQuery, kDataBlock, kGlobalWeight, kNodeWeight };

inline constexpr int kSinkId = 0;

struct Message {
  MessageKind kind;
  int from;
  int to;
  std::variant<std::monostate, ObservationBlock, WeightVector> payload;
};

struct Thresholds {
  double alpha = 0.2;  // sink-side hand-off threshold on |error_glob|
  double beta = 0.1;   // client-side stop threshold on |error_new|

  bool operator==(const Thresholds&) const = default;
};

struct TraceRow {
  std::size_t round;
  int node_id;
  Phase phase;  // after the round's transitions
  std::vector<MessageKind> kinds;
  std::optional<double> error_glob;
  std::optional<double> error_new;
  bool transmitted;
};

struct TransmissionRecord {
  std::vector<int> node_ids;
  std::vector<std::size_t> transmitted;
  std::vector<std::size_t> total;

  std::size_t suppressed(std::size_t i) const { return total[i] - transmitted[i]; }
};

/// 100 × transmitted/total per node.
std::vector<double> transmission_percentage(const TransmissionRecord& record);

struct ProtocolConfig {
  std::size_t n_block = 5;
  Thresholds thresholds;
  std::optional<double> mu;  // nullopt: 0.5/(M·λ̂), λ̂ from all Phase I blocks so far
  double noise_var = 0.01;   // variance of the client-side noise v_i
  std::optional<double> snr_db;  // AWGN on data blocks; nullopt = channel off
  std::uint64_t seed = 1;
};

struct RoundResult {
  std::vector<Message> messages;  // canonical order: clients by node id, then sink
  std::vector<TraceRow> rows;     // one per node
};

struct WeightSnapshot {
  std::size_t round;
  WeightVector weight;
};

/// Synchronous, lossless dual-prediction protocol between one sink and M
/// clients. Each round every client senses one block; whether that block is
/// sent depends on the node's phase and its thresholds.
class Protocol {
 public:
  Protocol(std::vector<int> node_ids, ProtocolConfig config);

  /// Advances one round. `blocks` holds one block per node, in node order.
  RoundResult step_round(std::span<const ObservationBlock> blocks);

  /// Throws ProtocolViolation if `message` cannot be accepted given the
  /// current phase of the node it concerns.
  void validate(const Message& message) const;

  std::size_t round() const noexcept { return round_; }
  std::span<const int> node_ids() const noexcept { return ids_; }
  const NodeMode& mode(std::size_t node_index) const { return nodes_.at(node_index).mode; }
  const WeightVector& global_weight() const noexcept { return global_; }
  std::optional<double> mu() const noexcept { return mu_; }
  const TransmissionRecord& record() const noexcept { return record_; }
  /// Client weights after every local update of the node (Phase III rounds).
  const std::vector<WeightSnapshot>& client_history(std::size_t node_index) const {
    return nodes_.at(node_index).history;
  }
  /// Last weight a node reported to the sink when it went silent.
  const std::optional<WeightVector>& reported_weight(std::size_t node_index) const {
    return nodes_.at(node_index).reported;
  }

 private:
  struct NodeState {
    int id;
    NodeMode mode;
    WeightVector global_copy;  // last global weight received from the sink
    WeightVector client;       // client filter weight
    std::optional<WeightVector> reported;
    std::vector<WeightSnapshot> history;
    Rng noise;
  };

  void accept(const Message& message, RoundResult& out);
  static void enter(NodeState& node, Phase phase);

  std::vector<int> ids_;
  ProtocolConfig config_;
  std::vector<NodeState> nodes_;
  WeightVector global_;
  std::optional<double> mu_;
  Matrix phase_one_cov_;  // Σ uᵀu over every Phase I block seen so far
  std::size_t phase_one_blocks_ = 0;
  std::size_t round_ = 0;
  TransmissionRecord record_;
};

std::string_view to_string(Phase phase);
std::string_view to_string(MessageKind kind);

}  // namespace wsn::stdp
