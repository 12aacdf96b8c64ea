#pragma once

// Checks the safety invariants of one protocol round against its trace rows.
// Returns an empty string when they hold, otherwise a description of the first
// violation.

#include <algorithm>
#include <cmath>
#include <string>

#include "wsn/protocol.hpp"

namespace invariants {

inline bool has(const wsn::stdp::TraceRow& row, wsn::stdp::MessageKind kind) {
  return std::find(row.kinds.begin(), row.kinds.end(), kind) != row.kinds.end();
}

/// `phase_before[i]` is node i's phase at the start of the round.
inline std::string check_round(const wsn::stdp::RoundResult& result,
                               const std::vector<wsn::stdp::Phase>& phase_before,
                               const wsn::stdp::Protocol& protocol, const wsn::stdp::Thresholds& t) {
  using wsn::stdp::FilterMode;
  using wsn::stdp::MessageKind;
  using wsn::stdp::Phase;
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const auto& row = result.rows[i];
    const std::string who = "round " + std::to_string(row.round) + " node " + std::to_string(row.node_id);
    if (phase_before[i] == Phase::kClientPredicting && row.phase == Phase::kClientPredicting && row.transmitted)
      return who + ": data block sent while predicting";
    if (row.transmitted != has(row, MessageKind::kDataBlock)) return who + ": transmitted flag disagrees with trace";
    if (has(row, MessageKind::kGlobalWeight) && !(row.error_glob && std::fabs(*row.error_glob) <= t.alpha))
      return who + ": GLOBAL_WEIGHT without |error_glob| <= alpha";
    if (has(row, MessageKind::kNodeWeight) && !(row.error_new && std::fabs(*row.error_new) <= t.beta))
      return who + ": NODE_WEIGHT without |error_new| <= beta";
    if (has(row, MessageKind::kNodeWeight) && row.transmitted) return who + ": reported weight and sent data";
    const auto& mode = protocol.mode(i);
    if (mode.phase != row.phase) return who + ": trace phase differs from node state";
    const bool sink_on = mode.sink_filter == FilterMode::kActive;
    const bool client_on = mode.client_filter == FilterMode::kActive;
    if (sink_on && client_on) return who + ": both filters active";
    if (sink_on != (mode.phase == Phase::kSinkAdaptive)) return who + ": sink filter state disagrees with phase";
    if (client_on != (mode.phase == Phase::kClientAdaptive)) return who + ": client filter state disagrees with phase";
    const auto& rec = protocol.record();
    if (rec.transmitted[i] + rec.suppressed(i) != rec.total[i] || rec.total[i] != row.round + 1)
      return who + ": block counts not conserved";
  }
  return {};
}

}  // namespace invariants
