#pragma once

#include <span>

#include "slris/channel.hpp"

namespace slris {

enum class DecisionRationale { NoDesiredSignal, NoInterference, SinrComparison };

const char* to_string(DecisionRationale rationale);

/// Controller output: the inferred occupancy, the chosen ON/OFF states and
/// the SINR the controller expects under that belief (-inf dB when the
/// inferred occupancy has no desired signal).
struct Decision {
    SignalClass inferred_class = SignalClass::Idle;
    RisStateVector states;
    double predicted_sinr_db = 0.0;
    DecisionRationale rationale = DecisionRationale::NoDesiredSignal;
};

/// Map a classifier posterior to ON/OFF states:
///   Idle / IOnly -> everything OFF (nothing worth reflecting),
///   DOnly        -> everything ON (no interference, reflection only helps),
///   Both         -> greedy_states() under the full-occupancy SINR model.
/// The argmax breaks ties toward the lowest class index. The predicted SINR
/// is evaluated under the inferred occupancy (interferer power dropped when
/// the inferred class excludes it). Throws on a malformed posterior.
Decision decide(std::span<const double> posterior, const ScenarioParams& params,
                const Layout& layout);

/// ON/OFF search for the Both occupancy. Local search with a cost linear in
/// the surface count: an improve-only sweep from all-OFF in index order, one
/// refinement sweep, and the same from all-ON, keeping the better endpoint
/// (ties prefer fewer active surfaces, then the lexicographically smaller
/// vector). A flip that turns a surface ON must strictly improve the SINR;
/// a flip that turns one OFF is also taken on ties, so "no worse OFF than
/// ON" always powers down. For a single surface this reduces exactly to the
/// two-case rule. Total cost: at most 3K+2 SINR evaluations for K surfaces,
/// on top of one classifier inference per decision.
RisStateVector greedy_states(const ScenarioParams& params, const Layout& layout);

/// Exhaustive 2^K search (test oracle). Ties prefer fewer active surfaces,
/// then the lexicographically smaller vector. Throws for K > 16.
RisStateVector oracle_states(const ScenarioParams& params, const Layout& layout);

}  // namespace slris
