#include "slris/controller.hpp"

#include <cmath>
#include <stdexcept>

#include "slris/model.hpp"

namespace slris {

namespace {

double states_sinr_db(const ScenarioParams& params, const Layout& layout,
                      const RisStateVector& states) {
    return sinr(params, layout, states).sinr_db;
}

// Strict-weak order used to arbitrate equal-SINR configurations: higher SINR
// first, then fewer active surfaces, then lexicographically smaller.
bool better_config(double a_sinr, const RisStateVector& a, double b_sinr,
                   const RisStateVector& b) {
    if (a_sinr != b_sinr) return a_sinr > b_sinr;
    const std::size_t a_on = a.count_on(), b_on = b.count_on();
    if (a_on != b_on) return a_on < b_on;
    return a.on < b.on;
}

// One improve-only sweep in index order. A flip to ON must strictly improve;
// a flip to OFF is also accepted on ties (energy preference). Returns the
// SINR of the final configuration.
double sweep(const ScenarioParams& params, const Layout& layout, RisStateVector& states,
             double current_sinr_db) {
    for (std::size_t k = 0; k < states.size(); ++k) {
        const bool was_on = states.on[k];
        states.on[k] = !was_on;
        const double candidate = states_sinr_db(params, layout, states);
        const bool accept = was_on ? candidate >= current_sinr_db : candidate > current_sinr_db;
        if (accept)
            current_sinr_db = candidate;
        else
            states.on[k] = was_on;
    }
    return current_sinr_db;
}

}  // namespace

const char* to_string(DecisionRationale rationale) {
    switch (rationale) {
        case DecisionRationale::NoDesiredSignal: return "NoDesiredSignal";
        case DecisionRationale::NoInterference: return "NoInterference";
        case DecisionRationale::SinrComparison: return "SinrComparison";
    }
    return "?";
}

RisStateVector greedy_states(const ScenarioParams& params, const Layout& layout) {
    const std::size_t count = params.ris_count;

    RisStateVector from_off = RisStateVector::all_off(count);
    double off_sinr = states_sinr_db(params, layout, from_off);
    off_sinr = sweep(params, layout, from_off, off_sinr);
    off_sinr = sweep(params, layout, from_off, off_sinr);

    RisStateVector from_on = RisStateVector::all_on(count);
    double on_sinr = states_sinr_db(params, layout, from_on);
    on_sinr = sweep(params, layout, from_on, on_sinr);

    return better_config(on_sinr, from_on, off_sinr, from_off) ? from_on : from_off;
}

RisStateVector oracle_states(const ScenarioParams& params, const Layout& layout) {
    const std::size_t count = params.ris_count;
    if (count > 16) throw std::invalid_argument("oracle_states: limited to 16 surfaces");

    RisStateVector best = RisStateVector::all_off(count);
    double best_sinr = states_sinr_db(params, layout, best);
    for (std::uint32_t mask = 1; mask < (1u << count); ++mask) {
        RisStateVector candidate = RisStateVector::all_off(count);
        for (std::size_t k = 0; k < count; ++k) candidate.on[k] = (mask >> k) & 1;
        const double candidate_sinr = states_sinr_db(params, layout, candidate);
        if (better_config(candidate_sinr, candidate, best_sinr, best)) {
            best = candidate;
            best_sinr = candidate_sinr;
        }
    }
    return best;
}

Decision decide(std::span<const double> posterior, const ScenarioParams& params,
                const Layout& layout) {
    if (posterior.size() != 4) throw std::invalid_argument("decide: posterior must have 4 entries");
    double sum = 0.0;
    for (double p : posterior) {
        if (!std::isfinite(p) || p < 0.0)
            throw std::invalid_argument("decide: posterior entries must be finite and >= 0");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6)
        throw std::invalid_argument("decide: posterior does not sum to 1");

    Decision decision;
    decision.inferred_class = static_cast<SignalClass>(argmax_class(posterior));

    switch (decision.inferred_class) {
        case SignalClass::Idle:
        case SignalClass::IOnly:
            decision.states = RisStateVector::all_off(params.ris_count);
            decision.rationale = DecisionRationale::NoDesiredSignal;
            break;
        case SignalClass::DOnly:
            decision.states = RisStateVector::all_on(params.ris_count);
            decision.rationale = DecisionRationale::NoInterference;
            break;
        case SignalClass::Both:
            decision.states = greedy_states(params, layout);
            decision.rationale = DecisionRationale::SinrComparison;
            break;
    }

    decision.predicted_sinr_db =
        sinr(params, layout, decision.states, occupancy_of(decision.inferred_class)).sinr_db;
    return decision;
}

}  // namespace slris
