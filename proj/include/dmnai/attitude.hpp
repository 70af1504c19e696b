#pragma once

#include <span>

#include "dmnai/stance.hpp"

namespace dmnai {

// One incoming influence on a node within a round: who sent it, the stance
// they held when they sent it, and the composed influence probability.
struct InfluenceEvent {
    NodeId source = 0;
    StanceValue source_stance = stance::kNegative;
    double probability = 0.0;
};

// 1 if the two stances agree exactly, else 0. XOR on the four-valued grid
// is an inequality test; the complement bar flips it.
inline int agreement_indicator(StanceValue a, StanceValue b) {
    return a == b ? 1 : 0;
}

// Perseverance after one round of influences: conflicting events push the
// value down (an attitude change becomes more likely), agreeing events push
// it up. Averaged over the k events and clamped to [0, 1]. Throws on an
// empty event list.
double update_perseverance(double perseverance, std::span<const InfluenceEvent> events,
                           StanceValue receiver_stance);

// Stance transition for a receiver hit by a sender with stance `sender` at
// influence probability `p` against perseverance `a`.
//
// Not yet settled (exposed_before == false, the receiver sits at -1 or
// 0.5): adopt the sender stance when p >= a, otherwise move to neutral.
// Settled: exact agreement keeps the stance; p >= a moves it a half step
// towards the sender; otherwise it stays. The result is always on the
// known grid {0, 0.5, 1}. Throws if the sender stance is unknown.
StanceValue att_update(StanceValue receiver, StanceValue sender, double p, double a,
                       bool exposed_before);

} // namespace dmnai
