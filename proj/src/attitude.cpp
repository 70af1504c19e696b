#include "dmnai/attitude.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "dmnai/error.hpp"

namespace dmnai {

double update_perseverance(double perseverance, std::span<const InfluenceEvent> events,
                           StanceValue receiver_stance) {
    if (events.empty()) {
        throw ValidationError("perseverance update needs at least one influence event");
    }
    double acc = 0.0;
    for (const auto& e : events) {
        acc += std::abs(e.source_stance - receiver_stance) * e.probability -
               agreement_indicator(e.source_stance, receiver_stance) * e.probability;
    }
    const double updated = perseverance - acc / static_cast<double>(events.size());
    return std::clamp(updated, 0.0, 1.0);
}

StanceValue att_update(StanceValue receiver, StanceValue sender, double p, double a,
                       bool exposed_before) {
    if (!stance::known(sender)) {
        throw ValidationError("an unknown stance cannot influence");
    }
    if (!exposed_before) {
        return p >= a ? sender : stance::kNeutral;
    }
    if (sender == receiver) {
        return receiver;
    }
    if (p >= a) {
        const StanceValue next = receiver + (sender > receiver ? 0.5 : -0.5);
        // half-steps from a known grid value stay on the known grid
        assert(stance::known(next));
        return next;
    }
    return receiver;
}

} // namespace dmnai
