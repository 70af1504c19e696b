#include "dmnai/kernel.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include "dmnai/error.hpp"

namespace dmnai {

void KernelParams::validate() const {
    if (lambda < 0.0 || lambda > 1.0) {
        throw ValidationError("lambda must be in [0, 1]");
    }
    if (mu < 0.0 || mu > 1.0) {
        throw ValidationError("mu must be in [0, 1]");
    }
    if (rate < 0.0) {
        throw ValidationError("rate must be non-negative");
    }
    if (!(horizon > 0.0)) {
        throw ValidationError("horizon must be positive");
    }
}

double attitude_similarity(std::span<const StanceValue> a, std::span<const StanceValue> b) {
    if (a.size() != b.size()) {
        throw ValidationError("attitude vectors differ in length (" + std::to_string(a.size()) +
                              " vs " + std::to_string(b.size()) + ")");
    }
    if (a.empty()) {
        throw ValidationError("attitude vectors must cover at least one topic");
    }
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sq += d * d;
    }
    const double root_z = std::sqrt(static_cast<double>(a.size()));
    return root_z / (root_z + std::sqrt(sq));
}

double transfer_weight(double rate, double horizon) {
    if (rate < 0.0) {
        throw ValidationError("rate must be non-negative");
    }
    return -std::expm1(-rate * horizon);
}

double stance_factor(StanceValue receiver, StanceValue sender, const KernelParams& p) {
    if (receiver == stance::kUnknown || receiver == stance::kNeutral || receiver == sender) {
        return 1.0;
    }
    if (std::abs(receiver - sender) <= 0.5) {
        return p.lambda;
    }
    return p.mu;
}

double influence_probability(std::span<const StanceValue> sender,
                             std::span<const StanceValue> receiver,
                             TopicId topic, const KernelParams& p) {
    return influence_probability(sender, receiver, topic, p, p.rate);
}

double influence_probability(std::span<const StanceValue> sender,
                             std::span<const StanceValue> receiver,
                             TopicId topic, const KernelParams& p, double rate) {
    if (topic >= sender.size()) {
        throw ValidationError("topic index " + std::to_string(topic) + " out of range");
    }
    const double w = transfer_weight(rate, p.horizon);
    const double lead = p.transfer == TransferInterpretation::literal ? 1.0 - w : w;
    const double result = lead * attitude_similarity(sender, receiver) *
                          stance_factor(receiver[topic], sender[topic], p);
    assert(result >= 0.0 && result <= 1.0);
    return std::clamp(result, 0.0, 1.0);
}

} // namespace dmnai
