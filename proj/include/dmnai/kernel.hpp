#pragma once

#include <span>

#include "dmnai/stance.hpp"

namespace dmnai {

// Two readings of how the transfer weight W enters the influence
// probability: `literal` uses (1 - W) as the leading factor, `complement`
// uses W.
enum class TransferInterpretation { literal, complement };

struct KernelParams {
    double lambda = 0.5; // weight for influencers at grid distance 0.5
    double mu = 0.25;    // weight for influencers at larger distance
    double rate = 1.0;   // default dissemination rate for every pair and topic
    double horizon = 1.0;
    TransferInterpretation transfer = TransferInterpretation::literal;

    void validate() const; // throws ValidationError on out-of-range fields
};

// Similarity of two full attitude vectors: sqrt(z) / (sqrt(z) + ||a - b||).
// Equals 1 exactly for identical vectors and decreases strictly with the
// Euclidean distance. Unknown (-1) entries participate at face value.
double attitude_similarity(std::span<const StanceValue> a, std::span<const StanceValue> b);

// W = 1 - exp(-rate * horizon), the probability that a transmission
// completes within the horizon.
double transfer_weight(double rate, double horizon);

// Weight of the receiver/sender stance pairing. Case order matters:
// receivers at -1 or 0.5 (and exact agreement) weigh 1, a half-step gap
// weighs lambda, anything further mu.
double stance_factor(StanceValue receiver, StanceValue sender, const KernelParams& p);

// Composed influence of `sender` on `receiver` for one topic, always in
// [0, 1]. The overload with an explicit rate serves per-edge overrides.
double influence_probability(std::span<const StanceValue> sender,
                             std::span<const StanceValue> receiver,
                             TopicId topic, const KernelParams& p);
double influence_probability(std::span<const StanceValue> sender,
                             std::span<const StanceValue> receiver,
                             TopicId topic, const KernelParams& p, double rate);

} // namespace dmnai
