#pragma once

#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dmnai/engine.hpp"
#include "dmnai/graph.hpp"
#include "dmnai/trace.hpp"

namespace dmnai {

// Ground-truth stance record, one entry per (node, topic).
struct ReferenceTrace {
    std::unordered_map<std::uint64_t, StanceValue> entries;

    static std::uint64_t key(NodeId node, TopicId topic) {
        return (static_cast<std::uint64_t>(node) << 32) | topic;
    }
    void set(NodeId node, TopicId topic, StanceValue s) { entries[key(node, topic)] = s; }
    const StanceValue* find(NodeId node, TopicId topic) const {
        const auto it = entries.find(key(node, topic));
        return it == entries.end() ? nullptr : &it->second;
    }
};

// CSV with header "node,topic,stance"; node column holds graph node names.
ReferenceTrace load_reference_csv(std::istream& in, const SocialGraph& g);
void save_reference_csv(std::ostream& out, const ReferenceTrace& ref, const SocialGraph& g);

// Fraction of nodes whose affected status (stance known vs unknown) agrees
// with the reference. The reference must cover every node for the topic.
double range_accuracy(const AttitudeState& sim, const ReferenceTrace& ref, TopicId topic);

// Fraction of nodes whose exact grid stance agrees with the reference.
double stance_accuracy(const AttitudeState& sim, const ReferenceTrace& ref, TopicId topic);

enum class CurveKind { affected_cumulative, stance_distribution };

struct Curve {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

Curve curve_extract(std::span<const RoundTrace> trace, CurveKind kind);

// Replays the per-round transitions from an all-unknown start and scores
// the reconstructed state against the reference after every round.
Curve accuracy_series(std::span<const RoundTrace> trace, const ReferenceTrace& ref, TopicId topic,
                      std::size_t nodes);

} // namespace dmnai
