#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dmnai/graph.hpp"
#include "dmnai/rng.hpp"
#include "dmnai/trace.hpp"

namespace dmnai {

struct ICConfig {
    double edge_probability = 0.1;
    // optional per-edge override, indexed like SocialGraph::edges()
    std::vector<double> edge_probabilities;
    std::uint32_t max_rounds = 0; // 0 means run until the frontier dies out

    void validate() const;
};

struct ICResult {
    std::vector<std::uint8_t> active;       // one flag per node
    std::vector<NodeId> activation_order;   // seeds first, then by activation
    std::vector<RoundTrace> rounds;         // row 0 is the seeded snapshot
    std::uint64_t activated_total = 0;
};

// Independent cascade over out-edges: each newly active node gets one coin
// flip per out-edge towards a still-inactive target, once per edge ever.
ICResult run_ic(const SocialGraph& g, std::span<const NodeId> seeds, const ICConfig& cfg,
                RngStream& rng);

} // namespace dmnai
