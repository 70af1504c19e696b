#pragma once

#include <cstdint>
#include <vector>

#include "dmnai/stance.hpp"

namespace dmnai {

struct StanceTransition {
    NodeId node = 0;
    StanceValue from = stance::kUnknown;
    StanceValue to = stance::kUnknown;
};

// One row of a run trace. Row 0 is the post-seeding snapshot; rows 1..K
// cover the dissemination rounds. Counts are taken at the end of the round.
struct RoundTrace {
    std::uint32_t round = 0;
    std::uint64_t new_total = 0;       // nodes whose stance left -1 this round
    std::uint64_t new_adjacent = 0;    // of those, activated in the adjacent phase
    std::uint64_t new_nonadjacent = 0; // of those, activated in the non-adjacent phase
    std::uint64_t att_adjacent = 0;    // attitude updates applied in the adjacent phase
    std::uint64_t att_nonadjacent = 0; // attitude updates applied in the non-adjacent phase
    std::uint64_t count_positive = 0;  // stance 0
    std::uint64_t count_neutral = 0;   // stance 0.5
    std::uint64_t count_negative = 0;  // stance 1
    std::uint64_t count_unknown = 0;
    std::uint64_t cumulative_affected = 0; // node_count - count_unknown
    std::uint64_t adj_visited_size = 0;
    std::vector<StanceTransition> transitions; // every stance change this round
};

struct TopicRun {
    TopicId topic = 0;
    std::vector<RoundTrace> rounds;
};

} // namespace dmnai
