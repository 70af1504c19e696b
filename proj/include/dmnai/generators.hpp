#pragma once

#include <cstddef>

#include "dmnai/graph.hpp"
#include "dmnai/rng.hpp"

namespace dmnai {

enum class GraphKind {
    random,       // directed G(n, p): each ordered pair independently with probability edge_param
    preferential, // directed preferential attachment with edge_param out-edges per new node
};

// Synthetic stand-ins for real microblog graphs. Deterministic for a fixed
// rng state; node names are the decimal indices "0".."n-1".
SocialGraph generate_synthetic(GraphKind kind, std::size_t n, double edge_param,
                               RngStream& rng, TopicId topics = 1);

} // namespace dmnai
