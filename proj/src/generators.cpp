#include "dmnai/generators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dmnai/error.hpp"

namespace dmnai {

namespace {

std::vector<std::string> index_names(std::size_t n) {
    std::vector<std::string> names(n);
    for (std::size_t i = 0; i < n; ++i) {
        names[i] = std::to_string(i);
    }
    return names;
}

std::vector<std::pair<NodeId, NodeId>> random_edges(std::size_t n, double p, RngStream& rng) {
    if (p < 0.0 || p > 1.0) {
        throw ValidationError("edge probability must be in [0, 1]");
    }
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = 0; v < n; ++v) {
            if (u != v && bernoulli(rng, p)) {
                edges.emplace_back(u, v);
            }
        }
    }
    return edges;
}

// Each node i >= 1 attaches min(d, i) out-edges to distinct earlier nodes,
// picked proportionally to degree via an endpoint bag.
std::vector<std::pair<NodeId, NodeId>> preferential_edges(std::size_t n, double edge_param,
                                                          RngStream& rng) {
    const double rounded = std::floor(edge_param + 0.5);
    if (rounded < 1.0 || rounded != edge_param) {
        throw ValidationError("preferential out-degree must be a positive integer");
    }
    const std::size_t d = static_cast<std::size_t>(rounded);
    if (d >= n) {
        throw ValidationError("preferential out-degree must be smaller than the node count");
    }
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::vector<NodeId> bag{0};
    std::vector<NodeId> picked;
    for (NodeId i = 1; i < n; ++i) {
        const std::size_t k = std::min<std::size_t>(d, i);
        picked.clear();
        while (picked.size() < k) {
            const NodeId t = bag[uniform_below(rng, bag.size())];
            if (std::find(picked.begin(), picked.end(), t) == picked.end()) {
                picked.push_back(t);
            }
        }
        for (const NodeId t : picked) {
            edges.emplace_back(i, t);
            bag.push_back(t);
            bag.push_back(i);
        }
    }
    return edges;
}

} // namespace

SocialGraph generate_synthetic(GraphKind kind, std::size_t n, double edge_param,
                               RngStream& rng, TopicId topics) {
    if (n < 2) {
        throw ValidationError("synthetic graphs need at least 2 nodes");
    }
    auto edges = kind == GraphKind::random ? random_edges(n, edge_param, rng)
                                           : preferential_edges(n, edge_param, rng);
    return SocialGraph(index_names(n), std::move(edges), topics);
}

} // namespace dmnai
