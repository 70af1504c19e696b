#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dmnai/stance.hpp"

namespace dmnai {

// One initially-informed (node, topic, stance) triple. Seed stances are
// always known states; -1 is rejected at load time.
struct SeedAssignment {
    NodeId node = 0;
    TopicId topic = 0;
    StanceValue stance = stance::kNegative;
};

// Immutable directed graph with a topic count. Node ids are opaque strings
// mapped to dense indices in order of first appearance; all engine state is
// index-addressed. Edges are stored sorted by (source, target) with
// duplicates collapsed; self-loops are rejected at construction. Safe to
// share read-only across concurrently running replicas.
class SocialGraph {
public:
    SocialGraph(std::vector<std::string> names,
                std::vector<std::pair<NodeId, NodeId>> edges,
                TopicId topics);

    std::size_t node_count() const { return names_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    TopicId topic_count() const { return topics_; }

    const std::string& name(NodeId v) const { return names_[v]; }
    std::optional<NodeId> find(std::string_view name) const;

    // Neighbor spans are sorted ascending by node index.
    std::span<const NodeId> out_neighbors(NodeId v) const;
    std::span<const NodeId> in_neighbors(NodeId v) const;
    std::size_t out_degree(NodeId v) const;

    // Edges sorted by (source, target); the position in this vector is the
    // canonical edge index used by per-edge attribute arrays. The i-th out
    // neighbor of v has edge index out_edge_begin(v) + i.
    const std::vector<std::pair<NodeId, NodeId>>& edges() const { return edges_; }
    std::uint32_t out_edge_begin(NodeId v) const { return out_offsets_[v]; }
    std::optional<std::uint32_t> edge_index(NodeId u, NodeId v) const;

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, NodeId> index_;
    std::vector<std::pair<NodeId, NodeId>> edges_;
    std::vector<std::uint32_t> out_offsets_;
    std::vector<NodeId> out_targets_;
    std::vector<std::uint32_t> in_offsets_;
    std::vector<NodeId> in_sources_;
    TopicId topics_ = 1;
};

// Text edge list: one "u v" pair per line, '#' starts a comment, node ids
// are arbitrary whitespace-free tokens. Throws ParseError with the line
// number on malformed lines and self-loops; an input without any edge is an
// error.
SocialGraph load_edge_list(std::istream& in, TopicId topics = 1);
void save_edge_list(const SocialGraph& g, std::ostream& out);

// JSON document {"nodes":[...], "edges":[[u,v],...], "topics":z} with edges
// as indices into the nodes array.
SocialGraph load_graph_json(std::istream& in);
void save_graph_json(const SocialGraph& g, std::ostream& out);

// Seed file: lines "node_id topic_index stance" with stance in {0, 0.5, 1}.
// Duplicate (node, topic) pairs, unknown nodes, off-grid stances and
// out-of-range topics are rejected.
std::vector<SeedAssignment> load_seeds(std::istream& in, const SocialGraph& g, TopicId topics);
void save_seeds(std::span<const SeedAssignment> seeds, const SocialGraph& g, std::ostream& out);

} // namespace dmnai
