#include "dmnai/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dmnai/error.hpp"

namespace dmnai {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) {
        tokens.push_back(tok);
    }
    return tokens;
}

// Strip a trailing '#' comment, if any.
std::string strip_comment(const std::string& line) {
    const auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

StanceValue parse_stance_token(const std::string& tok, std::size_t line_no) {
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(tok, &consumed);
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_no) + ": invalid stance '" + tok + "'");
    }
    if (consumed != tok.size() || !stance::on_grid(value)) {
        throw ParseError("line " + std::to_string(line_no) + ": stance '" + tok +
                         "' is not one of -1, 0, 0.5, 1");
    }
    return value;
}

} // namespace

SocialGraph::SocialGraph(std::vector<std::string> names,
                         std::vector<std::pair<NodeId, NodeId>> edges,
                         TopicId topics)
    : names_(std::move(names)), topics_(topics) {
    if (topics_ == 0) {
        throw ValidationError("topic count must be positive");
    }
    index_.reserve(names_.size());
    for (NodeId i = 0; i < names_.size(); ++i) {
        auto [it, inserted] = index_.emplace(names_[i], i);
        if (!inserted) {
            throw ValidationError("duplicate node id '" + names_[i] + "'");
        }
    }
    const std::size_t n = names_.size();
    for (auto [u, v] : edges) {
        if (u >= n || v >= n) {
            throw ValidationError("edge endpoint out of range");
        }
        if (u == v) {
            throw ValidationError("self-loop on node '" + names_[u] + "'");
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);

    out_offsets_.assign(n + 1, 0);
    in_offsets_.assign(n + 1, 0);
    for (auto [u, v] : edges_) {
        ++out_offsets_[u + 1];
        ++in_offsets_[v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
        out_offsets_[i + 1] += out_offsets_[i];
        in_offsets_[i + 1] += in_offsets_[i];
    }
    out_targets_.resize(edges_.size());
    in_sources_.resize(edges_.size());
    std::vector<std::uint32_t> in_fill(in_offsets_.begin(), in_offsets_.end() - 1);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        out_targets_[e] = edges_[e].second; // edges sorted by source, so out-CSR is just the target column
        in_sources_[in_fill[edges_[e].second]++] = edges_[e].first;
    }
    for (std::size_t v = 0; v < n; ++v) {
        std::sort(in_sources_.begin() + in_offsets_[v], in_sources_.begin() + in_offsets_[v + 1]);
    }
}

std::optional<NodeId> SocialGraph::find(std::string_view name) const {
    const auto it = index_.find(std::string(name));
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::span<const NodeId> SocialGraph::out_neighbors(NodeId v) const {
    return {out_targets_.data() + out_offsets_[v],
            out_targets_.data() + out_offsets_[v + 1]};
}

std::span<const NodeId> SocialGraph::in_neighbors(NodeId v) const {
    return {in_sources_.data() + in_offsets_[v],
            in_sources_.data() + in_offsets_[v + 1]};
}

std::size_t SocialGraph::out_degree(NodeId v) const {
    return out_offsets_[v + 1] - out_offsets_[v];
}

std::optional<std::uint32_t> SocialGraph::edge_index(NodeId u, NodeId v) const {
    const auto it = std::lower_bound(edges_.begin(), edges_.end(), std::make_pair(u, v));
    if (it == edges_.end() || *it != std::make_pair(u, v)) {
        return std::nullopt;
    }
    return static_cast<std::uint32_t>(it - edges_.begin());
}

SocialGraph load_edge_list(std::istream& in, TopicId topics) {
    std::vector<std::string> names;
    std::unordered_map<std::string, NodeId> index;
    std::vector<std::pair<NodeId, NodeId>> edges;

    const auto intern = [&](const std::string& tok) -> NodeId {
        const auto it = index.find(tok);
        if (it != index.end()) {
            return it->second;
        }
        const NodeId id = static_cast<NodeId>(names.size());
        names.push_back(tok);
        index.emplace(tok, id);
        return id;
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto tokens = tokenize(strip_comment(line));
        if (tokens.empty()) {
            continue;
        }
        if (tokens.size() != 2) {
            throw ParseError("line " + std::to_string(line_no) + ": expected 'u v', got " +
                             std::to_string(tokens.size()) + " tokens");
        }
        if (tokens[0] == tokens[1]) {
            throw ParseError("line " + std::to_string(line_no) + ": self-loop on '" + tokens[0] + "'");
        }
        const NodeId u = intern(tokens[0]);
        const NodeId v = intern(tokens[1]);
        edges.emplace_back(u, v);
    }
    if (names.empty()) {
        throw ParseError("empty edge list");
    }
    return SocialGraph(std::move(names), std::move(edges), topics);
}

void save_edge_list(const SocialGraph& g, std::ostream& out) {
    out << "# nodes " << g.node_count() << " edges " << g.edge_count()
        << " topics " << g.topic_count() << "\n";
    for (auto [u, v] : g.edges()) {
        out << g.name(u) << ' ' << g.name(v) << "\n";
    }
}

SocialGraph load_graph_json(std::istream& in) {
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid graph JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("edges")) {
        throw ParseError("graph JSON must contain 'nodes' and 'edges'");
    }
    std::vector<std::string> names = doc.at("nodes").get<std::vector<std::string>>();
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (const auto& e : doc.at("edges")) {
        if (!e.is_array() || e.size() != 2) {
            throw ParseError("graph JSON edge must be a [u, v] pair");
        }
        edges.emplace_back(e[0].get<NodeId>(), e[1].get<NodeId>());
    }
    const TopicId topics = doc.value("topics", TopicId{1});
    return SocialGraph(std::move(names), std::move(edges), topics);
}

void save_graph_json(const SocialGraph& g, std::ostream& out) {
    nlohmann::json doc;
    auto& nodes = doc["nodes"] = nlohmann::json::array();
    for (NodeId v = 0; v < g.node_count(); ++v) {
        nodes.push_back(g.name(v));
    }
    auto& edges = doc["edges"] = nlohmann::json::array();
    for (auto [u, v] : g.edges()) {
        edges.push_back({u, v});
    }
    doc["topics"] = g.topic_count();
    out << doc.dump(2) << "\n";
}

std::vector<SeedAssignment> load_seeds(std::istream& in, const SocialGraph& g, TopicId topics) {
    std::vector<SeedAssignment> seeds;
    std::set<std::pair<NodeId, TopicId>> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto tokens = tokenize(strip_comment(line));
        if (tokens.empty()) {
            continue;
        }
        if (tokens.size() != 3) {
            throw ParseError("line " + std::to_string(line_no) +
                             ": expected 'node topic stance', got " +
                             std::to_string(tokens.size()) + " tokens");
        }
        const auto node = g.find(tokens[0]);
        if (!node) {
            throw ParseError("line " + std::to_string(line_no) + ": unknown node '" + tokens[0] + "'");
        }
        unsigned long topic = 0;
        try {
            topic = std::stoul(tokens[1]);
        } catch (const std::exception&) {
            throw ParseError("line " + std::to_string(line_no) + ": invalid topic '" + tokens[1] + "'");
        }
        if (topic >= topics) {
            throw ParseError("line " + std::to_string(line_no) + ": topic " + tokens[1] +
                             " out of range [0, " + std::to_string(topics) + ")");
        }
        const StanceValue value = parse_stance_token(tokens[2], line_no);
        if (!stance::known(value)) {
            throw ParseError("line " + std::to_string(line_no) + ": seed stance must be 0, 0.5 or 1");
        }
        if (!seen.emplace(*node, static_cast<TopicId>(topic)).second) {
            throw ParseError("line " + std::to_string(line_no) + ": duplicate seed for node '" +
                             tokens[0] + "' topic " + tokens[1]);
        }
        seeds.push_back({*node, static_cast<TopicId>(topic), value});
    }
    return seeds;
}

void save_seeds(std::span<const SeedAssignment> seeds, const SocialGraph& g, std::ostream& out) {
    for (const auto& s : seeds) {
        out << g.name(s.node) << ' ' << s.topic << ' ';
        if (s.stance == stance::kNeutral) {
            out << "0.5";
        } else {
            out << static_cast<int>(s.stance);
        }
        out << "\n";
    }
}

} // namespace dmnai
