#include "dmnai/ic.hpp"

#include <string>

#include "dmnai/error.hpp"
#include "dmnai/stance.hpp"

namespace dmnai {

void ICConfig::validate() const {
    if (edge_probability < 0.0 || edge_probability > 1.0) {
        throw ValidationError("edge_probability must be in [0, 1]");
    }
    for (const double p : edge_probabilities) {
        if (p < 0.0 || p > 1.0) {
            throw ValidationError("per-edge probabilities must be in [0, 1]");
        }
    }
}

namespace {

RoundTrace ic_row(std::uint32_t round, std::uint64_t active_total, std::size_t nodes) {
    RoundTrace row;
    row.round = round;
    row.count_negative = active_total;
    row.count_unknown = nodes - active_total;
    row.cumulative_affected = active_total;
    return row;
}

} // namespace

ICResult run_ic(const SocialGraph& g, std::span<const NodeId> seeds, const ICConfig& cfg,
                RngStream& rng) {
    cfg.validate();
    if (!cfg.edge_probabilities.empty() && cfg.edge_probabilities.size() != g.edge_count()) {
        throw ValidationError("edge_probabilities must have one entry per edge");
    }

    ICResult res;
    res.active.assign(g.node_count(), 0);
    for (const NodeId s : seeds) {
        if (s >= g.node_count()) {
            throw ValidationError("seed node index out of range");
        }
        if (res.active[s]) {
            throw ValidationError("duplicate seed node '" + g.name(s) + "'");
        }
        res.active[s] = 1;
        res.activation_order.push_back(s);
    }
    res.activated_total = res.activation_order.size();

    RoundTrace head = ic_row(0, res.activated_total, g.node_count());
    for (const NodeId s : seeds) {
        head.transitions.push_back({s, stance::kUnknown, stance::kNegative});
        ++head.new_total;
    }
    res.rounds.push_back(std::move(head));

    // Frontier rounds: every node activated in the previous round flips one
    // coin per out-edge whose target is still inactive. A node activates at
    // most once, so no edge is ever flipped twice.
    std::size_t frontier_begin = 0;
    std::uint32_t round = 0;
    while (frontier_begin < res.activation_order.size()) {
        if (cfg.max_rounds != 0 && round >= cfg.max_rounds) {
            break;
        }
        ++round;
        const std::size_t frontier_end = res.activation_order.size();
        RoundTrace row;
        row.round = round;
        std::size_t attempts = 0;
        for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
            const NodeId u = res.activation_order[i];
            const auto nbrs = g.out_neighbors(u);
            const std::uint32_t edge_base = g.out_edge_begin(u);
            for (std::size_t j = 0; j < nbrs.size(); ++j) {
                const NodeId v = nbrs[j];
                if (res.active[v]) {
                    continue;
                }
                const double p = cfg.edge_probabilities.empty()
                                     ? cfg.edge_probability
                                     : cfg.edge_probabilities[edge_base + j];
                ++attempts;
                if (!bernoulli(rng, p)) {
                    continue;
                }
                res.active[v] = 1;
                res.activation_order.push_back(v);
                row.transitions.push_back({v, stance::kUnknown, stance::kNegative});
                ++row.new_total;
                ++row.new_adjacent;
            }
        }
        if (attempts == 0) {
            break;
        }
        frontier_begin = frontier_end;
        res.activated_total = res.activation_order.size();
        const RoundTrace counts = ic_row(round, res.activated_total, g.node_count());
        row.count_negative = counts.count_negative;
        row.count_unknown = counts.count_unknown;
        row.cumulative_affected = counts.cumulative_affected;
        res.rounds.push_back(std::move(row));
    }
    return res;
}

} // namespace dmnai
