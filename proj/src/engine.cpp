#include "dmnai/engine.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <set>
#include <string>

#include "dmnai/attitude.hpp"
#include "dmnai/error.hpp"

namespace dmnai {

void SimulationConfig::validate() const {
    kernel.validate();
    if (rounds < 1) {
        throw ValidationError("rounds must be at least 1");
    }
    if (sim_threshold < 0.0 || sim_threshold > 1.0) {
        throw ValidationError("sim_threshold must be in [0, 1]");
    }
    if (r1 < 0.0 || r1 > 1.0 || r2 < 0.0 || r2 > 1.0) {
        throw ValidationError("r1 and r2 must be in [0, 1]");
    }
    if (nadj_mix_aware < 0.5 || nadj_mix_aware > 1.0) {
        throw ValidationError("nadj_mix_aware must be in [0.5, 1]");
    }
    if (init_perseverance < 0.0 || init_perseverance > 1.0) {
        throw ValidationError("init_perseverance must be in [0, 1]");
    }
    for (const double r : edge_rates) {
        if (r < 0.0) {
            throw ValidationError("edge rates must be non-negative");
        }
    }
}

std::size_t sample_size(double r, std::size_t pool) {
    if (pool == 0 || r <= 0.0) {
        return 0;
    }
    const auto k = static_cast<std::size_t>(std::floor(r * static_cast<double>(pool) + 0.5));
    return std::clamp<std::size_t>(k, 1, pool);
}

std::pair<std::size_t, std::size_t> split_mix(std::size_t s, std::size_t aware,
                                              std::size_t unaware, double mix) {
    std::size_t ka = std::min(static_cast<std::size_t>(std::floor(mix * static_cast<double>(s) + 0.5)), aware);
    const std::size_t ku = std::min(s - ka, unaware);
    ka = std::min(aware, ka + (s - ka - ku));
    return {ka, ku};
}

namespace {

enum class Phase { seeding, adjacent, nonadjacent };

void bump(TopicTracking& tr, StanceValue s, std::int64_t delta) {
    std::uint64_t* slot = nullptr;
    if (s == stance::kUnknown) {
        slot = &tr.count_unknown;
    } else if (s == stance::kPositive) {
        slot = &tr.count_positive;
    } else if (s == stance::kNeutral) {
        slot = &tr.count_neutral;
    } else {
        slot = &tr.count_negative;
    }
    *slot = static_cast<std::uint64_t>(static_cast<std::int64_t>(*slot) + delta);
}

// Single point through which every stance write goes: keeps counts, the
// informed set and the trace transitions in sync with the attitude array.
void apply_stance(EngineState& state, TopicTracking& tr, NodeId node, TopicId topic,
                  StanceValue next, RoundTrace& trace, Phase phase) {
    StanceValue& cur = state.attitudes.stance[node * state.attitudes.topics + topic];
    if (next == cur) {
        return;
    }
    assert(stance::on_grid(next));
    trace.transitions.push_back({node, cur, next});
    bump(tr, cur, -1);
    bump(tr, next, +1);
    const bool activated = cur == stance::kUnknown && next != stance::kUnknown;
    cur = next;
    if (activated) {
        assert(!tr.informed_mask[node]);
        tr.informed_mask[node] = 1;
        tr.informed.push_back(node);
        ++trace.new_total;
        if (phase == Phase::adjacent) {
            ++trace.new_adjacent;
        } else if (phase == Phase::nonadjacent) {
            ++trace.new_nonadjacent;
        }
    }
}

void snapshot_counts(RoundTrace& row, const TopicTracking& tr) {
    row.count_positive = tr.count_positive;
    row.count_neutral = tr.count_neutral;
    row.count_negative = tr.count_negative;
    row.count_unknown = tr.count_unknown;
    row.cumulative_affected = tr.affected();
    row.adj_visited_size = tr.adj_visited_count;
}

// Recount from the attitude array and compare against the incremental
// bookkeeping; a mismatch means an engine bug, not a data problem.
void verify_tracking(const EngineState& state, TopicId topic) {
    const auto& tr = state.tracking[topic];
    std::uint64_t c[4] = {0, 0, 0, 0};
    const std::size_t n = state.attitudes.nodes;
    for (NodeId v = 0; v < n; ++v) {
        const StanceValue s = state.attitudes.stance_of(v, topic);
        if (s == stance::kUnknown) {
            ++c[0];
        } else if (s == stance::kPositive) {
            ++c[1];
        } else if (s == stance::kNeutral) {
            ++c[2];
        } else if (s == stance::kNegative) {
            ++c[3];
        } else {
            throw Error("tracking check: off-grid stance");
        }
    }
    if (c[0] != tr.count_unknown || c[1] != tr.count_positive || c[2] != tr.count_neutral ||
        c[3] != tr.count_negative || tr.informed.size() != tr.affected()) {
        throw Error("tracking check: per-stance counts out of sync");
    }
}

struct PairEvent {
    NodeId target;
    NodeId source;
    StanceValue source_stance;
    double rate;
    double probability;
};

} // namespace

EngineState init_engine_state(const SocialGraph& g, std::span<const SeedAssignment> seeds,
                              const SimulationConfig& cfg) {
    const std::size_t n = g.node_count();
    const TopicId z = g.topic_count();
    EngineState state;
    state.attitudes = AttitudeState(n, z, cfg.init_perseverance);
    state.tracking.resize(z);
    for (auto& tr : state.tracking) {
        tr.informed_mask.assign(n, 0);
        tr.adj_visited.assign(n, 0);
        tr.count_unknown = n;
    }
    std::set<std::pair<NodeId, TopicId>> seen;
    for (const auto& s : seeds) {
        if (s.node >= n) {
            throw ValidationError("seed node index out of range");
        }
        if (s.topic >= z) {
            throw ValidationError("seed topic out of range");
        }
        if (!stance::known(s.stance)) {
            throw ValidationError("seed stance must be a known state");
        }
        if (!seen.emplace(s.node, s.topic).second) {
            throw ValidationError("duplicate seed for node '" + g.name(s.node) + "'");
        }
        auto& tr = state.tracking[s.topic];
        state.attitudes.stance[s.node * z + s.topic] = s.stance;
        bump(tr, stance::kUnknown, -1);
        bump(tr, s.stance, +1);
        tr.informed_mask[s.node] = 1;
        tr.informed.push_back(s.node);
    }
    return state;
}

std::uint64_t adjacent_phase(const SocialGraph& g, EngineState& state, TopicId topic,
                             const SimulationConfig& cfg, RoundTrace& trace, Exec exec) {
    auto& tr = state.tracking[topic];
    if (cfg.vadj_scope == VadjScope::per_round) {
        std::fill(tr.adj_visited.begin(), tr.adj_visited.end(), 0);
        tr.adj_visited_count = 0;
    }

    // Gather every (informed sender -> unvisited out-neighbor) pair of the
    // round. Sender stances are captured here, so all influences of a round
    // act on the state as it was when the round began.
    std::vector<PairEvent> events;
    const std::size_t frontier_end = tr.informed.size();
    for (std::size_t i = 0; i < frontier_end; ++i) {
        const NodeId v = tr.informed[i];
        const auto nbrs = g.out_neighbors(v);
        const std::uint32_t edge_base = g.out_edge_begin(v);
        for (std::size_t j = 0; j < nbrs.size(); ++j) {
            const NodeId q = nbrs[j];
            if (tr.adj_visited[q]) {
                continue;
            }
            const double rate =
                cfg.edge_rates.empty() ? cfg.kernel.rate : cfg.edge_rates[edge_base + j];
            events.push_back({q, v, state.attitudes.stance_of(v, topic), rate, 0.0});
        }
    }

    // Probability evaluation is pure per event; the parallel path changes
    // run time only, never the values or their order.
    const auto& att = state.attitudes;
    const std::int64_t ecount = static_cast<std::int64_t>(events.size());
#pragma omp parallel for schedule(static) if (exec == Exec::parallel && ecount >= 256)
    for (std::int64_t i = 0; i < ecount; ++i) {
        auto& e = events[i];
        e.probability =
            influence_probability(att.row(e.source), att.row(e.target), topic, cfg.kernel, e.rate);
    }

    // Group events by target in first-contact order; each target gets one
    // perseverance update over all its events and one stance update from
    // the strongest event (ties to the lowest source index).
    std::vector<std::uint32_t> slot(g.node_count(), UINT32_MAX);
    std::vector<NodeId> order;
    for (const auto& e : events) {
        if (slot[e.target] == UINT32_MAX) {
            slot[e.target] = static_cast<std::uint32_t>(order.size());
            order.push_back(e.target);
        }
    }
    std::vector<std::uint32_t> offsets(order.size() + 1, 0);
    for (const auto& e : events) {
        ++offsets[slot[e.target] + 1];
    }
    for (std::size_t i = 1; i < offsets.size(); ++i) {
        offsets[i] += offsets[i - 1];
    }
    std::vector<InfluenceEvent> grouped(events.size());
    {
        std::vector<std::uint32_t> fill(offsets.begin(), offsets.end() - 1);
        for (const auto& e : events) {
            grouped[fill[slot[e.target]]++] = {e.source, e.source_stance, e.probability};
        }
    }

    std::uint64_t updates = 0;
    for (std::size_t gi = 0; gi < order.size(); ++gi) {
        const NodeId q = order[gi];
        const std::span<const InfluenceEvent> evs{grouped.data() + offsets[gi],
                                                  grouped.data() + offsets[gi + 1]};
        const StanceValue t_q = state.attitudes.stance_of(q, topic);
        double& a = state.attitudes.perseverance[q * state.attitudes.topics + topic];
        a = update_perseverance(a, evs, t_q);
        const InfluenceEvent* best = &evs[0];
        for (const auto& e : evs) {
            if (e.probability > best->probability ||
                (e.probability == best->probability && e.source < best->source)) {
                best = &e;
            }
        }
        const StanceValue next =
            att_update(t_q, best->source_stance, best->probability, a, stance::exposure_settled(t_q));
        apply_stance(state, tr, q, topic, next, trace, Phase::adjacent);
        tr.adj_visited[q] = 1;
        ++tr.adj_visited_count;
        ++updates;
    }
    trace.att_adjacent += updates;
    return updates;
}

std::uint64_t nadj_phase(const SocialGraph& g, EngineState& state, TopicId topic,
                         const SimulationConfig& cfg, RngStream& rng, RoundTrace& trace) {
    auto& tr = state.tracking[topic];

    // Sender sample from the informed set, then receiver sample from the
    // unvisited nodes (topic-aware part first, topic-unaware part second).
    // Draw order is fixed, so the consumed rng stream is too.
    const std::size_t k1 = sample_size(cfg.r1, tr.informed.size());
    const std::vector<NodeId> senders = sample_prefix(tr.informed, k1, rng);

    std::vector<NodeId> aware;
    std::vector<NodeId> unaware;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (tr.adj_visited[v]) {
            continue;
        }
        if (state.attitudes.stance_of(v, topic) != stance::kUnknown) {
            aware.push_back(v);
        } else {
            unaware.push_back(v);
        }
    }
    const std::size_t s = sample_size(cfg.r2, aware.size() + unaware.size());
    const auto [ka, ku] = split_mix(s, aware.size(), unaware.size(), cfg.nadj_mix_aware);
    std::vector<NodeId> receivers = sample_prefix(std::move(aware), ka, rng);
    {
        const std::vector<NodeId> tail = sample_prefix(std::move(unaware), ku, rng);
        receivers.insert(receivers.end(), tail.begin(), tail.end());
    }

    std::uint64_t updates = 0;
    for (const NodeId q : receivers) {
        for (const NodeId v : senders) {
            if (q == v) {
                continue; // no self-influence
            }
            if (cfg.nadj_tau_gate &&
                !(attitude_similarity(state.attitudes.row(q), state.attitudes.row(v)) >
                  cfg.sim_threshold)) {
                continue;
            }
            const StanceValue sender_stance = state.attitudes.stance_of(v, topic);
            const double p = influence_probability(state.attitudes.row(v), state.attitudes.row(q),
                                                   topic, cfg.kernel);
            const InfluenceEvent ev{v, sender_stance, p};
            const StanceValue t_q = state.attitudes.stance_of(q, topic);
            double& a = state.attitudes.perseverance[q * state.attitudes.topics + topic];
            a = update_perseverance(a, {&ev, 1}, t_q);
            const StanceValue next =
                att_update(t_q, sender_stance, p, a, stance::exposure_settled(t_q));
            apply_stance(state, tr, q, topic, next, trace, Phase::nonadjacent);
            ++updates;
        }
    }
    trace.att_nonadjacent += updates;
    return updates;
}

namespace {

RoundTrace seeded_snapshot(const EngineState& state, TopicId topic,
                           std::span<const SeedAssignment> seeds) {
    RoundTrace row;
    row.round = 0;
    for (const auto& s : seeds) {
        if (s.topic == topic) {
            row.transitions.push_back({s.node, stance::kUnknown, s.stance});
            ++row.new_total;
        }
    }
    snapshot_counts(row, state.tracking[topic]);
    return row;
}

void check_inputs(const SocialGraph& g, const SimulationConfig& cfg) {
    cfg.validate();
    if (!cfg.edge_rates.empty() && cfg.edge_rates.size() != g.edge_count()) {
        throw ValidationError("edge_rates must have one entry per edge");
    }
}

SimulationResult finish(EngineState&& state, std::vector<TopicRun>&& runs) {
    SimulationResult res;
    res.topics = std::move(runs);
    for (const auto& run : res.topics) {
        const auto& tr = state.tracking[run.topic];
        TrackingSets sets;
        for (NodeId v = 0; v < state.attitudes.nodes; ++v) {
            const StanceValue s = state.attitudes.stance_of(v, run.topic);
            if (s == stance::kPositive) {
                sets.by_stance[0].push_back(v);
            } else if (s == stance::kNeutral) {
                sets.by_stance[1].push_back(v);
            } else if (s == stance::kNegative) {
                sets.by_stance[2].push_back(v);
            }
            if (tr.adj_visited[v]) {
                sets.adj_visited.push_back(v);
            }
        }
        sets.newly_active = tr.informed;
        res.tracking.push_back(std::move(sets));
    }
    res.final_state = std::move(state.attitudes);
    return res;
}

} // namespace

SimulationResult run_simulation(const SocialGraph& g, std::span<const SeedAssignment> seeds,
                                TopicId topic, const SimulationConfig& cfg, RngStream& rng,
                                Exec exec) {
    if (topic >= g.topic_count()) {
        throw ValidationError("topic index out of range");
    }
    check_inputs(g, cfg);
    EngineState state = init_engine_state(g, seeds, cfg);

    std::vector<TopicRun> runs{{topic, {}}};
    auto& rounds = runs[0].rounds;
    rounds.reserve(cfg.rounds + 1);
    rounds.push_back(seeded_snapshot(state, topic, seeds));
    for (std::uint32_t k = 1; k <= cfg.rounds; ++k) {
        RoundTrace row;
        row.round = k;
        adjacent_phase(g, state, topic, cfg, row, exec);
        nadj_phase(g, state, topic, cfg, rng, row);
        snapshot_counts(row, state.tracking[topic]);
        verify_tracking(state, topic);
        rounds.push_back(std::move(row));
    }
    return finish(std::move(state), std::move(runs));
}

SimulationResult run_all_topics(const SocialGraph& g, std::span<const SeedAssignment> seeds,
                                const SimulationConfig& cfg, RngStream& rng, Exec exec) {
    check_inputs(g, cfg);
    EngineState state = init_engine_state(g, seeds, cfg);

    std::vector<TopicRun> runs(g.topic_count());
    for (TopicId j = 0; j < g.topic_count(); ++j) {
        runs[j].topic = j;
        runs[j].rounds.reserve(cfg.rounds + 1);
        runs[j].rounds.push_back(seeded_snapshot(state, j, seeds));
    }
    for (std::uint32_t k = 1; k <= cfg.rounds; ++k) {
        for (TopicId j = 0; j < g.topic_count(); ++j) {
            RoundTrace row;
            row.round = k;
            adjacent_phase(g, state, j, cfg, row, exec);
            nadj_phase(g, state, j, cfg, rng, row);
            snapshot_counts(row, state.tracking[j]);
            verify_tracking(state, j);
            runs[j].rounds.push_back(std::move(row));
        }
    }
    return finish(std::move(state), std::move(runs));
}

} // namespace dmnai
