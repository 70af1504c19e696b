#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dmnai/graph.hpp"
#include "dmnai/kernel.hpp"
#include "dmnai/rng.hpp"
#include "dmnai/stance.hpp"
#include "dmnai/trace.hpp"

namespace dmnai {

// Whether the visited set of the adjacent phase survives across rounds
// (each node gets at most one adjacent update per run) or resets per round.
enum class VadjScope { persistent, per_round };

// How the heavy inner loops run. Both modes produce identical traces; the
// parallel mode only farms out pure per-event probability evaluations.
enum class Exec { serial, parallel };

struct SimulationConfig {
    KernelParams kernel;
    std::uint32_t rounds = 10;          // K
    double sim_threshold = 0.3;         // tau gate for non-adjacent pairs
    double r1 = 0.5;                    // informed-set sampling fraction
    double r2 = 0.1;                    // non-adjacent-set sampling fraction
    double nadj_mix_aware = 0.7;        // topic-aware share of the non-adjacent sample, in [0.5, 1]
    double init_perseverance = 0.5;
    VadjScope vadj_scope = VadjScope::persistent;
    bool nadj_tau_gate = true;
    std::uint64_t master_seed = 0;
    // Optional per-edge rate overrides, indexed like SocialGraph::edges().
    // Empty means the global kernel rate everywhere.
    std::vector<double> edge_rates;

    void validate() const; // throws ValidationError
};

// Dense per-(node, topic) stance and perseverance storage, row-major by
// node so one node's full attitude vector is a contiguous span. Confined to
// a single run; replicas each own one.
struct AttitudeState {
    std::size_t nodes = 0;
    TopicId topics = 1;
    std::vector<StanceValue> stance;
    std::vector<double> perseverance;

    AttitudeState() = default;
    AttitudeState(std::size_t node_count, TopicId topic_count, double init_perseverance)
        : nodes(node_count),
          topics(topic_count),
          stance(node_count * topic_count, stance::kUnknown),
          perseverance(node_count * topic_count, init_perseverance) {}

    StanceValue stance_of(NodeId v, TopicId t) const { return stance[v * topics + t]; }
    double perseverance_of(NodeId v, TopicId t) const { return perseverance[v * topics + t]; }
    std::span<const StanceValue> row(NodeId v) const {
        return {stance.data() + v * topics, topics};
    }
};

// Mutable per-topic bookkeeping of one run: the informed set in insertion
// order, the adjacent-phase visited set, and per-stance counts kept in sync
// with AttitudeState.
struct TopicTracking {
    std::vector<NodeId> informed; // insertion order, grows monotonically
    std::vector<char> informed_mask;
    std::vector<char> adj_visited;
    std::uint64_t count_positive = 0;
    std::uint64_t count_neutral = 0;
    std::uint64_t count_negative = 0;
    std::uint64_t count_unknown = 0;

    std::uint64_t adj_visited_count = 0;
    std::uint64_t affected() const { return count_positive + count_neutral + count_negative; }
};

struct EngineState {
    AttitudeState attitudes;
    std::vector<TopicTracking> tracking; // one per topic
};

// Final per-topic tracking sets in a test-friendly form.
struct TrackingSets {
    std::array<std::vector<NodeId>, 3> by_stance; // positive, neutral, negative
    std::vector<NodeId> newly_active;             // informed set, insertion order
    std::vector<NodeId> adj_visited;
};

struct SimulationResult {
    AttitudeState final_state;
    std::vector<TopicRun> topics;
    std::vector<TrackingSets> tracking; // aligned with `topics`
};

// Seeds applied, everything else unknown. Seeds for other topics still
// enter the attitude vectors and therefore the similarity computations.
EngineState init_engine_state(const SocialGraph& g, std::span<const SeedAssignment> seeds,
                              const SimulationConfig& cfg);

// One adjacent phase for `topic`: every informed node influences the
// out-neighbors not yet visited, influences on a shared target are grouped
// (the perseverance update sees all of them, the stance update uses the
// strongest), and activations extend the informed set for the next phase.
// Returns the number of attitude updates applied. Deterministic; `exec`
// only parallelizes the pure probability evaluations.
std::uint64_t adjacent_phase(const SocialGraph& g, EngineState& state, TopicId topic,
                             const SimulationConfig& cfg, RoundTrace& trace,
                             Exec exec = Exec::serial);

// One non-adjacent phase for `topic`: samples round(r1 * |informed|)
// informed senders and round(r2 * |unvisited|) receivers (a topic-aware /
// topic-unaware mix), then applies per-pair updates gated by the similarity
// threshold. Returns the number of attitude updates applied.
std::uint64_t nadj_phase(const SocialGraph& g, EngineState& state, TopicId topic,
                         const SimulationConfig& cfg, RngStream& rng, RoundTrace& trace);

// Full run for one topic: K rounds of adjacent + non-adjacent phases.
// The trace starts with a round-0 snapshot of the seeded state.
SimulationResult run_simulation(const SocialGraph& g, std::span<const SeedAssignment> seeds,
                                TopicId topic, const SimulationConfig& cfg, RngStream& rng,
                                Exec exec = Exec::serial);

// Multi-topic run: within every round, topics take their adjacent and
// non-adjacent phases in ascending index order, sharing one attitude state.
SimulationResult run_all_topics(const SocialGraph& g, std::span<const SeedAssignment> seeds,
                                const SimulationConfig& cfg, RngStream& rng,
                                Exec exec = Exec::serial);

// Sample size under fraction r: round half-up, and a nonempty pool with
// r > 0 yields at least one element.
std::size_t sample_size(double r, std::size_t pool);

// Split a non-adjacent sample of size s between a topic-aware pool of size
// `aware` and a topic-unaware pool of size `unaware`, aiming at `mix` aware
// share and spilling over when one pool is short.
std::pair<std::size_t, std::size_t> split_mix(std::size_t s, std::size_t aware,
                                              std::size_t unaware, double mix);

} // namespace dmnai
