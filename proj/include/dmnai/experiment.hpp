#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dmnai/engine.hpp"
#include "dmnai/generators.hpp"
#include "dmnai/graph.hpp"
#include "dmnai/ic.hpp"

namespace dmnai {

// Exactly one of `file` / `generate` is active.
struct GraphSource {
    std::string file;
    bool generate = false;
    GraphKind kind = GraphKind::random;
    std::uint32_t n = 0;
    double edge_param = 0.0;
    TopicId topics = 1; // applies to generators and edge-list files
};

// Exactly one of `file` / `rule` is active.
struct SeedSource {
    std::string file;
    bool rule = false;
    std::string rule_name; // "random-k" or "top-out-degree-k"
    std::uint32_t k = 0;
    std::string stance = "1"; // "0", "0.5", "1" or "mixed"
    TopicId topic = 0;
};

// Fully describes one reproducible experiment. Deliberately excludes the
// output directory and the execution mode: everything in here affects the
// produced trace bytes, nothing outside does.
struct ExperimentSpec {
    std::string model = "dmnai"; // "dmnai" or "ic"
    GraphSource graph;
    SeedSource seeds;
    TopicId topic = 0;
    std::uint32_t replicas = 1;
    SimulationConfig config;
    ICConfig ic;

    void validate() const;
};

nlohmann::json experiment_json(const ExperimentSpec& spec);
ExperimentSpec experiment_from_json(const nlohmann::json& j);

nlohmann::json config_json(const SimulationConfig& cfg);
nlohmann::json ic_json(const ICConfig& cfg);
// Partial updates: only keys present in `j` are applied; unknown keys are
// rejected so config typos fail loudly instead of silently using defaults.
void config_from_json(const nlohmann::json& j, SimulationConfig& cfg);
void ic_from_json(const nlohmann::json& j, ICConfig& cfg);

struct ResolvedExperiment {
    SocialGraph graph;
    std::vector<SeedAssignment> seeds;
};

// Loads or generates the graph and seed set. Generator and seed-rule draws
// come from streams derived from (master_seed, reserved stream index), so
// they are independent of the replica streams.
ResolvedExperiment resolve(const ExperimentSpec& spec);

// The graph half of resolve(), for consumers that only score traces.
SocialGraph resolve_graph(const ExperimentSpec& spec);

std::vector<SeedAssignment> seeds_from_rule(const SeedSource& src, const SocialGraph& g,
                                            std::uint64_t master_seed);

struct ExperimentOutput {
    std::vector<std::vector<RoundTrace>> traces;        // one per replica
    std::vector<std::vector<StanceValue>> final_stance; // traced-topic column per replica
};

ExperimentOutput run_experiment(const ExperimentSpec& spec, const ResolvedExperiment& res,
                                Exec exec = Exec::serial);

// Writes replica_<i>.json, replica_<i>.csv, aggregate.csv and the two
// replica-0 curve files into `dir` (created if missing).
void write_outputs(const std::string& dir, const ExperimentSpec& spec,
                   const ExperimentOutput& out);

// Reads one replica_<i>.json back, embedded experiment included.
struct LoadedTrace {
    ExperimentSpec spec;
    std::uint32_t replica = 0;
    std::vector<RoundTrace> rounds;
    std::vector<StanceValue> final_stance;
};

LoadedTrace load_replica_json(std::istream& in);

StanceValue parse_stance_token(const std::string& token);

} // namespace dmnai
