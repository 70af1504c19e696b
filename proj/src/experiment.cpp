#include "dmnai/experiment.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "dmnai/error.hpp"
#include "dmnai/metrics.hpp"
#include "dmnai/replica.hpp"
#include "dmnai/trace_io.hpp"

namespace dmnai {

using nlohmann::json;

StanceValue parse_stance_token(const std::string& token) {
    if (token == "-1") {
        return stance::kUnknown;
    }
    if (token == "0") {
        return stance::kPositive;
    }
    if (token == "0.5") {
        return stance::kNeutral;
    }
    if (token == "1") {
        return stance::kNegative;
    }
    throw ValidationError("stance must be one of -1, 0, 0.5, 1 (got '" + token + "')");
}

void ExperimentSpec::validate() const {
    if (model != "dmnai" && model != "ic") {
        throw ValidationError("model must be 'dmnai' or 'ic'");
    }
    const bool has_file = !graph.file.empty();
    if (has_file == graph.generate) {
        throw ValidationError("exactly one graph source required (file or generator)");
    }
    if (graph.generate && graph.n == 0) {
        throw ValidationError("generated graphs need n >= 1");
    }
    const bool seeds_file = !seeds.file.empty();
    if (seeds_file == seeds.rule) {
        throw ValidationError("exactly one seed source required (file or rule)");
    }
    if (seeds.rule) {
        if (seeds.rule_name != "random-k" && seeds.rule_name != "top-out-degree-k") {
            throw ValidationError("seed rule must be 'random-k' or 'top-out-degree-k'");
        }
        if (seeds.stance != "mixed") {
            const StanceValue s = parse_stance_token(seeds.stance);
            if (!stance::known(s)) {
                throw ValidationError("seed stance must be a known state or 'mixed'");
            }
        }
    }
    if (replicas < 1) {
        throw ValidationError("replicas must be at least 1");
    }
    config.validate();
    ic.validate();
}

namespace {

std::string kind_name(GraphKind k) {
    return k == GraphKind::random ? "random" : "preferential";
}

GraphKind kind_from_name(const std::string& s) {
    if (s == "random") {
        return GraphKind::random;
    }
    if (s == "preferential") {
        return GraphKind::preferential;
    }
    throw ValidationError("graph kind must be 'random' or 'preferential'");
}

template <typename T>
T get_num(const json& j, const char* key) {
    if (!j.is_number()) {
        throw ValidationError(std::string("'") + key + "' must be a number");
    }
    return j.get<T>();
}

} // namespace

json config_json(const SimulationConfig& cfg) {
    json k{{"lambda", cfg.kernel.lambda},
           {"mu", cfg.kernel.mu},
           {"rate", cfg.kernel.rate},
           {"horizon", cfg.kernel.horizon},
           {"transfer",
            cfg.kernel.transfer == TransferInterpretation::literal ? "literal" : "complement"}};
    json j{{"rounds", cfg.rounds},
           {"sim_threshold", cfg.sim_threshold},
           {"r1", cfg.r1},
           {"r2", cfg.r2},
           {"nadj_mix_aware", cfg.nadj_mix_aware},
           {"init_perseverance", cfg.init_perseverance},
           {"vadj_scope", cfg.vadj_scope == VadjScope::persistent ? "persistent" : "per_round"},
           {"nadj_tau_gate", cfg.nadj_tau_gate},
           {"master_seed", cfg.master_seed},
           {"kernel", std::move(k)}};
    if (!cfg.edge_rates.empty()) {
        j["edge_rates"] = cfg.edge_rates;
    }
    return j;
}

void config_from_json(const json& j, SimulationConfig& cfg) {
    if (!j.is_object()) {
        throw ValidationError("config must be a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        if (key == "rounds") {
            cfg.rounds = get_num<std::uint32_t>(value, "rounds");
        } else if (key == "sim_threshold") {
            cfg.sim_threshold = get_num<double>(value, "sim_threshold");
        } else if (key == "r1") {
            cfg.r1 = get_num<double>(value, "r1");
        } else if (key == "r2") {
            cfg.r2 = get_num<double>(value, "r2");
        } else if (key == "nadj_mix_aware") {
            cfg.nadj_mix_aware = get_num<double>(value, "nadj_mix_aware");
        } else if (key == "init_perseverance") {
            cfg.init_perseverance = get_num<double>(value, "init_perseverance");
        } else if (key == "vadj_scope") {
            const std::string s = value.get<std::string>();
            if (s == "persistent") {
                cfg.vadj_scope = VadjScope::persistent;
            } else if (s == "per_round") {
                cfg.vadj_scope = VadjScope::per_round;
            } else {
                throw ValidationError("vadj_scope must be 'persistent' or 'per_round'");
            }
        } else if (key == "nadj_tau_gate") {
            if (!value.is_boolean()) {
                throw ValidationError("'nadj_tau_gate' must be a boolean");
            }
            cfg.nadj_tau_gate = value.get<bool>();
        } else if (key == "master_seed") {
            cfg.master_seed = get_num<std::uint64_t>(value, "master_seed");
        } else if (key == "edge_rates") {
            cfg.edge_rates = value.get<std::vector<double>>();
        } else if (key == "kernel") {
            for (const auto& [kk, kv] : value.items()) {
                if (kk == "lambda") {
                    cfg.kernel.lambda = get_num<double>(kv, "lambda");
                } else if (kk == "mu") {
                    cfg.kernel.mu = get_num<double>(kv, "mu");
                } else if (kk == "rate") {
                    cfg.kernel.rate = get_num<double>(kv, "rate");
                } else if (kk == "horizon") {
                    cfg.kernel.horizon = get_num<double>(kv, "horizon");
                } else if (kk == "transfer") {
                    const std::string s = kv.get<std::string>();
                    if (s == "literal") {
                        cfg.kernel.transfer = TransferInterpretation::literal;
                    } else if (s == "complement") {
                        cfg.kernel.transfer = TransferInterpretation::complement;
                    } else {
                        throw ValidationError("transfer must be 'literal' or 'complement'");
                    }
                } else {
                    throw ValidationError("unknown kernel config key '" + kk + "'");
                }
            }
        } else {
            throw ValidationError("unknown config key '" + key + "'");
        }
    }
}

json ic_json(const ICConfig& cfg) {
    json j{{"edge_probability", cfg.edge_probability}, {"max_rounds", cfg.max_rounds}};
    if (!cfg.edge_probabilities.empty()) {
        j["edge_probabilities"] = cfg.edge_probabilities;
    }
    return j;
}

void ic_from_json(const json& j, ICConfig& cfg) {
    if (!j.is_object()) {
        throw ValidationError("ic config must be a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        if (key == "edge_probability") {
            cfg.edge_probability = get_num<double>(value, "edge_probability");
        } else if (key == "edge_probabilities") {
            cfg.edge_probabilities = value.get<std::vector<double>>();
        } else if (key == "max_rounds") {
            cfg.max_rounds = get_num<std::uint32_t>(value, "max_rounds");
        } else {
            throw ValidationError("unknown ic config key '" + key + "'");
        }
    }
}

json experiment_json(const ExperimentSpec& spec) {
    json graph;
    if (spec.graph.generate) {
        graph["generate"] = {{"kind", kind_name(spec.graph.kind)},
                             {"n", spec.graph.n},
                             {"edge_param", spec.graph.edge_param},
                             {"topics", spec.graph.topics}};
    } else {
        graph["file"] = spec.graph.file;
        graph["topics"] = spec.graph.topics;
    }
    json seeds;
    if (spec.seeds.rule) {
        seeds["rule"] = {{"name", spec.seeds.rule_name},
                         {"k", spec.seeds.k},
                         {"stance", spec.seeds.stance},
                         {"topic", spec.seeds.topic}};
    } else {
        seeds["file"] = spec.seeds.file;
    }
    return json{{"model", spec.model},        {"graph", std::move(graph)},
                {"seeds", std::move(seeds)},  {"topic", spec.topic},
                {"replicas", spec.replicas},  {"config", config_json(spec.config)},
                {"ic", ic_json(spec.ic)}};
}

ExperimentSpec experiment_from_json(const json& j) {
    if (!j.is_object()) {
        throw ValidationError("experiment must be a JSON object");
    }
    ExperimentSpec spec;
    for (const auto& [key, value] : j.items()) {
        if (key == "model") {
            spec.model = value.get<std::string>();
        } else if (key == "graph") {
            if (value.contains("file")) {
                spec.graph.file = value.at("file").get<std::string>();
                if (value.contains("topics")) {
                    spec.graph.topics = get_num<TopicId>(value.at("topics"), "topics");
                }
            } else if (value.contains("generate")) {
                const json& g = value.at("generate");
                if (!g.is_object()) {
                    throw ValidationError("graph 'generate' must be an object");
                }
                spec.graph.generate = true;
                spec.graph.kind = kind_from_name(g.at("kind").get<std::string>());
                spec.graph.n = get_num<std::uint32_t>(g.at("n"), "n");
                spec.graph.edge_param = get_num<double>(g.at("edge_param"), "edge_param");
                if (g.contains("topics")) {
                    spec.graph.topics = get_num<TopicId>(g.at("topics"), "topics");
                }
            } else {
                throw ValidationError("graph source needs 'file' or 'generate'");
            }
        } else if (key == "seeds") {
            if (value.contains("file")) {
                spec.seeds.file = value.at("file").get<std::string>();
            } else if (value.contains("rule")) {
                const json& r = value.at("rule");
                if (!r.is_object()) {
                    throw ValidationError("seed 'rule' must be an object");
                }
                spec.seeds.rule = true;
                spec.seeds.rule_name = r.at("name").get<std::string>();
                spec.seeds.k = get_num<std::uint32_t>(r.at("k"), "k");
                if (r.contains("stance")) {
                    spec.seeds.stance = r.at("stance").get<std::string>();
                }
                if (r.contains("topic")) {
                    spec.seeds.topic = get_num<TopicId>(r.at("topic"), "topic");
                }
            } else {
                throw ValidationError("seed source needs 'file' or 'rule'");
            }
        } else if (key == "topic") {
            spec.topic = get_num<TopicId>(value, "topic");
        } else if (key == "replicas") {
            spec.replicas = get_num<std::uint32_t>(value, "replicas");
        } else if (key == "config") {
            config_from_json(value, spec.config);
        } else if (key == "ic") {
            ic_from_json(value, spec.ic);
        } else {
            throw ValidationError("unknown experiment key '" + key + "'");
        }
    }
    return spec;
}

std::vector<SeedAssignment> seeds_from_rule(const SeedSource& src, const SocialGraph& g,
                                            std::uint64_t master_seed) {
    if (src.k > g.node_count()) {
        throw ValidationError("seed rule asks for more nodes than the graph has");
    }
    std::vector<NodeId> chosen;
    if (src.rule_name == "random-k") {
        std::vector<NodeId> pool(g.node_count());
        std::iota(pool.begin(), pool.end(), 0u);
        RngStream rng = derive_replica_rng(master_seed, kSeedRuleStream);
        chosen = sample_prefix(std::move(pool), src.k, rng);
    } else if (src.rule_name == "top-out-degree-k") {
        std::vector<NodeId> pool(g.node_count());
        std::iota(pool.begin(), pool.end(), 0u);
        std::stable_sort(pool.begin(), pool.end(), [&g](NodeId a, NodeId b) {
            return g.out_degree(a) > g.out_degree(b);
        });
        pool.resize(src.k);
        chosen = std::move(pool);
    } else {
        throw ValidationError("unknown seed rule '" + src.rule_name + "'");
    }
    if (src.topic >= g.topic_count()) {
        throw ValidationError("seed rule topic out of range");
    }
    static constexpr StanceValue kMixedCycle[3] = {stance::kPositive, stance::kNeutral,
                                                   stance::kNegative};
    std::vector<SeedAssignment> seeds;
    seeds.reserve(chosen.size());
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        const StanceValue s =
            src.stance == "mixed" ? kMixedCycle[i % 3] : parse_stance_token(src.stance);
        seeds.push_back({chosen[i], src.topic, s});
    }
    return seeds;
}

SocialGraph resolve_graph(const ExperimentSpec& spec) {
    spec.validate();
    if (spec.graph.generate) {
        RngStream rng = derive_replica_rng(spec.config.master_seed, kGraphStream);
        return generate_synthetic(spec.graph.kind, spec.graph.n, spec.graph.edge_param, rng,
                                  spec.graph.topics);
    }
    std::ifstream in(spec.graph.file);
    if (!in) {
        throw Error("cannot open graph file '" + spec.graph.file + "'");
    }
    if (spec.graph.file.size() >= 5 &&
        spec.graph.file.compare(spec.graph.file.size() - 5, 5, ".json") == 0) {
        return load_graph_json(in);
    }
    return load_edge_list(in, spec.graph.topics);
}

ResolvedExperiment resolve(const ExperimentSpec& spec) {
    SocialGraph graph = resolve_graph(spec);
    if (spec.topic >= graph.topic_count()) {
        throw ValidationError("traced topic out of range for this graph");
    }

    std::vector<SeedAssignment> seeds;
    if (spec.seeds.rule) {
        seeds = seeds_from_rule(spec.seeds, graph, spec.config.master_seed);
    } else {
        std::ifstream in(spec.seeds.file);
        if (!in) {
            throw Error("cannot open seed file '" + spec.seeds.file + "'");
        }
        seeds = load_seeds(in, graph, graph.topic_count());
    }
    return {std::move(graph), std::move(seeds)};
}

ExperimentOutput run_experiment(const ExperimentSpec& spec, const ResolvedExperiment& res,
                                Exec exec) {
    ExperimentOutput out;
    out.traces.reserve(spec.replicas);
    out.final_stance.reserve(spec.replicas);
    const std::size_t n = res.graph.node_count();

    if (spec.model == "dmnai") {
        auto results =
            run_replicas(res.graph, res.seeds, spec.topic, spec.config, spec.replicas, exec);
        for (auto& r : results) {
            out.traces.push_back(std::move(r.topics[0].rounds));
            std::vector<StanceValue> fin(n);
            for (NodeId v = 0; v < n; ++v) {
                fin[v] = r.final_state.stance_of(v, spec.topic);
            }
            out.final_stance.push_back(std::move(fin));
        }
        return out;
    }

    std::vector<NodeId> seed_nodes;
    for (const auto& s : res.seeds) {
        if (s.topic == spec.topic) {
            seed_nodes.push_back(s.node);
        }
    }
    for (std::uint32_t i = 0; i < spec.replicas; ++i) {
        RngStream rng = derive_replica_rng(spec.config.master_seed, i);
        ICResult r = run_ic(res.graph, seed_nodes, spec.ic, rng);
        out.traces.push_back(std::move(r.rounds));
        std::vector<StanceValue> fin(n);
        for (NodeId v = 0; v < n; ++v) {
            fin[v] = r.active[v] ? stance::kNegative : stance::kUnknown;
        }
        out.final_stance.push_back(std::move(fin));
    }
    return out;
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) {
        throw Error("cannot write '" + p.string() + "'");
    }
    return f;
}

} // namespace

void write_outputs(const std::string& dir, const ExperimentSpec& spec,
                   const ExperimentOutput& out) {
    const std::filesystem::path base(dir);
    std::filesystem::create_directories(base);
    const json exp = experiment_json(spec);
    for (std::size_t i = 0; i < out.traces.size(); ++i) {
        const std::string tag = "replica_" + std::to_string(i);
        {
            json doc{{"experiment", exp},
                     {"replica", i},
                     {"rounds", trace_json(out.traces[i])},
                     {"final_stance", out.final_stance[i]}};
            auto f = open_out(base / (tag + ".json"));
            f << doc.dump(2) << '\n';
        }
        {
            auto f = open_out(base / (tag + ".csv"));
            write_trace_csv(f, out.traces[i]);
        }
    }
    {
        auto f = open_out(base / "aggregate.csv");
        write_aggregate_csv(f, out.traces);
    }
    {
        auto f = open_out(base / "curve_affected.csv");
        write_curve_csv(f, curve_extract(out.traces[0], CurveKind::affected_cumulative));
    }
    {
        auto f = open_out(base / "curve_stance.csv");
        write_curve_csv(f, curve_extract(out.traces[0], CurveKind::stance_distribution));
    }
}

LoadedTrace load_replica_json(std::istream& in) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad replica JSON: ") + e.what());
    }
    if (!doc.contains("experiment") || !doc.contains("rounds")) {
        throw ParseError("replica JSON must contain 'experiment' and 'rounds'");
    }
    LoadedTrace t;
    t.spec = experiment_from_json(doc.at("experiment"));
    t.replica = doc.value("replica", 0u);
    for (const auto& r : doc.at("rounds")) {
        RoundTrace row;
        row.round = r.at("round").get<std::uint32_t>();
        row.new_total = r.at("new_total").get<std::uint64_t>();
        row.new_adjacent = r.at("new_adjacent").get<std::uint64_t>();
        row.new_nonadjacent = r.at("new_nonadjacent").get<std::uint64_t>();
        row.att_adjacent = r.at("att_adjacent").get<std::uint64_t>();
        row.att_nonadjacent = r.at("att_nonadjacent").get<std::uint64_t>();
        row.count_positive = r.at("count_stance_0").get<std::uint64_t>();
        row.count_neutral = r.at("count_stance_0.5").get<std::uint64_t>();
        row.count_negative = r.at("count_stance_1").get<std::uint64_t>();
        row.count_unknown = r.at("count_unknown").get<std::uint64_t>();
        row.cumulative_affected = r.at("affected_total").get<std::uint64_t>();
        row.adj_visited_size = r.at("adj_visited").get<std::uint64_t>();
        for (const auto& tj : r.at("transitions")) {
            row.transitions.push_back({tj.at("node").get<NodeId>(),
                                       tj.at("from").get<StanceValue>(),
                                       tj.at("to").get<StanceValue>()});
        }
        t.rounds.push_back(std::move(row));
    }
    if (doc.contains("final_stance")) {
        t.final_stance = doc.at("final_stance").get<std::vector<StanceValue>>();
    }
    return t;
}

} // namespace dmnai
