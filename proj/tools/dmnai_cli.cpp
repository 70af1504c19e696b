#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dmnai/error.hpp"
#include "dmnai/experiment.hpp"
#include "dmnai/generators.hpp"
#include "dmnai/metrics.hpp"
#include "dmnai/trace_io.hpp"

namespace {

using nlohmann::json;

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw dmnai::Error("cannot open '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw dmnai::ParseError("bad JSON in '" + path + "': " + e.what());
    }
}

// Accepts three shapes: a full experiment document, a previously emitted
// replica output (its embedded experiment is used), or a bare simulation
// config (optionally with an "ic" section).
dmnai::ExperimentSpec spec_from_file(const std::string& path) {
    const json doc = read_json_file(path);
    if (doc.is_object() && doc.contains("experiment")) {
        return dmnai::experiment_from_json(doc.at("experiment"));
    }
    if (doc.is_object() && (doc.contains("graph") || doc.contains("seeds") ||
                            doc.contains("model") || doc.contains("replicas"))) {
        return dmnai::experiment_from_json(doc);
    }
    dmnai::ExperimentSpec spec;
    json c = doc;
    if (c.is_object() && c.contains("ic")) {
        dmnai::ic_from_json(c.at("ic"), spec.ic);
        c.erase("ic");
    }
    dmnai::config_from_json(c, spec.config);
    return spec;
}

std::string fixed4(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", x);
    return buf;
}

dmnai::AttitudeState state_from_final(const std::vector<dmnai::StanceValue>& fin,
                                      dmnai::TopicId topic) {
    dmnai::AttitudeState st(fin.size(), topic + 1, 0.0);
    for (std::size_t v = 0; v < fin.size(); ++v) {
        st.stance[v * st.topics + topic] = fin[v];
    }
    return st;
}

dmnai::ReferenceTrace load_reference(const std::string& path, const dmnai::SocialGraph& g) {
    std::ifstream in(path);
    if (!in) {
        throw dmnai::Error("cannot open '" + path + "'");
    }
    return dmnai::load_reference_csv(in, g);
}

struct SimulateArgs {
    std::string config_file, graph_file, seeds_file, seed_rule, model, out_dir;
    std::string seed_stance = "1";
    std::string exec_mode = "serial";
    std::uint32_t replicas = 1;
    std::uint64_t master_seed = 0;
    std::uint32_t topic = 0;
    std::uint32_t seed_count = 0;
    std::uint32_t seed_topic = 0;
    std::uint32_t topics = 1;
};

int cmd_simulate(const CLI::App& cmd, const SimulateArgs& a) {
    dmnai::ExperimentSpec spec;
    if (cmd.count("--config")) {
        spec = spec_from_file(a.config_file);
    }
    if (cmd.count("--graph")) {
        spec.graph.file = a.graph_file;
        spec.graph.generate = false;
    }
    if (cmd.count("--topics")) {
        spec.graph.topics = a.topics;
    }
    if (cmd.count("--seeds")) {
        spec.seeds.file = a.seeds_file;
        spec.seeds.rule = false;
    }
    if (cmd.count("--seed-rule")) {
        spec.seeds.rule = true;
        spec.seeds.file.clear();
        spec.seeds.rule_name = a.seed_rule;
    }
    if (cmd.count("--seed-count")) {
        spec.seeds.k = a.seed_count;
    }
    if (cmd.count("--seed-stance")) {
        spec.seeds.stance = a.seed_stance;
    }
    if (cmd.count("--seed-topic")) {
        spec.seeds.topic = a.seed_topic;
    }
    if (cmd.count("--model")) {
        spec.model = a.model;
    }
    if (cmd.count("--replicas")) {
        spec.replicas = a.replicas;
    }
    if (cmd.count("--master-seed")) {
        spec.config.master_seed = a.master_seed;
    }
    if (cmd.count("--topic")) {
        spec.topic = a.topic;
    }
    const dmnai::Exec exec =
        a.exec_mode == "parallel" ? dmnai::Exec::parallel : dmnai::Exec::serial;

    const dmnai::ResolvedExperiment res = dmnai::resolve(spec);
    const dmnai::ExperimentOutput out = dmnai::run_experiment(spec, res, exec);
    dmnai::write_outputs(a.out_dir, spec, out);
    std::cout << "wrote " << out.traces.size() << " replica trace(s) to " << a.out_dir << '\n';
    return 0;
}

int cmd_generate(const std::string& kind, std::uint32_t nodes, double edge_param,
                 std::uint32_t topics, std::uint64_t master_seed, const std::string& out,
                 const std::string& format) {
    const dmnai::GraphKind k =
        kind == "preferential" ? dmnai::GraphKind::preferential : dmnai::GraphKind::random;
    dmnai::RngStream rng = dmnai::derive_replica_rng(master_seed, dmnai::kGraphStream);
    const dmnai::SocialGraph g = dmnai::generate_synthetic(k, nodes, edge_param, rng, topics);
    std::ofstream f(out, std::ios::binary);
    if (!f) {
        throw dmnai::Error("cannot write '" + out + "'");
    }
    if (format == "edgelist") {
        dmnai::save_edge_list(g, f);
    } else {
        dmnai::save_graph_json(g, f);
    }
    std::cout << "wrote graph with " << g.node_count() << " nodes, " << g.edge_count()
              << " edges to " << out << '\n';
    return 0;
}

int cmd_compare(const std::string& spec_a, const std::string& spec_b, const std::string& ref_file,
                const std::string& out_file) {
    dmnai::ExperimentSpec a = spec_from_file(spec_a);
    dmnai::ExperimentSpec b = spec_from_file(spec_b);
    a.replicas = 1;
    b.replicas = 1;
    const dmnai::ResolvedExperiment ra = dmnai::resolve(a);
    const dmnai::ResolvedExperiment rb = dmnai::resolve(b);

    const auto& ga = ra.graph;
    const auto& gb = rb.graph;
    bool same = ga.node_count() == gb.node_count() && ga.edge_count() == gb.edge_count() &&
                ga.edges() == gb.edges();
    for (dmnai::NodeId v = 0; same && v < ga.node_count(); ++v) {
        same = ga.name(v) == gb.name(v);
    }
    if (!same) {
        throw dmnai::ValidationError("the two specs resolve to different graphs");
    }
    if (ra.seeds.size() != rb.seeds.size()) {
        throw dmnai::ValidationError("the two specs resolve to different seed sets");
    }
    for (std::size_t i = 0; i < ra.seeds.size(); ++i) {
        if (ra.seeds[i].node != rb.seeds[i].node || ra.seeds[i].topic != rb.seeds[i].topic ||
            ra.seeds[i].stance != rb.seeds[i].stance) {
            throw dmnai::ValidationError("the two specs resolve to different seed sets");
        }
    }

    const dmnai::ReferenceTrace ref = load_reference(ref_file, ga);
    const dmnai::ExperimentOutput oa = dmnai::run_experiment(a, ra);
    const dmnai::ExperimentOutput ob = dmnai::run_experiment(b, rb);
    const double score_a =
        dmnai::range_accuracy(state_from_final(oa.final_stance[0], a.topic), ref, a.topic);
    const double score_b =
        dmnai::range_accuracy(state_from_final(ob.final_stance[0], b.topic), ref, b.topic);

    std::string report = "model,range_accuracy\n";
    report += a.model + "," + fixed4(score_a) + "\n";
    report += b.model + "," + fixed4(score_b) + "\n";
    std::cout << report;
    if (!out_file.empty()) {
        std::ofstream f(out_file, std::ios::binary);
        if (!f) {
            throw dmnai::Error("cannot write '" + out_file + "'");
        }
        f << report;
    }
    return 0;
}

int cmd_accuracy(const CLI::App& cmd, const std::string& trace_file, const std::string& ref_file,
                 const std::string& metric, std::uint32_t topic_flag,
                 const std::string& out_file) {
    std::ifstream in(trace_file);
    if (!in) {
        throw dmnai::Error("cannot open '" + trace_file + "'");
    }
    const dmnai::LoadedTrace t = dmnai::load_replica_json(in);
    const dmnai::TopicId topic = cmd.count("--topic") ? topic_flag : t.spec.topic;
    const dmnai::SocialGraph g = dmnai::resolve_graph(t.spec);

    dmnai::AttitudeState st(0, 1, 0.0);
    if (!t.final_stance.empty()) {
        if (t.final_stance.size() != g.node_count()) {
            throw dmnai::ValidationError("final_stance length does not match the graph");
        }
        st = state_from_final(t.final_stance, topic);
    } else {
        st = dmnai::AttitudeState(g.node_count(), topic + 1, 0.0);
        for (const auto& row : t.rounds) {
            for (const auto& tr : row.transitions) {
                st.stance[tr.node * st.topics + topic] = tr.to;
            }
        }
    }
    const dmnai::ReferenceTrace ref = load_reference(ref_file, g);
    const double value = metric == "range" ? dmnai::range_accuracy(st, ref, topic)
                                           : dmnai::stance_accuracy(st, ref, topic);
    std::cout << fixed4(value) << '\n';
    if (!out_file.empty()) {
        const bool existed = std::filesystem::exists(out_file);
        std::ofstream f(out_file, std::ios::app);
        if (!f) {
            throw dmnai::Error("cannot write '" + out_file + "'");
        }
        if (!existed) {
            f << "metric,topic,value\n";
        }
        f << metric << ',' << topic << ',' << fixed4(value) << '\n';
    }
    return 0;
}

int cmd_config(bool print_defaults) {
    if (!print_defaults) {
        throw dmnai::Error("nothing to do (use --print-defaults)");
    }
    json doc = dmnai::config_json(dmnai::SimulationConfig{});
    doc["ic"] = dmnai::ic_json(dmnai::ICConfig{});
    std::cout << doc.dump(2) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"DM-NAI information dissemination experiments"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("generate", "Generate a synthetic graph file");
    std::string gen_kind = "random", gen_out, gen_format = "json";
    std::uint32_t gen_nodes = 0, gen_topics = 1;
    double gen_edge_param = 0.0;
    std::uint64_t gen_seed = 0;
    gen->add_option("--kind", gen_kind, "random | preferential")
        ->check(CLI::IsMember({"random", "preferential"}));
    gen->add_option("--nodes", gen_nodes, "node count")->required();
    gen->add_option("--edge-param", gen_edge_param,
                    "edge probability (random) or out-degree (preferential)")
        ->required();
    gen->add_option("--topics", gen_topics, "topic count");
    gen->add_option("--master-seed", gen_seed, "generator seed");
    gen->add_option("--out", gen_out, "output file")->required();
    gen->add_option("--format", gen_format, "json | edgelist")
        ->check(CLI::IsMember({"json", "edgelist"}));

    auto* sim = app.add_subcommand("simulate", "Run replicated simulations");
    SimulateArgs sa;
    sim->add_option("--config", sa.config_file,
                    "experiment/config JSON (replica outputs are accepted)");
    sim->add_option("--graph", sa.graph_file, "graph file (.json or edge list)");
    sim->add_option("--topics", sa.topics, "topic count for edge-list graphs");
    sim->add_option("--seeds", sa.seeds_file, "seed file");
    sim->add_option("--seed-rule", sa.seed_rule, "random-k | top-out-degree-k")
        ->check(CLI::IsMember({"random-k", "top-out-degree-k"}));
    sim->add_option("--seed-count", sa.seed_count, "number of rule-selected seeds");
    sim->add_option("--seed-stance", sa.seed_stance, "0 | 0.5 | 1 | mixed");
    sim->add_option("--seed-topic", sa.seed_topic, "topic the rule seeds");
    sim->add_option("--model", sa.model, "dmnai | ic")
        ->check(CLI::IsMember({"dmnai", "ic"}));
    sim->add_option("--replicas", sa.replicas, "replica count");
    sim->add_option("--master-seed", sa.master_seed, "master seed");
    sim->add_option("--topic", sa.topic, "traced topic");
    sim->add_option("--exec", sa.exec_mode, "serial | parallel")
        ->check(CLI::IsMember({"serial", "parallel"}));
    sim->add_option("--out", sa.out_dir, "output directory")->required();

    auto* cmp = app.add_subcommand("compare", "Run two specs and score both");
    std::string cmp_a, cmp_b, cmp_ref, cmp_out;
    cmp->add_option("--spec-a", cmp_a, "first experiment JSON")->required();
    cmp->add_option("--spec-b", cmp_b, "second experiment JSON")->required();
    cmp->add_option("--reference", cmp_ref, "reference trace CSV")->required();
    cmp->add_option("--out", cmp_out, "report CSV");

    auto* acc = app.add_subcommand("accuracy", "Score a trace against a reference");
    std::string acc_trace, acc_ref, acc_metric, acc_out;
    std::uint32_t acc_topic = 0;
    acc->add_option("--trace", acc_trace, "replica JSON")->required();
    acc->add_option("--reference", acc_ref, "reference trace CSV")->required();
    acc->add_option("--metric", acc_metric, "range | stance")
        ->check(CLI::IsMember({"range", "stance"}))
        ->required();
    acc->add_option("--topic", acc_topic, "override the traced topic");
    acc->add_option("--out", acc_out, "CSV file to append the score to");

    auto* cfg = app.add_subcommand("config", "Inspect configuration");
    bool print_defaults = false;
    cfg->add_flag("--print-defaults", print_defaults, "print the default config JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            return cmd_generate(gen_kind, gen_nodes, gen_edge_param, gen_topics, gen_seed,
                                gen_out, gen_format);
        }
        if (sim->parsed()) {
            return cmd_simulate(*sim, sa);
        }
        if (cmp->parsed()) {
            return cmd_compare(cmp_a, cmp_b, cmp_ref, cmp_out);
        }
        if (acc->parsed()) {
            return cmd_accuracy(*acc, acc_trace, acc_ref, acc_metric, acc_topic, acc_out);
        }
        if (cfg->parsed()) {
            return cmd_config(print_defaults);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
