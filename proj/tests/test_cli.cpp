#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "dmnai/experiment.hpp"
#include "dmnai/graph.hpp"

using namespace dmnai;
namespace fs = std::filesystem;

namespace {

struct CmdResult {
    int status;
    std::string output;
};

std::string cli_path() {
    const char* env = std::getenv("DMNAI_CLI");
    REQUIRE_MESSAGE(env != nullptr, "DMNAI_CLI must point at the dmnai binary");
    return env;
}

CmdResult run_cmd(const std::string& args) {
    const std::string full = "\"" + cli_path() + "\" " + args + " 2>&1";
    FILE* pipe = popen(full.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) {
        out.append(buf, got);
    }
    const int rc = pclose(pipe);
    return {WIFEXITED(rc) ? WEXITSTATUS(rc) : -1, out};
}

fs::path fresh_dir(const std::string& tag) {
    const fs::path p =
        fs::temp_directory_path() / ("dmnai_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    REQUIRE(f.good());
    f << text;
}

std::string read_file(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE_MESSAGE(f.good(), ("missing file " + p.string()));
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::size_t line_count(const std::string& text) {
    std::size_t lines = 0;
    for (const char c : text) {
        lines += (c == '\n') ? 1 : 0;
    }
    return lines;
}

} // namespace

TEST_CASE("default config prints and parses back") {
    const auto res = run_cmd("config --print-defaults");
    REQUIRE(res.status == 0);
    auto doc = nlohmann::json::parse(res.output);
    CHECK(doc.contains("kernel"));
    CHECK(doc.contains("ic"));
    doc.erase("ic");
    SimulationConfig cfg;
    config_from_json(doc, cfg);
    CHECK(cfg.rounds == 10);
    CHECK(cfg.sim_threshold == doctest::Approx(0.3));
    CHECK(cfg.kernel.lambda == doctest::Approx(0.5));
}

TEST_CASE("generated graph files load back") {
    const auto dir = fresh_dir("gen");
    const auto out = (dir / "g.json").string();
    const auto res = run_cmd("generate --kind preferential --nodes 50 --edge-param 3 --topics 2 "
                             "--master-seed 7 --out \"" +
                             out + "\"");
    REQUIRE(res.status == 0);
    std::ifstream in(out);
    const auto g = load_graph_json(in);
    CHECK(g.node_count() == 50);
    CHECK(g.topic_count() == 2);
    CHECK(g.edge_count() > 0);

    const auto out2 = (dir / "g.txt").string();
    const auto res2 = run_cmd("generate --kind preferential --nodes 30 --edge-param 2 "
                              "--master-seed 7 --out \"" +
                              out2 + "\" --format edgelist");
    REQUIRE(res2.status == 0);
    std::ifstream in2(out2);
    const auto g2 = load_edge_list(in2, 1);
    CHECK(g2.node_count() == 30);
    fs::remove_all(dir);
}

TEST_CASE("simulate output is reproducible and self-describing") {
    const auto dir = fresh_dir("sim");
    const auto graph = dir / "g.txt";
    const auto seeds = dir / "s.txt";
    write_file(graph, "a b\nb c\nc a\n");
    write_file(seeds, "a 0 1\n");

    const std::string common = "simulate --graph \"" + graph.string() + "\" --topics 1 --seeds \"" +
                               seeds.string() +
                               "\" --model dmnai --replicas 2 --master-seed 5 --topic 0 --out \"";
    const auto a = run_cmd(common + (dir / "A").string() + "\"");
    REQUIRE_MESSAGE(a.status == 0, a.output);
    const auto b = run_cmd(common + (dir / "B").string() + "\"");
    REQUIRE(b.status == 0);

    for (const char* name : {"replica_0.json", "replica_1.json", "replica_0.csv",
                             "aggregate.csv", "curve_affected.csv"}) {
        CHECK(read_file(dir / "A" / name) == read_file(dir / "B" / name));
    }

    // a replica file embeds its full experiment, so it reruns byte-identically
    const auto c = run_cmd("simulate --config \"" + (dir / "A" / "replica_0.json").string() +
                           "\" --out \"" + (dir / "C").string() + "\"");
    REQUIRE_MESSAGE(c.status == 0, c.output);
    CHECK(read_file(dir / "A" / "replica_0.json") == read_file(dir / "C" / "replica_0.json"));
    CHECK(read_file(dir / "A" / "replica_1.json") == read_file(dir / "C" / "replica_1.json"));
    fs::remove_all(dir);
}

TEST_CASE("accuracy scores a trace and appends to a report") {
    const auto dir = fresh_dir("acc");
    write_file(dir / "g.txt", "a b\n");
    write_file(dir / "s.txt", "a 0 1\n");
    write_file(dir / "cfg.json",
               R"({"rounds": 1, "r1": 0.0, "r2": 0.0, "init_perseverance": 0.0,
                   "kernel": {"rate": 0.0}})");
    write_file(dir / "ref.csv", "node,topic,stance\na,0,1\nb,0,1\n");

    const auto sim = run_cmd("simulate --config \"" + (dir / "cfg.json").string() +
                             "\" --graph \"" + (dir / "g.txt").string() + "\" --seeds \"" +
                             (dir / "s.txt").string() + "\" --out \"" + (dir / "out").string() +
                             "\"");
    REQUIRE_MESSAGE(sim.status == 0, sim.output);

    const std::string score_cmd = "accuracy --trace \"" +
                                  (dir / "out" / "replica_0.json").string() +
                                  "\" --reference \"" + (dir / "ref.csv").string() + "\"";
    const auto range = run_cmd(score_cmd + " --metric range");
    REQUIRE_MESSAGE(range.status == 0, range.output);
    CHECK(range.output == "1.0000\n");
    const auto exact = run_cmd(score_cmd + " --metric stance");
    REQUIRE(exact.status == 0);
    CHECK(exact.output == "1.0000\n");

    const std::string report = (dir / "scores.csv").string();
    REQUIRE(run_cmd(score_cmd + " --metric range --out \"" + report + "\"").status == 0);
    REQUIRE(run_cmd(score_cmd + " --metric stance --out \"" + report + "\"").status == 0);
    const auto text = read_file(report);
    CHECK(line_count(text) == 3);
    CHECK(text.rfind("metric,topic,value\n", 0) == 0);
    fs::remove_all(dir);
}

TEST_CASE("compare runs both models against one reference") {
    const auto dir = fresh_dir("cmp");
    write_file(dir / "g.txt", "a b\nb c\n");
    write_file(dir / "s.txt", "a 0 1\n");
    write_file(dir / "ref.csv", "node,topic,stance\na,0,1\nb,0,1\nc,0,-1\n");

    const auto spec = [&](const std::string& model) {
        return std::string(R"({"model": ")") + model + R"(", "graph": {"file": ")" +
               (dir / "g.txt").string() + R"(", "topics": 1}, "seeds": {"file": ")" +
               (dir / "s.txt").string() + R"("}, "topic": 0, "replicas": 1, "config": {"rounds": 2}})";
    };
    write_file(dir / "a.json", spec("dmnai"));
    write_file(dir / "b.json", spec("ic"));

    const auto res = run_cmd("compare --spec-a \"" + (dir / "a.json").string() + "\" --spec-b \"" +
                             (dir / "b.json").string() + "\" --reference \"" +
                             (dir / "ref.csv").string() + "\" --out \"" +
                             (dir / "report.csv").string() + "\"");
    REQUIRE_MESSAGE(res.status == 0, res.output);
    CHECK(res.output.rfind("model,range_accuracy\n", 0) == 0);
    CHECK(res.output.find("dmnai,") != std::string::npos);
    CHECK(res.output.find("ic,") != std::string::npos);
    const auto report = read_file(dir / "report.csv");
    CHECK(line_count(report) == 3);
    fs::remove_all(dir);
}

TEST_CASE("bad inputs fail with a nonzero exit") {
    const auto dir = fresh_dir("fail");
    write_file(dir / "s.txt", "a 0 1\n");
    write_file(dir / "g.txt", "a b\n");

    const auto missing = run_cmd("simulate --graph \"" + (dir / "nope.txt").string() +
                                 "\" --seeds \"" + (dir / "s.txt").string() + "\" --out \"" +
                                 (dir / "o1").string() + "\"");
    CHECK(missing.status != 0);
    CHECK(missing.output.find("error:") != std::string::npos);

    write_file(dir / "bad.json", R"({"nope": 1})");
    const auto badcfg = run_cmd("simulate --config \"" + (dir / "bad.json").string() +
                                "\" --graph \"" + (dir / "g.txt").string() + "\" --seeds \"" +
                                (dir / "s.txt").string() + "\" --out \"" + (dir / "o2").string() +
                                "\"");
    CHECK(badcfg.status != 0);
    CHECK(badcfg.output.find("unknown config key") != std::string::npos);

    write_file(dir / "zs.txt", "z 0 1\n");
    const auto badseed = run_cmd("simulate --graph \"" + (dir / "g.txt").string() +
                                 "\" --seeds \"" + (dir / "zs.txt").string() + "\" --out \"" +
                                 (dir / "o3").string() + "\"");
    CHECK(badseed.status != 0);

    const auto badmetric = run_cmd("accuracy --trace x --reference y --metric junk");
    CHECK(badmetric.status != 0);

    write_file(dir / "flatrule.json",
               R"({"model":"dmnai","graph":{"file":"g"},"seeds":{"rule":"random-k"},)"
               R"("topic":0,"replicas":1,"config":{}})");
    const auto flatrule = run_cmd("compare --spec-a \"" + (dir / "flatrule.json").string() +
                                  "\" --spec-b \"" + (dir / "flatrule.json").string() +
                                  "\" --reference \"" + (dir / "nope.csv").string() + "\"");
    CHECK(flatrule.status != 0);
    CHECK(flatrule.output.find("'rule' must be an object") != std::string::npos);

    write_file(dir / "flatgen.json",
               R"({"model":"dmnai","graph":{"generate":"random"},)"
               R"("seeds":{"file":"s"},"topic":0,"replicas":1,"config":{}})");
    const auto flatgen = run_cmd("compare --spec-a \"" + (dir / "flatgen.json").string() +
                                 "\" --spec-b \"" + (dir / "flatgen.json").string() +
                                 "\" --reference \"" + (dir / "nope.csv").string() + "\"");
    CHECK(flatgen.status != 0);
    CHECK(flatgen.output.find("'generate' must be an object") != std::string::npos);
    fs::remove_all(dir);
}
