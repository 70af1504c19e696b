#include <chrono>
#include <cstdio>
#include <sstream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dmnai/engine.hpp"
#include "dmnai/experiment.hpp"
#include "dmnai/generators.hpp"
#include "dmnai/replica.hpp"
#include "dmnai/trace_io.hpp"

namespace {

double now_seconds() {
#ifdef _OPENMP
    return omp_get_wtime();
#else
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
#endif
}

std::string trace_fingerprint(const std::vector<dmnai::RoundTrace>& t) {
    std::ostringstream ss;
    ss << dmnai::trace_json(t);
    return ss.str();
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("openmp enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("openmp not available, both paths run serially\n");
#endif

    const std::uint64_t master_seed = 20240817;
    dmnai::RngStream graph_rng = dmnai::derive_replica_rng(master_seed, dmnai::kGraphStream);
    const dmnai::SocialGraph g =
        dmnai::generate_synthetic(dmnai::GraphKind::preferential, 20000, 8, graph_rng, 3);
    std::printf("graph: %zu nodes, %zu edges, %u topics\n", g.node_count(), g.edge_count(),
                g.topic_count());

    dmnai::SeedSource rule;
    rule.rule = true;
    rule.rule_name = "top-out-degree-k";
    rule.k = 50;
    rule.stance = "mixed";
    const auto seeds = dmnai::seeds_from_rule(rule, g, master_seed);

    dmnai::SimulationConfig cfg;
    cfg.rounds = 5;
    cfg.r2 = 0.05;
    cfg.vadj_scope = dmnai::VadjScope::per_round;
    cfg.master_seed = master_seed;

    // Single-run kernel benchmark: serial vs parallel probability evaluation.
    std::string serial_fp, parallel_fp;
    double t_serial = 0.0, t_parallel = 0.0;
    {
        dmnai::RngStream rng = dmnai::derive_replica_rng(master_seed, 0);
        const double t0 = now_seconds();
        const auto res = dmnai::run_simulation(g, seeds, 0, cfg, rng, dmnai::Exec::serial);
        t_serial = now_seconds() - t0;
        serial_fp = trace_fingerprint(res.topics[0].rounds);
        std::printf("single run, serial:   %8.3f s (affected %llu)\n", t_serial,
                    static_cast<unsigned long long>(res.topics[0].rounds.back().cumulative_affected));
    }
    {
        dmnai::RngStream rng = dmnai::derive_replica_rng(master_seed, 0);
        const double t0 = now_seconds();
        const auto res = dmnai::run_simulation(g, seeds, 0, cfg, rng, dmnai::Exec::parallel);
        t_parallel = now_seconds() - t0;
        parallel_fp = trace_fingerprint(res.topics[0].rounds);
        std::printf("single run, parallel: %8.3f s (affected %llu)\n", t_parallel,
                    static_cast<unsigned long long>(res.topics[0].rounds.back().cumulative_affected));
    }
    if (serial_fp != parallel_fp) {
        std::printf("FAIL: serial and parallel traces differ\n");
        return 1;
    }
    std::printf("traces identical, speedup %.2fx\n", t_serial / t_parallel);

    // Replica-level benchmark.
    const std::uint32_t replicas = 8;
    std::string rep_serial_fp, rep_parallel_fp;
    {
        const double t0 = now_seconds();
        const auto rs = dmnai::run_replicas(g, seeds, 0, cfg, replicas, dmnai::Exec::serial);
        const double dt = now_seconds() - t0;
        std::string fp;
        for (const auto& r : rs) {
            fp += trace_fingerprint(r.topics[0].rounds);
        }
        rep_serial_fp = std::move(fp);
        std::printf("%u replicas, serial:   %8.3f s\n", replicas, dt);
        t_serial = dt;
    }
    {
        const double t0 = now_seconds();
        const auto rs = dmnai::run_replicas(g, seeds, 0, cfg, replicas, dmnai::Exec::parallel);
        const double dt = now_seconds() - t0;
        std::string fp;
        for (const auto& r : rs) {
            fp += trace_fingerprint(r.topics[0].rounds);
        }
        rep_parallel_fp = std::move(fp);
        std::printf("%u replicas, parallel: %8.3f s\n", replicas, dt);
        t_parallel = dt;
    }
    if (rep_serial_fp != rep_parallel_fp) {
        std::printf("FAIL: replica traces differ between execution modes\n");
        return 1;
    }
    std::printf("replica traces identical, speedup %.2fx\n", t_serial / t_parallel);
    return 0;
}
