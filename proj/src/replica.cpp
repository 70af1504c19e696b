#include "dmnai/replica.hpp"

#include <exception>
#include <string>

#include "dmnai/error.hpp"

namespace dmnai {

std::vector<SimulationResult> run_replicas(const SocialGraph& g,
                                           std::span<const SeedAssignment> seeds, TopicId topic,
                                           const SimulationConfig& cfg, std::uint32_t replicas,
                                           Exec exec) {
    if (replicas < 1) {
        throw ValidationError("replicas must be at least 1");
    }
    std::vector<SimulationResult> results(replicas);

    if (exec == Exec::serial) {
        for (std::uint32_t i = 0; i < replicas; ++i) {
            RngStream rng = derive_replica_rng(cfg.master_seed, i);
            results[i] = run_simulation(g, seeds, topic, cfg, rng, exec);
        }
        return results;
    }

    // Exceptions may not cross an OpenMP region boundary; keep the first
    // message and rethrow afterwards.
    std::exception_ptr first_error = nullptr;
    const std::int64_t n = replicas;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            RngStream rng = derive_replica_rng(cfg.master_seed, static_cast<std::uint64_t>(i));
            results[i] = run_simulation(g, seeds, topic, cfg, rng, Exec::serial);
        } catch (...) {
#pragma omp critical
            if (!first_error) {
                first_error = std::current_exception();
            }
        }
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
    return results;
}

} // namespace dmnai
