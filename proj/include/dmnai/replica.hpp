#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dmnai/engine.hpp"
#include "dmnai/graph.hpp"

namespace dmnai {

// Runs `replicas` independent simulations of one topic, replica i drawing
// from derive_replica_rng(cfg.master_seed, i). With Exec::parallel the
// replicas run concurrently; results are identical to the serial path
// because every replica owns its state and stream.
std::vector<SimulationResult> run_replicas(const SocialGraph& g,
                                           std::span<const SeedAssignment> seeds, TopicId topic,
                                           const SimulationConfig& cfg, std::uint32_t replicas,
                                           Exec exec = Exec::serial);

} // namespace dmnai
