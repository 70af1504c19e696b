#pragma once

#include <ostream>
#include <span>
#include <vector>

#include <json.hpp>

#include "dmnai/metrics.hpp"
#include "dmnai/trace.hpp"

namespace dmnai {

// One CSV row per round, fixed column order:
// round, affected_total, new_adjacent, new_nonadjacent,
// count_stance_0, count_stance_0.5, count_stance_1, count_unknown
void write_trace_csv(std::ostream& out, std::span<const RoundTrace> trace);

// Full-detail JSON form of a trace, one object per round including the
// per-round stance transitions.
nlohmann::json trace_json(std::span<const RoundTrace> trace);

// Per-round mean of the count columns across replicas, one row per round.
// Shorter traces (the cascade died out early) are padded by carrying their
// final counts forward with zero new activations.
void write_aggregate_csv(std::ostream& out,
                         const std::vector<std::vector<RoundTrace>>& replicas);

void write_curve_csv(std::ostream& out, const Curve& curve);

} // namespace dmnai
