#include "dmnai/trace_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dmnai/error.hpp"

namespace dmnai {

namespace {

constexpr const char* kTraceHeader =
    "round,affected_total,new_adjacent,new_nonadjacent,"
    "count_stance_0,count_stance_0.5,count_stance_1,count_unknown";

struct CountRow {
    std::uint64_t affected_total;
    std::uint64_t new_adjacent;
    std::uint64_t new_nonadjacent;
    std::uint64_t count_positive;
    std::uint64_t count_neutral;
    std::uint64_t count_negative;
    std::uint64_t count_unknown;
};

CountRow counts_at(const std::vector<RoundTrace>& trace, std::size_t round) {
    // Carry the last row forward when the trace ended before `round`.
    const RoundTrace& row = trace[std::min(round, trace.size() - 1)];
    const bool padded = round >= trace.size();
    return {row.cumulative_affected,
            padded ? 0 : row.new_adjacent,
            padded ? 0 : row.new_nonadjacent,
            row.count_positive,
            row.count_neutral,
            row.count_negative,
            row.count_unknown};
}

std::string fixed6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", x);
    return buf;
}

} // namespace

void write_trace_csv(std::ostream& out, std::span<const RoundTrace> trace) {
    out << kTraceHeader << '\n';
    for (const auto& row : trace) {
        out << row.round << ',' << row.cumulative_affected << ',' << row.new_adjacent << ','
            << row.new_nonadjacent << ',' << row.count_positive << ',' << row.count_neutral << ','
            << row.count_negative << ',' << row.count_unknown << '\n';
    }
}

nlohmann::json trace_json(std::span<const RoundTrace> trace) {
    nlohmann::json rounds = nlohmann::json::array();
    for (const auto& row : trace) {
        nlohmann::json transitions = nlohmann::json::array();
        for (const auto& t : row.transitions) {
            transitions.push_back({{"node", t.node}, {"from", t.from}, {"to", t.to}});
        }
        rounds.push_back({{"round", row.round},
                          {"new_total", row.new_total},
                          {"new_adjacent", row.new_adjacent},
                          {"new_nonadjacent", row.new_nonadjacent},
                          {"att_adjacent", row.att_adjacent},
                          {"att_nonadjacent", row.att_nonadjacent},
                          {"count_stance_0", row.count_positive},
                          {"count_stance_0.5", row.count_neutral},
                          {"count_stance_1", row.count_negative},
                          {"count_unknown", row.count_unknown},
                          {"affected_total", row.cumulative_affected},
                          {"adj_visited", row.adj_visited_size},
                          {"transitions", std::move(transitions)}});
    }
    return rounds;
}

void write_aggregate_csv(std::ostream& out,
                         const std::vector<std::vector<RoundTrace>>& replicas) {
    if (replicas.empty()) {
        throw ValidationError("no replica traces to aggregate");
    }
    std::size_t rounds = 0;
    for (const auto& r : replicas) {
        if (r.empty()) {
            throw ValidationError("cannot aggregate an empty trace");
        }
        rounds = std::max(rounds, r.size());
    }
    out << kTraceHeader << '\n';
    const double m = static_cast<double>(replicas.size());
    for (std::size_t k = 0; k < rounds; ++k) {
        double acc[7] = {0, 0, 0, 0, 0, 0, 0};
        for (const auto& r : replicas) {
            const CountRow c = counts_at(r, k);
            acc[0] += static_cast<double>(c.affected_total);
            acc[1] += static_cast<double>(c.new_adjacent);
            acc[2] += static_cast<double>(c.new_nonadjacent);
            acc[3] += static_cast<double>(c.count_positive);
            acc[4] += static_cast<double>(c.count_neutral);
            acc[5] += static_cast<double>(c.count_negative);
            acc[6] += static_cast<double>(c.count_unknown);
        }
        out << k;
        for (const double a : acc) {
            out << ',' << fixed6(a / m);
        }
        out << '\n';
    }
}

void write_curve_csv(std::ostream& out, const Curve& curve) {
    for (std::size_t i = 0; i < curve.columns.size(); ++i) {
        if (i != 0) {
            out << ',';
        }
        out << curve.columns[i];
    }
    out << '\n';
    for (const auto& row : curve.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i != 0) {
                out << ',';
            }
            const double v = row[i];
            if (v == std::floor(v) && std::abs(v) < 1e15) {
                out << static_cast<long long>(v);
            } else {
                out << fixed6(v);
            }
        }
        out << '\n';
    }
}

} // namespace dmnai
