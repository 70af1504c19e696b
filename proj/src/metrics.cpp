#include "dmnai/metrics.hpp"

#include <algorithm>
#include <sstream>

#include "dmnai/error.hpp"
#include "dmnai/stance.hpp"

namespace dmnai {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

std::string strip(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

ReferenceTrace load_reference_csv(std::istream& in, const SocialGraph& g) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) {
        throw ParseError("empty reference trace");
    }
    ++lineno;
    if (strip(line) != "node,topic,stance") {
        throw ParseError("reference trace must start with header 'node,topic,stance'");
    }
    ReferenceTrace ref;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string body = strip(line);
        if (body.empty()) {
            continue;
        }
        const auto fields = split_csv(body);
        if (fields.size() != 3) {
            throw ParseError("reference trace line " + std::to_string(lineno) +
                             ": expected 3 fields");
        }
        const std::string name = strip(fields[0]);
        const auto resolved = g.find(name);
        if (!resolved) {
            throw ParseError("reference trace line " + std::to_string(lineno) +
                             ": unknown node '" + name + "'");
        }
        const NodeId node = *resolved;
        TopicId topic = 0;
        StanceValue s = 0.0;
        try {
            topic = static_cast<TopicId>(std::stoul(strip(fields[1])));
            s = std::stod(strip(fields[2]));
        } catch (const std::exception&) {
            throw ParseError("reference trace line " + std::to_string(lineno) +
                             ": malformed number");
        }
        if (topic >= g.topic_count()) {
            throw ParseError("reference trace line " + std::to_string(lineno) +
                             ": topic out of range");
        }
        if (!stance::on_grid(s)) {
            throw ParseError("reference trace line " + std::to_string(lineno) +
                             ": stance not on the value grid");
        }
        if (ref.find(node, topic) != nullptr) {
            throw ParseError("reference trace line " + std::to_string(lineno) +
                             ": duplicate entry for node '" + name + "'");
        }
        ref.set(node, topic, s);
    }
    return ref;
}

void save_reference_csv(std::ostream& out, const ReferenceTrace& ref, const SocialGraph& g) {
    out << "node,topic,stance\n";
    for (NodeId v = 0; v < g.node_count(); ++v) {
        for (TopicId j = 0; j < g.topic_count(); ++j) {
            if (const StanceValue* s = ref.find(v, j)) {
                out << g.name(v) << ',' << j << ',' << stance::format(*s) << '\n';
            }
        }
    }
}

namespace {

template <typename Agree>
double scored_fraction(const AttitudeState& sim, const ReferenceTrace& ref, TopicId topic,
                       Agree&& agree) {
    if (topic >= sim.topics) {
        throw ValidationError("topic index out of range");
    }
    if (sim.nodes == 0) {
        throw ValidationError("empty node universe");
    }
    std::size_t hits = 0;
    for (NodeId v = 0; v < sim.nodes; ++v) {
        const StanceValue* r = ref.find(v, topic);
        if (r == nullptr) {
            throw ValidationError("reference trace does not cover node index " +
                                  std::to_string(v));
        }
        if (agree(sim.stance_of(v, topic), *r)) {
            ++hits;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(sim.nodes);
}

} // namespace

double range_accuracy(const AttitudeState& sim, const ReferenceTrace& ref, TopicId topic) {
    return scored_fraction(sim, ref, topic, [](StanceValue a, StanceValue b) {
        return stance::known(a) == stance::known(b);
    });
}

double stance_accuracy(const AttitudeState& sim, const ReferenceTrace& ref, TopicId topic) {
    return scored_fraction(sim, ref, topic,
                           [](StanceValue a, StanceValue b) { return a == b; });
}

Curve curve_extract(std::span<const RoundTrace> trace, CurveKind kind) {
    if (trace.empty()) {
        throw ValidationError("cannot extract a curve from an empty trace");
    }
    Curve c;
    if (kind == CurveKind::affected_cumulative) {
        c.columns = {"round", "affected_total"};
        for (const auto& row : trace) {
            c.rows.push_back({static_cast<double>(row.round),
                              static_cast<double>(row.cumulative_affected)});
        }
    } else {
        c.columns = {"round", "count_stance_0", "count_stance_0.5", "count_stance_1",
                     "count_unknown"};
        for (const auto& row : trace) {
            c.rows.push_back({static_cast<double>(row.round),
                              static_cast<double>(row.count_positive),
                              static_cast<double>(row.count_neutral),
                              static_cast<double>(row.count_negative),
                              static_cast<double>(row.count_unknown)});
        }
    }
    return c;
}

Curve accuracy_series(std::span<const RoundTrace> trace, const ReferenceTrace& ref, TopicId topic,
                      std::size_t nodes) {
    if (trace.empty()) {
        throw ValidationError("cannot score an empty trace");
    }
    AttitudeState replay(nodes, topic + 1, 0.0);
    Curve c;
    c.columns = {"round", "range_accuracy", "stance_accuracy"};
    for (const auto& row : trace) {
        for (const auto& t : row.transitions) {
            if (t.node >= nodes) {
                throw ValidationError("transition node index out of range");
            }
            replay.stance[t.node * replay.topics + topic] = t.to;
        }
        c.rows.push_back({static_cast<double>(row.round), range_accuracy(replay, ref, topic),
                          stance_accuracy(replay, ref, topic)});
    }
    return c;
}

} // namespace dmnai
