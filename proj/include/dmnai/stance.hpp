#pragma once

#include <cstdint>
#include <string>

namespace dmnai {

using NodeId = std::uint32_t;
using TopicId = std::uint32_t;

// Attitude of one node towards one topic. Lives on the four-point grid
// {-1, 0, 0.5, 1} = {unknown, positive, neutral, negative}; every update
// in the engine lands back on the grid. Grid values are exact in double,
// so equality tests below are exact.
using StanceValue = double;

namespace stance {

inline constexpr StanceValue kUnknown = -1.0;
inline constexpr StanceValue kPositive = 0.0;
inline constexpr StanceValue kNeutral = 0.5;
inline constexpr StanceValue kNegative = 1.0;

inline constexpr bool on_grid(StanceValue t) {
    return t == kUnknown || t == kPositive || t == kNeutral || t == kNegative;
}

inline constexpr bool known(StanceValue t) {
    return t == kPositive || t == kNeutral || t == kNegative;
}

// A node at unknown or neutral takes the first-exposure update rule; only
// nodes already committed to 0 or 1 take the incremental rule.
inline constexpr bool exposure_settled(StanceValue t) {
    return t == kPositive || t == kNegative;
}

// Canonical text form of a grid value ("-1", "0", "0.5", "1"), used by
// every file format so emitted stances are exact and diff-stable.
inline std::string format(StanceValue t) {
    if (t == kUnknown) {
        return "-1";
    }
    if (t == kPositive) {
        return "0";
    }
    if (t == kNeutral) {
        return "0.5";
    }
    if (t == kNegative) {
        return "1";
    }
    return std::to_string(t);
}

} // namespace stance
} // namespace dmnai
