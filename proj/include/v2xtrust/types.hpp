#pragma once

#include <cmath>
#include <compare>
#include <cstdint>

namespace v2xtrust {

using NodeId = std::uint32_t;
using RsuId = std::uint32_t;
using Step = std::uint32_t; // simulation iteration index, 1 s each

struct Vec2 {
    double x{0.0};
    double y{0.0};
};

inline double distance(Vec2 a, Vec2 b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

enum class Severity { Malicious, Uncertain };
enum class Verdict { Trusted, Uncertain, Malicious };

// Sent by an entity to its in-range RSUs at the end of an interval.
struct WarningMessage {
    NodeId issuer{};
    NodeId subject{};
    Severity severity{Severity::Uncertain};
    Step interval{};
};

inline const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::Trusted: return "trusted";
    case Verdict::Uncertain: return "uncertain";
    case Verdict::Malicious: return "malicious";
    }
    return "?";
}

inline const char* to_string(Severity s) {
    return s == Severity::Malicious ? "malicious" : "uncertain";
}

} // namespace v2xtrust
