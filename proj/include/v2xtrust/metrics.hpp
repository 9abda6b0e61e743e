#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "types.hpp"

namespace v2xtrust {

// Detection metrics against ground-truth behavior profiles. FNR is the
// fraction of malicious nodes left undetected, FPR the fraction of normal
// nodes wrongly flagged; an empty denominator yields "not applicable" and
// is excluded from aggregates. PDR is dropped over generated packets.

struct LevelMetrics {
    std::optional<double> fnr;
    std::optional<double> fpr;
};

struct PacketCounts {
    std::uint64_t generated{0};
    std::uint64_t delivered{0};
    std::uint64_t dropped_attack{0};
    std::uint64_t dropped_no_route{0};
    std::uint64_t dropped_ttl{0};

    std::uint64_t dropped() const { return dropped_attack + dropped_no_route + dropped_ttl; }
};

struct IterationMetrics {
    Step step{};
    LevelMetrics local;
    LevelMetrics global;
    double pdr{0.0};
};

inline LevelMetrics compute_fnr_fpr(const std::set<NodeId>& flagged,
                                    const std::set<NodeId>& malicious,
                                    const std::set<NodeId>& normal) {
    LevelMetrics out;
    if (!malicious.empty()) {
        std::size_t missed = 0;
        for (NodeId id : malicious)
            if (!flagged.contains(id)) ++missed;
        out.fnr = static_cast<double>(missed) / static_cast<double>(malicious.size());
    }
    if (!normal.empty()) {
        std::size_t hit = 0;
        for (NodeId id : normal)
            if (flagged.contains(id)) ++hit;
        out.fpr = static_cast<double>(hit) / static_cast<double>(normal.size());
    }
    return out;
}

inline double compute_pdr(const PacketCounts& packets) {
    if (packets.generated == 0) return 0.0;
    return static_cast<double>(packets.dropped()) / static_cast<double>(packets.generated);
}

// Relative improvement of metric_b over baseline metric_a, in percent.
// A zero baseline has no defined rate.
inline std::optional<double> improvement_rate(double metric_a, double metric_b) {
    if (metric_a <= 0.0) return std::nullopt;
    return (metric_a - metric_b) / metric_a * 100.0;
}

struct MetricsReport {
    LevelMetrics local;  // per-observer averages over normal entities
    LevelMetrics global; // against the final global blacklist
    double pdr{0.0};
    PacketCounts packets;
    std::vector<IterationMetrics> series;
    std::set<NodeId> global_blacklist;
    std::uint64_t blacklist_version{0};
    std::set<NodeId> malicious_truth;
    std::set<NodeId> normal_truth;
};

} // namespace v2xtrust
