#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <optional>
#include <vector>

#include "types.hpp"

namespace v2xtrust {

// Entity-level trust computation. An observer fuses its own interaction
// history with neighbor recommendations into a local trust value per
// subject, then maps that value onto a three-way verdict.

// Trust value in [0, 1].
struct TrustValue {
    double value{0.0};
    friend constexpr auto operator<=>(const TrustValue&, const TrustValue&) = default;
};

// Watchdog counters for one (observer, subject) pair within one interval.
struct InteractionCounters {
    std::uint32_t successful{0};
    std::uint32_t total{0};

    void record(bool forwarded) {
        ++total;
        if (forwarded) ++successful;
    }
    void reset() { successful = total = 0; }
};

// One answer to a recommendation request, already weighted by the
// observer's confidence in the recommender.
struct Recommendation {
    NodeId recommender{};
    NodeId subject{};
    TrustValue value{};
    double confidence{0.0}; // one of {0, c_w, 1}
};

struct TrustThresholds {
    TrustValue th_min{0.4};
    TrustValue th_max{0.7};
    double rc{0.3};  // recommendation factor
    double c_w{0.9}; // confidence weight for uncertain recommenders
};

// Per-(observer, subject) trust state carried across intervals.
struct TrustRecord {
    NodeId subject{};
    TrustValue past{};  // local trust rolled forward at the last interval boundary
    TrustValue local{}; // latest computed local trust; answered to rec requests
    InteractionCounters counters{};
    bool had_previous_communication{false};
    std::vector<Recommendation> recommendations{}; // per-interval buffer
};

// Success ratio of this interval's interactions. Zero total means no
// current communication and routes the caller to the matching case rows.
inline std::optional<TrustValue> direct_trust(InteractionCounters c) {
    assert(c.successful <= c.total);
    if (c.total == 0) return std::nullopt;
    return TrustValue{static_cast<double>(c.successful) / static_cast<double>(c.total)};
}

inline TrustValue current_trust(TrustValue past, TrustValue direct) {
    return TrustValue{(past.value + direct.value) / 2.0};
}

// Credibility of a recommender, derived from the observer's own local
// trust in it: full, c_w, or none.
inline double confidence(TrustValue recommender_local_trust, const TrustThresholds& th) {
    if (recommender_local_trust.value >= th.th_max.value) return 1.0;
    if (recommender_local_trust.value >= th.th_min.value) return th.c_w;
    return 0.0;
}

struct ClusteredRecommendations {
    std::vector<Recommendation> positive;
    std::vector<Recommendation> negative;
};

// Splits recommendations at th_min; the boundary value counts as positive.
// Callers discard zero-confidence recommendations before clustering.
inline ClusteredRecommendations cluster_recommendations(const std::vector<Recommendation>& recs,
                                                        const TrustThresholds& th) {
    ClusteredRecommendations out;
    for (const auto& r : recs) {
        (r.value.value >= th.th_min.value ? out.positive : out.negative).push_back(r);
    }
    return out;
}

// Count-weighted blend of the confidence-weighted cluster means.
// Empty input signals "no recommendations" to the caller.
inline std::optional<TrustValue> indirect_trust(const std::vector<Recommendation>& positive,
                                                const std::vector<Recommendation>& negative) {
    const std::size_t n = positive.size();
    const std::size_t m = negative.size();
    if (n + m == 0) return std::nullopt;

    const auto weighted_mean = [](const std::vector<Recommendation>& recs) {
        double weight_sum = 0.0;
        double value_sum = 0.0;
        for (const auto& r : recs) {
            weight_sum += r.confidence;
            value_sum += r.confidence * r.value.value;
        }
        return weight_sum > 0.0 ? value_sum / weight_sum : 0.0;
    };

    const double alpha = static_cast<double>(n) / static_cast<double>(n + m);
    const double beta = static_cast<double>(m) / static_cast<double>(n + m);
    const double p = n > 0 ? weighted_mean(positive) : 0.0;
    const double q = m > 0 ? weighted_mean(negative) : 0.0;
    return TrustValue{alpha * p + beta * q};
}

// Weight given to indirect trust, clamped so w1 and w2 = 1 - w1 stay a
// convex pair. Zero neighbors signals "treat as no recommendations".
inline std::optional<double> recommendation_weight(std::size_t n_plus_m, double rc,
                                                   std::size_t neighbor_count) {
    if (neighbor_count == 0) return std::nullopt;
    const double raw =
        static_cast<double>(n_plus_m) * rc / static_cast<double>(neighbor_count);
    return std::clamp(raw, 0.0, 1.0);
}

// The eight-row case matrix: first-time vs. previous communication,
// crossed with presence of current communication and of recommendations.
// When both sources exist the result is w1*indirect + (1-w1)*own; a lone
// source gets weight one; with neither and no history, the initial value.
inline TrustValue local_trust(const TrustRecord& record, std::optional<TrustValue> indirect,
                              double w1, TrustValue initial) {
    assert(w1 >= 0.0 && w1 <= 1.0);
    const std::optional<TrustValue> direct = direct_trust(record.counters);
    const bool communicated = direct.has_value();
    const bool recommended = indirect.has_value();

    if (!record.had_previous_communication) {
        if (communicated && recommended)
            return TrustValue{w1 * indirect->value + (1.0 - w1) * direct->value};
        if (communicated) return *direct;
        if (recommended) return *indirect;
        return initial;
    }

    if (communicated) {
        const TrustValue current = current_trust(record.past, *direct);
        if (recommended)
            return TrustValue{w1 * indirect->value + (1.0 - w1) * current.value};
        return current;
    }
    if (recommended)
        return TrustValue{w1 * indirect->value + (1.0 - w1) * record.past.value};
    return record.past;
}

// Three-way verdict; both thresholds are inclusive on their lower side.
inline Verdict local_decision(TrustValue t, const TrustThresholds& th) {
    if (t.value >= th.th_max.value) return Verdict::Trusted;
    if (t.value >= th.th_min.value) return Verdict::Uncertain;
    return Verdict::Malicious;
}

} // namespace v2xtrust
