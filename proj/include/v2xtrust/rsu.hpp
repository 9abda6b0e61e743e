#pragma once

#include <cassert>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "types.hpp"

namespace v2xtrust {

// RSU-side aggregation: warnings from surrounding entities are tallied per
// subject over a window of entity intervals, then turned into an alarm when
// malicious warnings outweigh uncertain ones.

enum class RsuVerdict { Malicious, NotMalicious };

struct RsuTally {
    NodeId subject{};
    std::uint32_t m_prime{0}; // deduplicated malicious warnings
    std::uint32_t u{0};       // deduplicated uncertain warnings
    std::uint32_t window{0};  // elapsed entity intervals at evaluation
};

struct AlarmFractions {
    double malicious{0.0};
    double uncertain{0.0};
};

inline AlarmFractions alarm_fractions(const RsuTally& tally) {
    assert(tally.window >= 1);
    const double w = static_cast<double>(tally.window);
    return {static_cast<double>(tally.m_prime) / w, static_cast<double>(tally.u) / w};
}

// Malicious iff the malicious alarm rate strictly exceeds the uncertain
// one; ties and no-evidence both resolve to NotMalicious.
inline RsuVerdict rsu_decision(double malicious_fraction, double uncertain_fraction) {
    assert(malicious_fraction >= 0.0 && uncertain_fraction >= 0.0);
    const double total = malicious_fraction + uncertain_fraction;
    if (total <= 0.0) return RsuVerdict::NotMalicious;
    const double rate_m = malicious_fraction / total;
    const double rate_u = uncertain_fraction / total;
    return (rate_m - rate_u) > 0.0 ? RsuVerdict::Malicious : RsuVerdict::NotMalicious;
}

// Warning store for one RSU. A given (issuer, subject, interval, severity)
// tuple is counted once per window, so a chatty issuer cannot saturate a
// tally by repeating itself.
class RsuTallyStore {
public:
    void ingest(const WarningMessage& msg) {
        Entry& e = entries_[msg.subject];
        e.tally.subject = msg.subject;
        if (!e.seen.insert(Key{msg.issuer, msg.interval, msg.severity}).second) return;
        if (msg.severity == Severity::Malicious)
            ++e.tally.m_prime;
        else
            ++e.tally.u;
    }

    void advance_interval() { ++elapsed_; }
    std::uint32_t elapsed() const { return elapsed_; }
    bool empty() const { return entries_.empty(); }

    const RsuTally* find(NodeId subject) const {
        auto it = entries_.find(subject);
        return it == entries_.end() ? nullptr : &it->second.tally;
    }

    // Stamps each tally with the elapsed window length, hands them out in
    // subject order and resets the store for the next window.
    std::vector<RsuTally> evaluate_and_reset() {
        std::vector<RsuTally> out;
        out.reserve(entries_.size());
        for (auto& [subject, entry] : entries_) {
            entry.tally.window = elapsed_;
            out.push_back(entry.tally);
        }
        entries_.clear();
        elapsed_ = 0;
        return out;
    }

private:
    struct Key {
        NodeId issuer;
        Step interval;
        Severity severity;
        friend auto operator<=>(const Key&, const Key&) = default;
    };
    struct Entry {
        RsuTally tally{};
        std::set<Key> seen;
    };

    std::map<NodeId, Entry> entries_;
    std::uint32_t elapsed_{0};
};

} // namespace v2xtrust
