#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "types.hpp"

namespace v2xtrust {

// Central server: collects per-subject alarms from RSUs and maintains the
// versioned global blacklist that gets rebroadcast to the network.

enum class GlobalVerdict { Malicious, Normal };

// Quorum rule, evaluated in real arithmetic (9 RSUs -> threshold 3.5, so
// four alarming RSUs are needed).
inline GlobalVerdict global_decision(std::size_t malicious_alarm_count, std::size_t total_rsus) {
    const double threshold = static_cast<double>(total_rsus) / 2.0 - 1.0;
    return static_cast<double>(malicious_alarm_count) >= threshold ? GlobalVerdict::Malicious
                                                                   : GlobalVerdict::Normal;
}

struct GlobalBlacklist {
    std::set<NodeId> members;
    std::uint64_t version{0};
};

class GlobalAuthority {
public:
    explicit GlobalAuthority(std::size_t total_rsus, bool accumulate_across_windows = true)
        : total_rsus_(total_rsus), accumulate_(accumulate_across_windows) {}

    // A_m counts distinct RSUs that have alarmed on the subject, so one
    // noisy RSU cannot reach the quorum alone; alarms accumulate across
    // windows unless configured otherwise.
    void record_alarm(RsuId rsu, NodeId subject) {
        std::set<RsuId>& alarming = alarms_[subject];
        alarming.insert(rsu);
        if (blacklist_.members.contains(subject)) return;
        if (global_decision(alarming.size(), total_rsus_) == GlobalVerdict::Malicious) {
            blacklist_.members.insert(subject);
            ++blacklist_.version;
            member_history_.emplace_back(blacklist_.version, subject);
        }
    }

    // Called after each RSU evaluation round.
    void end_of_window() {
        if (!accumulate_) alarms_.clear();
    }

    const GlobalBlacklist& blacklist() const { return blacklist_; }

    std::size_t alarm_count(NodeId subject) const {
        auto it = alarms_.find(subject);
        return it == alarms_.end() ? 0 : it->second.size();
    }

    // Members as of a given broadcast version; used to audit what an entity
    // that synced at that version must have known.
    std::set<NodeId> members_at(std::uint64_t version) const {
        std::set<NodeId> out;
        for (const auto& [v, node] : member_history_) {
            if (v <= version) out.insert(node);
        }
        return out;
    }

private:
    std::size_t total_rsus_;
    bool accumulate_;
    std::map<NodeId, std::set<RsuId>> alarms_;
    GlobalBlacklist blacklist_;
    std::vector<std::pair<std::uint64_t, NodeId>> member_history_;
};

} // namespace v2xtrust
