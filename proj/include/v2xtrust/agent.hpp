#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "rng.hpp"
#include "trust.hpp"
#include "types.hpp"

namespace v2xtrust {

// Per-entity agent logic: behavior profiles, transaction packets, watchdog
// accounting and recommendation answering. Mouthing attackers forward
// honestly and lie only when answering recommendation requests; selective
// forwarders drop relayed packets at random and answer truthfully.

enum class BehaviorKind { Normal, SelectiveForwarding, GoodMouthing, BadMouthing };

inline const char* to_string(BehaviorKind k) {
    switch (k) {
    case BehaviorKind::Normal: return "normal";
    case BehaviorKind::SelectiveForwarding: return "selective_forwarding";
    case BehaviorKind::GoodMouthing: return "good_mouthing";
    case BehaviorKind::BadMouthing: return "bad_mouthing";
    }
    return "?";
}

struct BehaviorProfile {
    BehaviorKind kind{BehaviorKind::Normal};
    double drop_probability{0.0};  // selective forwarding only
    std::set<NodeId> accomplices;  // good-mouthing: vouched-for nodes
    std::set<NodeId> victims;      // bad-mouthing: slandered nodes

    bool malicious() const { return kind != BehaviorKind::Normal; }
};

enum class PacketStatus { InFlight, Delivered, Dropped };
enum class DropCause { None, Attack, NoRoute, Ttl };

inline const char* to_string(DropCause c) {
    switch (c) {
    case DropCause::None: return "none";
    case DropCause::Attack: return "attack";
    case DropCause::NoRoute: return "no-route";
    case DropCause::Ttl: return "ttl";
    }
    return "?";
}

struct TransactionPacket {
    NodeId origin{};
    std::uint64_t sequence{};
    std::vector<NodeId> hop_path; // origin followed by each relay
    PacketStatus status{PacketStatus::InFlight};
    DropCause drop_cause{DropCause::None};
    Step generated_at{};
};

struct BeaconMessage {
    NodeId origin{};
    Vec2 position{};
    double speed{0.0};
    int heading{+1};
    Step step{};
};

enum class ForwardOutcome { Forwarded, Dropped };

struct EntityAgent {
    NodeId id{};
    BehaviorProfile profile{};
    std::map<NodeId, TrustRecord> records;
    std::set<NodeId> local_blacklist; // own malicious verdicts plus received global entries
    std::set<NodeId> own_detections;  // own verdicts only; drives the local-level metrics
    std::uint64_t seen_blacklist_version{0};

    TrustValue trust_of(NodeId subject, TrustValue initial) const {
        auto it = records.find(subject);
        return it == records.end() ? initial : it->second.local;
    }

    Verdict verdict_of(NodeId subject, const TrustThresholds& th, TrustValue initial) const {
        return local_decision(trust_of(subject, initial), th);
    }
};

// Truthful kinematics snapshot broadcast to all current neighbors. Every
// behavior kind beacons honestly; the attacks live in forwarding and
// recommendation answers.
inline BeaconMessage emit_beacon(const EntityAgent& agent, Vec2 position, double speed,
                                 int heading, Step step) {
    return BeaconMessage{agent.id, position, speed, heading, step};
}

// Behavioral forwarding decision for a packet this agent is relaying.
// Only selective forwarders consume randomness.
inline ForwardOutcome forward_or_drop(const EntityAgent& agent, Rng& rng) {
    if (agent.profile.kind == BehaviorKind::SelectiveForwarding &&
        rng.bernoulli(agent.profile.drop_probability)) {
        return ForwardOutcome::Dropped;
    }
    return ForwardOutcome::Forwarded;
}

// Watchdog: the observer handed a packet to `relay` and overheard the
// outcome. Creates the record on first contact.
inline InteractionCounters& observe_interaction(EntityAgent& observer, NodeId relay,
                                                ForwardOutcome outcome, TrustValue initial) {
    auto [it, inserted] = observer.records.try_emplace(relay);
    if (inserted) {
        it->second.subject = relay;
        it->second.local = initial;
    }
    it->second.counters.record(outcome == ForwardOutcome::Forwarded);
    return it->second.counters;
}

// Answer to a recommendation request about `subject`. No record of the
// subject means no answer. Mouthing attackers lie about their target sets;
// everyone else reports its own local trust. Selective forwarders can be
// switched to vouch for their accomplices as well.
inline std::optional<TrustValue> answer_recommendation_request(
    const EntityAgent& agent, [[maybe_unused]] NodeId requester, NodeId subject,
    bool sf_truthful_recommendations = true) {
    auto it = agent.records.find(subject);
    if (it == agent.records.end()) return std::nullopt;
    switch (agent.profile.kind) {
    case BehaviorKind::GoodMouthing:
        if (agent.profile.accomplices.contains(subject)) return TrustValue{1.0};
        break;
    case BehaviorKind::BadMouthing:
        if (agent.profile.victims.contains(subject)) return TrustValue{0.0};
        break;
    case BehaviorKind::SelectiveForwarding:
        if (!sf_truthful_recommendations && agent.profile.accomplices.contains(subject))
            return TrustValue{1.0};
        break;
    case BehaviorKind::Normal:
        break;
    }
    return it->second.local;
}

// Relay choice: highest local trust among candidates that are not locally
// blacklisted, not judged malicious and not already on the packet's path;
// ties break toward the lowest node id.
inline std::optional<NodeId> select_relay(const EntityAgent& selector,
                                          const std::vector<NodeId>& neighbor_ids,
                                          const std::vector<NodeId>& hop_path,
                                          const TrustThresholds& th, TrustValue initial) {
    std::optional<NodeId> best;
    double best_trust = -1.0;
    for (NodeId candidate : neighbor_ids) {
        if (selector.local_blacklist.contains(candidate)) continue;
        if (selector.verdict_of(candidate, th, initial) == Verdict::Malicious) continue;
        bool on_path = false;
        for (NodeId hop : hop_path) {
            if (hop == candidate) {
                on_path = true;
                break;
            }
        }
        if (on_path) continue;
        const double trust = selector.trust_of(candidate, initial).value;
        if (trust > best_trust) { // ids ascending, so first wins ties
            best_trust = trust;
            best = candidate;
        }
    }
    return best;
}

} // namespace v2xtrust
