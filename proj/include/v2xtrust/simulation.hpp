#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "agent.hpp"
#include "config.hpp"
#include "global_authority.hpp"
#include "metrics.hpp"
#include "mobility.hpp"
#include "rng.hpp"
#include "rsu.hpp"
#include "trust.hpp"
#include "types.hpp"

namespace v2xtrust {

// Deterministic discrete-time simulation. Each iteration is one entity
// interval: mobility, blacklist sync, beacons, relay forwarding with
// watchdog accounting, fresh transactions, the trust digest with warning
// emission, and RSU window evaluation feeding the global authority.
//
// Packets are store-and-forward: a handoff made in one iteration is acted
// on by the relay in the next, so the observer may have moved out of
// overhear range by then, in which case the interaction is not counted.

struct TraceRow {
    Step step{};
    NodeId node{};
    Vec2 position{};
    double speed{0.0};
};

struct RelayChoice {
    Step step{};
    NodeId selector{};
    NodeId relay{};
    std::uint64_t selector_seen_version{};
};

struct ForwardEvent {
    Step step{};
    NodeId relay{};
    BehaviorKind kind{};
    ForwardOutcome outcome{};
};

struct RsuAlarm {
    Step step{};
    RsuId rsu{};
    NodeId subject{};
};

struct TallyEvaluation {
    Step step{};
    RsuId rsu{};
    RsuTally tally{};
    bool alarmed{false};
};

class Simulation {
public:
    explicit Simulation(const ScenarioConfig& cfg)
        : Simulation(cfg, std::vector<EntityKinematics>{}) {}

    // Explicit initial placement (one entry per entity) instead of the
    // seeded random one; used to construct exact geometries in tests.
    Simulation(const ScenarioConfig& cfg, std::vector<EntityKinematics> placement)
        : cfg_(cfg), rng_(cfg.seed), world_(build_world(cfg, rng_, agents_, std::move(placement))) {
        for (const EntityAgent& a : agents_) {
            if (a.profile.malicious()) malicious_.insert(a.id);
            else normal_.insert(a.id);
        }
        rsu_stores_.resize(world_.rsus().size());
        authority_.emplace(world_.rsus().size(), cfg_.accumulate_rsu_alarms);
        inbox_current_.resize(agents_.size());
        inbox_next_.resize(agents_.size());
        last_beacons_.resize(agents_.size());
        neighbor_cache_.resize(agents_.size());
        rsu_cache_.resize(agents_.size());
    }

    // Runs the configured number of iterations and reports final metrics.
    MetricsReport run() {
        while (step_ < cfg_.iterations) step();
        MetricsReport report;
        report.local = series_.back().local;
        report.global = series_.back().global;
        report.pdr = series_.back().pdr;
        report.packets = packets_;
        report.series = series_;
        report.global_blacklist = authority_->blacklist().members;
        report.blacklist_version = authority_->blacklist().version;
        report.malicious_truth = malicious_;
        report.normal_truth = normal_;
        return report;
    }

    void step() {
        ++step_;
        world_.step(rng_, 1.0);
        if (cfg_.dump_trace) record_trace();
        refresh_connectivity_caches();
        sync_blacklists();
        emit_beacons();
        process_relay_queues();
        generate_transactions();
        trust_digest();
        advance_rsu_windows();
        series_.push_back(snapshot_metrics());
    }

    // --- inspection -------------------------------------------------------

    Step current_step() const { return step_; }
    const ScenarioConfig& config() const { return cfg_; }
    const World& world() const { return world_; }
    const std::vector<EntityAgent>& agents() const { return agents_; }
    const EntityAgent& agent(NodeId id) const { return agents_[id]; }
    const GlobalAuthority& authority() const { return *authority_; }
    const std::vector<RsuTallyStore>& rsu_stores() const { return rsu_stores_; }
    const PacketCounts& packets() const { return packets_; }
    const std::vector<IterationMetrics>& series() const { return series_; }
    const std::set<NodeId>& malicious_truth() const { return malicious_; }
    const std::set<NodeId>& normal_truth() const { return normal_; }

    const std::vector<WarningMessage>& warning_log() const { return warning_log_; }
    const std::vector<RelayChoice>& relay_choice_log() const { return relay_choice_log_; }
    const std::vector<ForwardEvent>& forward_log() const { return forward_log_; }
    const std::vector<RsuAlarm>& alarm_log() const { return alarm_log_; }
    const std::vector<TallyEvaluation>& tally_eval_log() const { return tally_eval_log_; }
    const std::vector<TransactionPacket>& packet_log() const { return packet_log_; }
    const std::vector<BeaconMessage>& last_beacons() const { return last_beacons_; }
    const std::vector<TraceRow>& trace() const { return trace_; }
    std::uint64_t beacons_emitted() const { return beacons_emitted_; }
    std::uint64_t beacon_deliveries() const { return beacon_deliveries_; }

private:
    // --- setup ------------------------------------------------------------

    static World build_world(const ScenarioConfig& cfg, Rng& rng,
                             std::vector<EntityAgent>& agents_out,
                             std::vector<EntityKinematics> placement) {
        validate_config(cfg);
        assert(placement.empty() || placement.size() == cfg.entity_count);
        RoadLayout layout = RoadLayout::make(cfg.bounds, cfg.horizontal_roads, cfg.vertical_roads);

        std::vector<BehaviorKind> kinds;
        kinds.insert(kinds.end(), cfg.selective_forwarding_count,
                     BehaviorKind::SelectiveForwarding);
        kinds.insert(kinds.end(), cfg.good_mouthing_count, BehaviorKind::GoodMouthing);
        kinds.insert(kinds.end(), cfg.bad_mouthing_count, BehaviorKind::BadMouthing);
        kinds.resize(cfg.entity_count, BehaviorKind::Normal);
        shuffle(kinds, rng);

        std::vector<EntityClass> classes;
        for (std::size_t c = 0; c < kEntityClassCount; ++c)
            classes.insert(classes.end(), cfg.class_counts[c], static_cast<EntityClass>(c));
        shuffle(classes, rng);

        std::set<NodeId> malicious, normal;
        for (NodeId id = 0; id < cfg.entity_count; ++id)
            (kinds[id] == BehaviorKind::Normal ? normal : malicious).insert(id);

        agents_out.clear();
        agents_out.reserve(cfg.entity_count);
        std::vector<EntityKinematics> entities;
        entities.reserve(cfg.entity_count);
        for (NodeId id = 0; id < cfg.entity_count; ++id) {
            EntityAgent agent;
            agent.id = id;
            agent.profile.kind = kinds[id];
            if (kinds[id] == BehaviorKind::SelectiveForwarding) {
                agent.profile.drop_probability = cfg.drop_probability;
                agent.profile.accomplices = without(malicious, id);
            } else if (kinds[id] == BehaviorKind::GoodMouthing) {
                agent.profile.accomplices = without(malicious, id);
            } else if (kinds[id] == BehaviorKind::BadMouthing) {
                agent.profile.victims = normal;
            }
            agents_out.push_back(std::move(agent));

            if (!placement.empty()) {
                entities.push_back(placement[id]);
                continue;
            }
            EntityKinematics e;
            e.klass = classes[id];
            e.road = rng.pick(layout.roads.size());
            e.direction = rng.pick(2) == 0 ? +1 : -1;
            e.offset = rng.uniform(0.0, layout.roads[e.road].length);
            const SpeedRange& range = cfg.speed_ranges[static_cast<std::size_t>(e.klass)];
            e.speed = rng.uniform(range.lo, range.hi);
            entities.push_back(e);
        }

        return World(std::move(layout), rsu_sites(cfg), std::move(entities), cfg.speed_ranges,
                     cfg.speed_resample_prob);
    }

    static void shuffle(auto& v, Rng& rng) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[rng.pick(i)]);
    }

    static std::set<NodeId> without(const std::set<NodeId>& s, NodeId id) {
        std::set<NodeId> out = s;
        out.erase(id);
        return out;
    }

    // --- per-step phases ----------------------------------------------------

    void record_trace() {
        for (NodeId id = 0; id < agents_.size(); ++id) {
            const EntityKinematics& k = world_.kinematics(id);
            trace_.push_back({step_, id, k.position(world_.layout()), k.speed});
        }
    }

    void refresh_connectivity_caches() {
        for (NodeId id = 0; id < agents_.size(); ++id) {
            neighbor_cache_[id] = world_.neighbors(id, cfg_.comm_range);
            rsu_cache_[id] = world_.reachable_rsus(id, cfg_.comm_range);
        }
    }

    // Entities in range of any RSU pick up the latest global blacklist the
    // step after it changed.
    void sync_blacklists() {
        const GlobalBlacklist& bl = authority_->blacklist();
        for (EntityAgent& agent : agents_) {
            if (agent.seen_blacklist_version >= bl.version) continue;
            if (rsu_cache_[agent.id].empty()) continue;
            agent.local_blacklist.insert(bl.members.begin(), bl.members.end());
            agent.seen_blacklist_version = bl.version;
        }
    }

    void emit_beacons() {
        for (const EntityAgent& agent : agents_) {
            const EntityKinematics& kin = world_.kinematics(agent.id);
            last_beacons_[agent.id] =
                emit_beacon(agent, kin.position(world_.layout()), kin.speed, kin.direction, step_);
            ++beacons_emitted_;
            beacon_deliveries_ += neighbor_cache_[agent.id].size();
        }
    }

    void process_relay_queues() {
        for (std::size_t i = 0; i < agents_.size(); ++i)
            inbox_current_[i] = std::exchange(inbox_next_[i], {});
        for (NodeId id = 0; id < agents_.size(); ++id) {
            std::vector<TransactionPacket> inbox = std::move(inbox_current_[id]);
            inbox_current_[id].clear();
            const EntityAgent& relay = agents_[id];
            for (TransactionPacket& packet : inbox) {
                assert(packet.hop_path.size() >= 2 && packet.hop_path.back() == id);
                const NodeId observer = packet.hop_path[packet.hop_path.size() - 2];
                const ForwardOutcome outcome = forward_or_drop(relay, rng_);
                forward_log_.push_back({step_, id, relay.profile.kind, outcome});
                if (distance(world_.position(observer), world_.position(id)) <= cfg_.comm_range) {
                    observe_interaction(agents_[observer], id, outcome, cfg_.initial_trust);
                }
                if (outcome == ForwardOutcome::Dropped) {
                    finalize(std::move(packet), PacketStatus::Dropped, DropCause::Attack);
                } else {
                    route_onward(id, std::move(packet));
                }
            }
        }
    }

    void generate_transactions() {
        for (NodeId id = 0; id < agents_.size(); ++id) {
            for (std::uint32_t n = 0; n < cfg_.transactions_per_entity; ++n) {
                TransactionPacket packet;
                packet.origin = id;
                packet.sequence = next_sequence_++;
                packet.hop_path = {id};
                packet.generated_at = step_;
                ++packets_.generated;
                route_onward(id, std::move(packet));
            }
        }
    }

    // Connectivity phase followed by the communication phase: deliver
    // straight to an in-range RSU, otherwise hand off to the most trusted
    // eligible neighbor; the relay repeats the procedure next iteration.
    void route_onward(NodeId holder, TransactionPacket&& packet) {
        if (!rsu_cache_[holder].empty()) {
            finalize(std::move(packet), PacketStatus::Delivered, DropCause::None);
            return;
        }
        const std::size_t relays_used = packet.hop_path.size() - 1;
        if (relays_used >= cfg_.hop_limit) {
            finalize(std::move(packet), PacketStatus::Dropped, DropCause::Ttl);
            return;
        }
        const EntityAgent& selector = agents_[holder];
        const std::optional<NodeId> next = select_relay(
            selector, neighbor_cache_[holder], packet.hop_path, cfg_.thresholds,
            cfg_.initial_trust);
        if (!next) {
            finalize(std::move(packet), PacketStatus::Dropped, DropCause::NoRoute);
            return;
        }
        relay_choice_log_.push_back({step_, holder, *next, selector.seen_blacklist_version});
        packet.hop_path.push_back(*next);
        inbox_next_[*next].push_back(std::move(packet));
    }

    void finalize(TransactionPacket&& packet, PacketStatus status, DropCause cause) {
        packet.status = status;
        packet.drop_cause = cause;
        switch (cause) {
        case DropCause::None: ++packets_.delivered; break;
        case DropCause::Attack: ++packets_.dropped_attack; break;
        case DropCause::NoRoute: ++packets_.dropped_no_route; break;
        case DropCause::Ttl: ++packets_.dropped_ttl; break;
        }
        packet_log_.push_back(std::move(packet));
    }

    // End-of-interval trust digest. A first pass computes every
    // (observer, neighbor) evaluation from the interval-start tables, so
    // recommendation answers and confidence values are order-independent; a
    // second pass applies updates, blacklists and warning delivery.
    //
    // Trust records persist only for pairs that actually communicated at
    // some point; hearsay-only evaluations drive the verdict, blacklist and
    // warnings of the moment but are not stored, not rolled into past trust
    // and not re-shared as recommendations.
    void trust_digest() {
        struct Pending {
            NodeId observer{};
            NodeId subject{};
            TrustValue t_l{};
            Verdict verdict{Verdict::Uncertain};
            bool communicated{false};
            std::vector<Recommendation> recommendations;
        };
        std::vector<Pending> pending;

        for (NodeId i = 0; i < agents_.size(); ++i) {
            const std::vector<NodeId>& nbrs = neighbor_cache_[i];
            for (NodeId j : nbrs) {
                std::vector<Recommendation> recs = collect_recommendations(i, j, nbrs);
                const ClusteredRecommendations clustered =
                    cluster_recommendations(recs, cfg_.thresholds);
                const std::optional<TrustValue> indirect =
                    indirect_trust(clustered.positive, clustered.negative);
                double w1 = 0.0;
                if (indirect) {
                    w1 = recommendation_weight(recs.size(), cfg_.thresholds.rc, nbrs.size())
                             .value_or(0.0);
                }
                static const TrustRecord fresh{};
                auto it = agents_[i].records.find(j);
                const TrustRecord& record = it == agents_[i].records.end() ? fresh : it->second;
                const TrustValue t_l = local_trust(record, indirect, w1, cfg_.initial_trust);
                pending.push_back({i, j, t_l, local_decision(t_l, cfg_.thresholds),
                                   record.counters.total > 0, std::move(recs)});
            }
        }

        for (Pending& p : pending) {
            EntityAgent& observer = agents_[p.observer];
            auto it = observer.records.find(p.subject);
            if (it != observer.records.end()) {
                TrustRecord& record = it->second;
                record.local = p.t_l;
                record.past = p.t_l;
                record.had_previous_communication |= p.communicated;
                record.counters.reset();
                record.recommendations = std::move(p.recommendations);
            }

            if (p.verdict == Verdict::Trusted) continue;
            if (p.verdict == Verdict::Malicious) {
                observer.local_blacklist.insert(p.subject);
                observer.own_detections.insert(p.subject);
            }
            const WarningMessage msg{p.observer, p.subject,
                                     p.verdict == Verdict::Malicious ? Severity::Malicious
                                                                     : Severity::Uncertain,
                                     step_};
            warning_log_.push_back(msg);
            for (RsuId rsu : rsu_cache_[p.observer]) rsu_stores_[rsu].ingest(msg);
        }
    }

    // Asks the observer's one-hop neighbors (optionally a sample) about j,
    // keeping answers whose recommender has nonzero confidence.
    std::vector<Recommendation> collect_recommendations(NodeId observer, NodeId subject,
                                                        const std::vector<NodeId>& nbrs) {
        std::vector<NodeId> candidates;
        for (NodeId k : nbrs)
            if (k != subject) candidates.push_back(k);
        if (cfg_.recommendation_sample > 0 && candidates.size() > cfg_.recommendation_sample) {
            shuffle(candidates, rng_);
            candidates.resize(cfg_.recommendation_sample);
            std::sort(candidates.begin(), candidates.end());
        }
        std::vector<Recommendation> recs;
        for (NodeId k : candidates) {
            const std::optional<TrustValue> answer = answer_recommendation_request(
                agents_[k], observer, subject, cfg_.sf_truthful_recommendations);
            if (!answer) continue;
            const double conf =
                confidence(agents_[observer].trust_of(k, cfg_.initial_trust), cfg_.thresholds);
            if (conf <= 0.0) continue;
            recs.push_back({k, subject, *answer, conf});
        }
        return recs;
    }

    void advance_rsu_windows() {
        for (RsuTallyStore& store : rsu_stores_) store.advance_interval();
        const bool boundary = rsu_stores_.empty() ? false
                                                  : rsu_stores_.front().elapsed() >= cfg_.rsu_window;
        if (!boundary && step_ != cfg_.iterations) return;
        for (RsuId rsu = 0; rsu < rsu_stores_.size(); ++rsu) {
            for (const RsuTally& tally : rsu_stores_[rsu].evaluate_and_reset()) {
                const AlarmFractions f = alarm_fractions(tally);
                const bool alarmed =
                    rsu_decision(f.malicious, f.uncertain) == RsuVerdict::Malicious;
                tally_eval_log_.push_back({step_, rsu, tally, alarmed});
                if (alarmed) {
                    alarm_log_.push_back({step_, rsu, tally.subject});
                    authority_->record_alarm(rsu, tally.subject);
                }
            }
        }
        authority_->end_of_window();
    }

    IterationMetrics snapshot_metrics() const {
        IterationMetrics m;
        m.step = step_;
        m.global = compute_fnr_fpr(authority_->blacklist().members, malicious_, normal_);
        m.pdr = compute_pdr(packets_);

        double fnr_sum = 0.0, fpr_sum = 0.0;
        std::size_t fnr_n = 0, fpr_n = 0;
        for (NodeId i : normal_) {
            const LevelMetrics own =
                compute_fnr_fpr(agents_[i].own_detections, malicious_, without(normal_, i));
            if (own.fnr) {
                fnr_sum += *own.fnr;
                ++fnr_n;
            }
            if (own.fpr) {
                fpr_sum += *own.fpr;
                ++fpr_n;
            }
        }
        if (fnr_n > 0) m.local.fnr = fnr_sum / static_cast<double>(fnr_n);
        if (fpr_n > 0) m.local.fpr = fpr_sum / static_cast<double>(fpr_n);
        return m;
    }

    ScenarioConfig cfg_;
    Rng rng_;
    std::vector<EntityAgent> agents_;
    World world_;
    std::vector<RsuTallyStore> rsu_stores_;
    std::optional<GlobalAuthority> authority_;
    std::set<NodeId> malicious_;
    std::set<NodeId> normal_;

    Step step_{0};
    std::uint64_t next_sequence_{0};
    PacketCounts packets_;
    std::vector<IterationMetrics> series_;

    std::vector<std::vector<NodeId>> neighbor_cache_;
    std::vector<std::vector<RsuId>> rsu_cache_;
    std::vector<std::vector<TransactionPacket>> inbox_current_;
    std::vector<std::vector<TransactionPacket>> inbox_next_;

    std::vector<WarningMessage> warning_log_;
    std::vector<RelayChoice> relay_choice_log_;
    std::vector<ForwardEvent> forward_log_;
    std::vector<RsuAlarm> alarm_log_;
    std::vector<TallyEvaluation> tally_eval_log_;
    std::vector<TransactionPacket> packet_log_;
    std::vector<BeaconMessage> last_beacons_;
    std::vector<TraceRow> trace_;
    std::uint64_t beacons_emitted_{0};
    std::uint64_t beacon_deliveries_{0};
};

// Convenience entry point matching the harness contract.
inline MetricsReport run_scenario(const ScenarioConfig& cfg) {
    Simulation sim(cfg);
    return sim.run();
}

} // namespace v2xtrust
