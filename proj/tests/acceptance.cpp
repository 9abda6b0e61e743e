// Acceptance suite. Each criterion prints one PASS/FAIL line; the binary
// exits nonzero if any criterion fails.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <v2xtrust/io.hpp>
#include <v2xtrust/simulation.hpp>
#include <v2xtrust/sweep.hpp>

#include <chrono>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>

using namespace v2xtrust;

namespace {

void criterion(const char* name, bool pass) {
    std::printf("[%s] %s\n", pass ? "PASS" : "FAIL", name);
    std::fflush(stdout);
    CHECK_MESSAGE(pass, name);
}

double rel_err(double a, double b) {
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) / scale;
}

struct TrendCheck {
    int violations = 0;
    double worst = 0.0;

    // tolerance: at most one adjacent-pair violation of at most 0.01
    bool ok() const { return violations == 0 || (violations == 1 && worst <= 0.01); }

    static TrendCheck non_decreasing(const std::vector<double>& xs) {
        TrendCheck t;
        for (std::size_t i = 1; i < xs.size(); ++i) {
            if (xs[i] < xs[i - 1] - 1e-12) {
                ++t.violations;
                t.worst = std::max(t.worst, xs[i - 1] - xs[i]);
            }
        }
        return t;
    }
    static TrendCheck non_increasing(std::vector<double> xs) {
        for (double& x : xs) x = -x;
        return non_decreasing(xs);
    }
};

std::vector<double> means(const SweepTable& table, const MeanSd SweepPoint::* field) {
    std::vector<double> out;
    for (const SweepPoint& p : table.points) out.push_back((p.*field).mean.value_or(0.0));
    return out;
}

} // namespace

TEST_CASE("equation oracle suite") {
    const auto started = std::chrono::steady_clock::now();
    std::mt19937 gen(20240817);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    bool pass = true;
    const double tol = 1e-12;

    for (int i = 0; i < 10000 && pass; ++i) {
        // thresholds with th_min < th_max
        double a = u01(gen), b = u01(gen);
        if (a == b) b = a + 0.1;
        TrustThresholds th;
        th.th_min = TrustValue{std::min(a, b)};
        th.th_max = TrustValue{std::max(a, b)};
        th.rc = 0.01 + 0.99 * u01(gen);
        th.c_w = u01(gen);

        // direct trust: successful/total
        const std::uint32_t total = gen() % 50;
        const std::uint32_t successful = total == 0 ? 0 : gen() % (total + 1);
        const auto direct = direct_trust({successful, total});
        if (total == 0) {
            pass = pass && !direct.has_value();
        } else {
            pass = pass && rel_err(direct->value, double(successful) / double(total)) <= tol;
        }

        // current trust: midpoint
        const double past = u01(gen), fresh = u01(gen);
        pass = pass &&
               rel_err(current_trust(TrustValue{past}, TrustValue{fresh}).value,
                       (past + fresh) / 2.0) <= tol;

        // confidence: three-case split
        const double t_rec = u01(gen);
        const double conf_want = t_rec >= th.th_max.value  ? 1.0
                                 : t_rec >= th.th_min.value ? th.c_w
                                                            : 0.0;
        pass = pass && rel_err(confidence(TrustValue{t_rec}, th), conf_want) <= tol;

        // recommendations: clustering, indirect trust and the weight
        std::vector<Recommendation> recs;
        const std::size_t n_recs = gen() % 9;
        for (std::size_t k = 0; k < n_recs; ++k)
            recs.push_back({static_cast<NodeId>(k), 99, TrustValue{u01(gen)},
                            gen() % 2 == 0 ? 1.0 : std::max(th.c_w, 0.05)});
        const ClusteredRecommendations clustered = cluster_recommendations(recs, th);
        double p_num = 0, p_den = 0, n_num = 0, n_den = 0;
        std::size_t n_pos = 0, n_neg = 0;
        for (const Recommendation& r : recs) {
            if (r.value.value >= th.th_min.value) {
                ++n_pos;
                p_num += r.confidence * r.value.value;
                p_den += r.confidence;
            } else {
                ++n_neg;
                n_num += r.confidence * r.value.value;
                n_den += r.confidence;
            }
        }
        pass = pass && clustered.positive.size() == n_pos && clustered.negative.size() == n_neg;
        const auto indirect = indirect_trust(clustered.positive, clustered.negative);
        if (n_recs == 0) {
            pass = pass && !indirect.has_value();
        } else {
            const double alpha = double(n_pos) / double(n_pos + n_neg);
            const double beta = double(n_neg) / double(n_pos + n_neg);
            const double want = alpha * (n_pos ? p_num / p_den : 0.0) +
                                beta * (n_neg ? n_num / n_den : 0.0);
            pass = pass && rel_err(indirect->value, want) <= tol;
        }

        const std::size_t neighbors = 1 + gen() % 12;
        const double w1_raw = double(n_recs) * th.rc / double(neighbors);
        const double w1_want = std::min(1.0, std::max(0.0, w1_raw));
        pass = pass && rel_err(*recommendation_weight(n_recs, th.rc, neighbors), w1_want) <= tol;

        // local trust: eight-row straight-line oracle
        TrustRecord record;
        record.had_previous_communication = gen() % 2 == 0;
        record.past = TrustValue{past};
        record.counters = {successful, total};
        const double w1 = indirect ? w1_want : 0.0;
        const double initial = u01(gen);
        const TrustValue got = local_trust(record, indirect, w1, TrustValue{initial});
        double want = 0.0;
        const bool comm = total > 0;
        const double direct_v = comm ? double(successful) / double(total) : 0.0;
        const double ind_v = indirect ? indirect->value : 0.0;
        if (!record.had_previous_communication) {
            if (comm && indirect) want = w1 * ind_v + (1 - w1) * direct_v;
            else if (comm) want = direct_v;
            else if (indirect) want = ind_v;
            else want = initial;
        } else {
            const double current = (past + direct_v) / 2.0;
            if (comm && indirect) want = w1 * ind_v + (1 - w1) * current;
            else if (comm) want = current;
            else if (indirect) want = w1 * ind_v + (1 - w1) * past;
            else want = past;
        }
        pass = pass && rel_err(got.value, want) <= tol;

        // local decision
        const double t_l = u01(gen);
        const Verdict verdict_want = t_l >= th.th_max.value  ? Verdict::Trusted
                                     : t_l >= th.th_min.value ? Verdict::Uncertain
                                                              : Verdict::Malicious;
        pass = pass && local_decision(TrustValue{t_l}, th) == verdict_want;

        // rsu alarm fractions and decision
        const std::uint32_t window = 1 + gen() % 12;
        const std::uint32_t m_prime = gen() % 20;
        const std::uint32_t u_count = gen() % 20;
        const AlarmFractions f = alarm_fractions({0, m_prime, u_count, window});
        pass = pass && rel_err(f.malicious, double(m_prime) / window) <= tol &&
               rel_err(f.uncertain, double(u_count) / window) <= tol;
        const RsuVerdict rsu_want =
            m_prime > u_count ? RsuVerdict::Malicious : RsuVerdict::NotMalicious;
        pass = pass && rsu_decision(f.malicious, f.uncertain) == rsu_want;

        // rsu ingestion dedup against a brute-force unique-tuple count
        if (i % 100 == 0) {
            RsuTallyStore store;
            std::set<std::tuple<NodeId, Step, int>> unique;
            std::uint32_t want_m = 0, want_u = 0;
            for (int k = 0; k < 30; ++k) {
                const WarningMessage msg{static_cast<NodeId>(gen() % 4), 5,
                                         gen() % 2 == 0 ? Severity::Malicious
                                                        : Severity::Uncertain,
                                         static_cast<Step>(gen() % 3)};
                store.ingest(msg);
                if (unique.insert({msg.issuer, msg.interval,
                                   msg.severity == Severity::Malicious ? 0 : 1})
                        .second) {
                    (msg.severity == Severity::Malicious ? want_m : want_u)++;
                }
            }
            pass = pass && store.find(5)->m_prime == want_m && store.find(5)->u == want_u;
        }

        // global decision quorum
        const std::size_t total_rsus = 1 + gen() % 16;
        const std::size_t alarms = gen() % (total_rsus + 1);
        const GlobalVerdict g_want = double(alarms) >= double(total_rsus) / 2.0 - 1.0
                                         ? GlobalVerdict::Malicious
                                         : GlobalVerdict::Normal;
        pass = pass && global_decision(alarms, total_rsus) == g_want;
    }

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    criterion("equation oracles: 1e4 random inputs, rel err <= 1e-12", pass);
    criterion("equation oracles: runtime under 5 s", elapsed < 5.0);
}

TEST_CASE("case matrix totality") {
    const TrustValue initial{0.5};
    std::set<int> rows;
    bool pass = true;
    for (const bool previous : {false, true}) {
        for (const bool comm : {false, true}) {
            for (const bool recs : {false, true}) {
                TrustRecord record;
                record.had_previous_communication = previous;
                record.past = TrustValue{0.61};
                if (comm) record.counters = {2, 5};
                const auto indirect =
                    recs ? std::optional<TrustValue>(TrustValue{0.27}) : std::nullopt;
                const double w1 = recs ? 0.15 : 0.0;
                const TrustValue got = local_trust(record, indirect, w1, initial);

                const int row = (previous ? 4 : 0) + (comm ? 0 : 2) + (recs ? 0 : 1) + 1;
                double want = 0.0;
                if (!previous && comm && recs) want = w1 * 0.27 + (1 - w1) * 0.4;
                else if (!previous && comm) want = 0.4;
                else if (!previous && recs) want = 0.27;
                else if (!previous) want = 0.5;
                else if (comm && recs) want = w1 * 0.27 + (1 - w1) * (0.61 + 0.4) / 2.0;
                else if (comm) want = (0.61 + 0.4) / 2.0;
                else if (recs) want = w1 * 0.27 + (1 - w1) * 0.61;
                else want = 0.61;

                pass = pass && rel_err(got.value, want) <= 1e-12;
                rows.insert(row);
            }
        }
    }
    criterion("case matrix: all 8 rows exercised, exactly one per combination",
              pass && rows.size() == 8);
}

TEST_CASE("parameter trend reproduction") {
    const auto started = std::chrono::steady_clock::now();
    const ScenarioConfig base;

    const SweepTable tmin =
        run_sweep(base, SweepParam::ThMin, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6}, 20);
    const TrendCheck tmin_trend =
        TrendCheck::non_decreasing(means(tmin, &SweepPoint::fpr_global));
    criterion("th_min sweep: seed-mean FPR non-decreasing (<=1 violation of <=0.01)",
              tmin_trend.ok());

    const SweepTable cw = run_sweep(base, SweepParam::Cw, {0.5, 0.6, 0.7, 0.8, 0.9}, 20);
    const TrendCheck cw_trend = TrendCheck::non_increasing(means(cw, &SweepPoint::fpr_global));
    criterion("c_w sweep: seed-mean FPR non-increasing (<=1 violation of <=0.01)",
              cw_trend.ok());

    const SweepTable mal =
        run_sweep(base, SweepParam::MaliciousFraction, {0.125, 0.5, 0.875}, 20);
    const std::vector<double> pdr = means(mal, &SweepPoint::pdr);
    criterion("malicious sweep: seed-mean PDR strictly increasing",
              pdr.size() == 3 && pdr[0] < pdr[1] && pdr[1] < pdr[2]);
    bool dominance = true;
    for (const SweepPoint& p : mal.points) {
        dominance = dominance &&
                    p.fnr_global.mean.value_or(1.0) <= p.fnr_local.mean.value_or(0.0) + 1e-12;
    }
    criterion("malicious sweep: seed-mean global FNR <= local FNR at every point", dominance);

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    criterion("sweeps complete in under 5 minutes", elapsed < 300.0);
}

TEST_CASE("selective forwarding drop statistics") {
    Rng rng(7);
    EntityAgent sf;
    sf.profile.kind = BehaviorKind::SelectiveForwarding;
    sf.profile.drop_probability = 0.5;
    int drops = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i)
        if (forward_or_drop(sf, rng) == ForwardOutcome::Dropped) ++drops;
    const double rate = static_cast<double>(drops) / n;
    criterion("selective forwarder: empirical drop rate within 0.02 of 0.5",
              std::abs(rate - 0.5) <= 0.02);
}

TEST_CASE("trace invariants over 20 seeded default runs") {
    bool positions_ok = true, trust_ok = true, severity_ok = true, relay_ok = true;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        ScenarioConfig cfg;
        cfg.seed = seed;
        Simulation sim(cfg);
        std::size_t warnings_seen = 0;
        for (Step t = 1; t <= cfg.iterations; ++t) {
            sim.step();
            for (NodeId id = 0; id < cfg.entity_count; ++id) {
                const Vec2 p = sim.world().position(id);
                bool lane = false;
                for (const Road& r : sim.world().layout().roads) {
                    if (r.horizontal && p.y == r.fixed) lane = true;
                    if (!r.horizontal && p.x == r.fixed) lane = true;
                }
                positions_ok = positions_ok && lane && p.x >= 0 && p.x <= cfg.bounds &&
                               p.y >= 0 && p.y <= cfg.bounds;
            }
            for (const EntityAgent& agent : sim.agents()) {
                for (const auto& [subject, record] : agent.records) {
                    trust_ok = trust_ok && record.local.value >= 0.0 &&
                               record.local.value <= 1.0 && record.past.value >= 0.0 &&
                               record.past.value <= 1.0;
                }
            }
            for (; warnings_seen < sim.warning_log().size(); ++warnings_seen) {
                const WarningMessage& w = sim.warning_log()[warnings_seen];
                const auto& records = sim.agent(w.issuer).records;
                auto it = records.find(w.subject);
                if (it == records.end()) continue; // hearsay-only evaluation
                const Verdict v = local_decision(it->second.local, cfg.thresholds);
                severity_ok = severity_ok &&
                              ((w.severity == Severity::Malicious) == (v == Verdict::Malicious));
            }
        }
        for (const RelayChoice& c : sim.relay_choice_log()) {
            relay_ok = relay_ok &&
                       !sim.authority().members_at(c.selector_seen_version).contains(c.relay);
        }
    }
    criterion("traces: no received-blacklist member ever chosen as relay", relay_ok);
    criterion("traces: warning severity always matches the sender verdict", severity_ok);
    criterion("traces: all trust values within [0,1]", trust_ok);
    criterion("traces: positions on-lane and in-bounds every step", positions_ok);
}

TEST_CASE("byte-identical outputs for identical config and seed") {
    ScenarioConfig cfg;
    cfg.seed = 12;
    cfg.dump_trace = true;
    auto render = [&] {
        Simulation sim(cfg);
        const MetricsReport report = sim.run();
        std::ostringstream out;
        write_timeseries_csv(out, report);
        write_trace_csv(out, sim.trace());
        out << summary_json(cfg, report).dump(2);
        return out.str();
    };
    criterion("determinism: identical (config, seed) give byte-identical outputs",
              render() == render());
}

TEST_CASE("improvement rate headline arithmetic") {
    const std::optional<double> rate = improvement_rate(0.73, 0.485);
    criterion("improvement_rate(0.73, 0.485) within 0.5 points of 33.5%",
              rate && std::abs(*rate - 33.5) <= 0.5);
}
