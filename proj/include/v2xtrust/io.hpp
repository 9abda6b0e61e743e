#pragma once

#include <cstdio>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "config.hpp"
#include "metrics.hpp"
#include "simulation.hpp"
#include "sweep.hpp"

namespace v2xtrust {

// Structured outputs. All floating-point text is written with a fixed
// format so identical runs produce byte-identical files.

inline std::string fixed6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

// Undefined metrics (zero denominator) appear as "na" in columnar files.
inline std::string fixed6(const std::optional<double>& v) {
    return v ? fixed6(*v) : std::string("na");
}

inline void write_timeseries_csv(std::ostream& out, const MetricsReport& report) {
    out << "step,fnr_local,fpr_local,fnr_global,fpr_global,pdr\n";
    for (const IterationMetrics& m : report.series) {
        out << m.step << ',' << fixed6(m.local.fnr) << ',' << fixed6(m.local.fpr) << ','
            << fixed6(m.global.fnr) << ',' << fixed6(m.global.fpr) << ',' << fixed6(m.pdr)
            << '\n';
    }
}

inline void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace) {
    out << "step,node,x,y,speed\n";
    for (const TraceRow& row : trace) {
        out << row.step << ',' << row.node << ',' << fixed6(row.position.x) << ','
            << fixed6(row.position.y) << ',' << fixed6(row.speed) << '\n';
    }
}

inline nlohmann::json config_json(const ScenarioConfig& cfg) {
    nlohmann::json j;
    j["iterations"] = cfg.iterations;
    j["entity_count"] = cfg.entity_count;
    j["rsu_count"] = cfg.rsu_count;
    j["bounds"] = cfg.bounds;
    j["horizontal_roads"] = cfg.horizontal_roads;
    j["vertical_roads"] = cfg.vertical_roads;
    j["rsu_positions"] = nlohmann::json::array();
    for (const Vec2& p : cfg.rsu_positions) j["rsu_positions"].push_back({p.x, p.y});
    j["th_min"] = cfg.thresholds.th_min.value;
    j["th_max"] = cfg.thresholds.th_max.value;
    j["rc"] = cfg.thresholds.rc;
    j["c_w"] = cfg.thresholds.c_w;
    j["initial_trust"] = cfg.initial_trust.value;
    j["comm_range"] = cfg.comm_range;
    j["rsu_window"] = cfg.rsu_window;
    j["hop_limit"] = cfg.hop_limit;
    j["drop_probability"] = cfg.drop_probability;
    j["selective_forwarding_count"] = cfg.selective_forwarding_count;
    j["good_mouthing_count"] = cfg.good_mouthing_count;
    j["bad_mouthing_count"] = cfg.bad_mouthing_count;
    j["class_counts"] = {{"vehicle", cfg.class_counts[0]},
                         {"pedestrian", cfg.class_counts[1]},
                         {"cycle", cfg.class_counts[2]},
                         {"motorcycle", cfg.class_counts[3]}};
    j["speed_ranges"] = {
        {"vehicle", {cfg.speed_ranges[0].lo, cfg.speed_ranges[0].hi}},
        {"pedestrian", {cfg.speed_ranges[1].lo, cfg.speed_ranges[1].hi}},
        {"cycle", {cfg.speed_ranges[2].lo, cfg.speed_ranges[2].hi}},
        {"motorcycle", {cfg.speed_ranges[3].lo, cfg.speed_ranges[3].hi}}};
    j["speed_resample_prob"] = cfg.speed_resample_prob;
    j["transactions_per_entity"] = cfg.transactions_per_entity;
    j["accumulate_rsu_alarms"] = cfg.accumulate_rsu_alarms;
    j["sf_truthful_recommendations"] = cfg.sf_truthful_recommendations;
    j["recommendation_sample"] = cfg.recommendation_sample;
    j["dump_trace"] = cfg.dump_trace;
    j["seed"] = cfg.seed;
    return j;
}

inline nlohmann::json metric_json(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

inline nlohmann::json summary_json(const ScenarioConfig& cfg, const MetricsReport& report) {
    nlohmann::json j;
    j["config"] = config_json(cfg);
    j["metrics"]["global"]["fnr"] = metric_json(report.global.fnr);
    j["metrics"]["global"]["fpr"] = metric_json(report.global.fpr);
    j["metrics"]["local"]["fnr"] = metric_json(report.local.fnr);
    j["metrics"]["local"]["fpr"] = metric_json(report.local.fpr);
    j["metrics"]["pdr"] = report.pdr;
    j["packets"]["generated"] = report.packets.generated;
    j["packets"]["delivered"] = report.packets.delivered;
    j["packets"]["dropped_attack"] = report.packets.dropped_attack;
    j["packets"]["dropped_no_route"] = report.packets.dropped_no_route;
    j["packets"]["dropped_ttl"] = report.packets.dropped_ttl;
    j["global_blacklist"] = report.global_blacklist;
    j["blacklist_version"] = report.blacklist_version;
    j["ground_truth"]["malicious"] = report.malicious_truth;
    j["ground_truth"]["normal"] = report.normal_truth;
    return j;
}

inline void write_sweep_csv(std::ostream& out, const SweepTable& table) {
    out << "param,value,seed,fnr_global,fpr_global,pdr,fnr_local,fpr_local\n";
    for (const SweepPoint& point : table.points) {
        for (const SweepRun& run : point.runs) {
            out << to_string(table.param) << ',' << fixed6(run.value) << ',' << run.seed << ','
                << fixed6(run.global.fnr) << ',' << fixed6(run.global.fpr) << ','
                << fixed6(run.pdr) << ',' << fixed6(run.local.fnr) << ','
                << fixed6(run.local.fpr) << '\n';
        }
    }
}

inline nlohmann::json mean_sd_json(const MeanSd& m) {
    nlohmann::json j;
    j["mean"] = m.mean ? nlohmann::json(*m.mean) : nlohmann::json(nullptr);
    j["sd"] = m.sd ? nlohmann::json(*m.sd) : nlohmann::json(nullptr);
    j["n"] = m.n;
    return j;
}

inline nlohmann::json sweep_json(const ScenarioConfig& base, const SweepTable& table) {
    nlohmann::json j;
    j["param"] = to_string(table.param);
    j["repetitions"] = table.repetitions;
    j["base_config"] = config_json(base);
    j["points"] = nlohmann::json::array();
    for (const SweepPoint& point : table.points) {
        nlohmann::json p;
        p["value"] = point.value;
        p["fnr_global"] = mean_sd_json(point.fnr_global);
        p["fpr_global"] = mean_sd_json(point.fpr_global);
        p["fnr_local"] = mean_sd_json(point.fnr_local);
        p["fpr_local"] = mean_sd_json(point.fpr_local);
        p["pdr"] = mean_sd_json(point.pdr);
        j["points"].push_back(p);
    }
    return j;
}

// Plot-ready two-column data: swept value against the seed-mean metric.
inline void write_sweep_metric_dat(std::ostream& out, const SweepTable& table,
                                   const std::string& metric) {
    out << "# " << to_string(table.param) << ' ' << metric << '\n';
    for (const SweepPoint& point : table.points) {
        const MeanSd& m = metric == "fnr"         ? point.fnr_global
                          : metric == "fpr"       ? point.fpr_global
                          : metric == "fnr_local" ? point.fnr_local
                          : metric == "fpr_local" ? point.fpr_local
                                                  : point.pdr;
        out << fixed6(point.value) << '\t' << (m.mean ? fixed6(*m.mean) : std::string("na"))
            << '\n';
    }
}

} // namespace v2xtrust
