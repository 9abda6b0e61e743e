#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "config.hpp"
#include "metrics.hpp"
#include "simulation.hpp"

namespace v2xtrust {

// Parameter sweeps: one scenario per (value, repetition) with the repetition
// index added to the base seed, aggregated to per-value mean and standard
// deviation for FNR/FPR/PDR at both decision levels.

enum class SweepParam { ThMin, ThMax, Rc, Cw, MaliciousFraction };

inline std::optional<SweepParam> parse_sweep_param(const std::string& name) {
    if (name == "th_min") return SweepParam::ThMin;
    if (name == "th_max") return SweepParam::ThMax;
    if (name == "rc") return SweepParam::Rc;
    if (name == "c_w") return SweepParam::Cw;
    if (name == "malicious_fraction") return SweepParam::MaliciousFraction;
    return std::nullopt;
}

inline const char* to_string(SweepParam p) {
    switch (p) {
    case SweepParam::ThMin: return "th_min";
    case SweepParam::ThMax: return "th_max";
    case SweepParam::Rc: return "rc";
    case SweepParam::Cw: return "c_w";
    case SweepParam::MaliciousFraction: return "malicious_fraction";
    }
    return "?";
}

struct AttackerMix {
    std::uint32_t selective_forwarding{0};
    std::uint32_t good_mouthing{0};
    std::uint32_t bad_mouthing{0};
};

// Scales the 2:1:1 attacker mix to the requested malicious fraction; the
// mouthing quarters round to nearest and selective forwarding absorbs the
// remainder.
inline AttackerMix attacker_mix_for_fraction(std::uint32_t entity_count, double fraction) {
    const auto total = static_cast<std::uint32_t>(
        std::lround(fraction * static_cast<double>(entity_count)));
    const auto quarter = static_cast<std::uint32_t>(std::lround(total / 4.0));
    AttackerMix mix;
    mix.good_mouthing = quarter;
    mix.bad_mouthing = quarter;
    mix.selective_forwarding = total - std::min(total, 2 * quarter);
    return mix;
}

inline ScenarioConfig apply_sweep_value(const ScenarioConfig& base, SweepParam param,
                                        double value) {
    ScenarioConfig cfg = base;
    switch (param) {
    case SweepParam::ThMin: cfg.thresholds.th_min = TrustValue{value}; break;
    case SweepParam::ThMax: cfg.thresholds.th_max = TrustValue{value}; break;
    case SweepParam::Rc: cfg.thresholds.rc = value; break;
    case SweepParam::Cw: cfg.thresholds.c_w = value; break;
    case SweepParam::MaliciousFraction: {
        if (value < 0.0 || value > 1.0)
            throw std::invalid_argument("malicious_fraction: value outside [0,1]");
        const AttackerMix mix = attacker_mix_for_fraction(cfg.entity_count, value);
        cfg.selective_forwarding_count = mix.selective_forwarding;
        cfg.good_mouthing_count = mix.good_mouthing;
        cfg.bad_mouthing_count = mix.bad_mouthing;
        break;
    }
    }
    return cfg;
}

struct SweepRun {
    double value{0.0};
    std::uint64_t seed{0};
    LevelMetrics global;
    LevelMetrics local;
    double pdr{0.0};
};

struct MeanSd {
    std::optional<double> mean;
    std::optional<double> sd;
    std::size_t n{0};
};

// Mean/stddev over the defined entries; not-applicable values are excluded.
inline MeanSd aggregate(const std::vector<std::optional<double>>& values) {
    MeanSd out;
    double sum = 0.0;
    for (const auto& v : values) {
        if (!v) continue;
        sum += *v;
        ++out.n;
    }
    if (out.n == 0) return out;
    const double mean = sum / static_cast<double>(out.n);
    out.mean = mean;
    double sq = 0.0;
    for (const auto& v : values) {
        if (!v) continue;
        sq += (*v - mean) * (*v - mean);
    }
    out.sd = out.n > 1 ? std::sqrt(sq / static_cast<double>(out.n - 1)) : 0.0;
    return out;
}

struct SweepPoint {
    double value{0.0};
    std::vector<SweepRun> runs;
    MeanSd fnr_global, fpr_global, pdr;
    MeanSd fnr_local, fpr_local;
};

struct SweepTable {
    SweepParam param{SweepParam::ThMin};
    std::uint32_t repetitions{0};
    std::vector<SweepPoint> points;
};

// Runs repetitions seeds per value. The (value, rep) grid is embarrassingly
// parallel: each run has its own rng stream and simulation state, results
// land in preassigned slots, so the output is identical for any thread
// count. threads = 0 means one per hardware thread.
inline SweepTable run_sweep(const ScenarioConfig& base, SweepParam param,
                            const std::vector<double>& values, std::uint32_t repetitions,
                            unsigned threads = 1) {
    std::vector<SweepRun> runs(values.size() * repetitions);
    const auto execute = [&](std::size_t slot) {
        const double value = values[slot / repetitions];
        const std::uint32_t rep = static_cast<std::uint32_t>(slot % repetitions);
        ScenarioConfig cfg = apply_sweep_value(base, param, value);
        cfg.seed = base.seed + rep;
        const MetricsReport report = run_scenario(cfg);
        runs[slot] = {value, cfg.seed, report.global, report.local, report.pdr};
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    if (threads <= 1 || runs.size() <= 1) {
        for (std::size_t slot = 0; slot < runs.size(); ++slot) execute(slot);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const unsigned n = std::min<std::size_t>(threads, runs.size());
        for (unsigned t = 0; t < n; ++t) {
            pool.emplace_back([&] {
                for (std::size_t slot = next.fetch_add(1); slot < runs.size();
                     slot = next.fetch_add(1)) {
                    execute(slot);
                }
            });
        }
        for (std::thread& worker : pool) worker.join();
    }

    SweepTable table;
    table.param = param;
    table.repetitions = repetitions;
    for (std::size_t v = 0; v < values.size(); ++v) {
        SweepPoint point;
        point.value = values[v];
        std::vector<std::optional<double>> fnr_g, fpr_g, pdr, fnr_l, fpr_l;
        for (std::uint32_t rep = 0; rep < repetitions; ++rep) {
            const SweepRun& run = runs[v * repetitions + rep];
            point.runs.push_back(run);
            fnr_g.push_back(run.global.fnr);
            fpr_g.push_back(run.global.fpr);
            fnr_l.push_back(run.local.fnr);
            fpr_l.push_back(run.local.fpr);
            pdr.push_back(run.pdr);
        }
        point.fnr_global = aggregate(fnr_g);
        point.fpr_global = aggregate(fpr_g);
        point.fnr_local = aggregate(fnr_l);
        point.fpr_local = aggregate(fpr_l);
        point.pdr = aggregate(pdr);
        table.points.push_back(std::move(point));
    }
    return table;
}

} // namespace v2xtrust
