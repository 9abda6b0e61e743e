#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mobility.hpp"
#include "trust.hpp"
#include "types.hpp"

namespace v2xtrust {

// Scenario configuration. Every field has a default, so an empty config is
// a valid run; the file format is plain `key = value` lines with `#`
// comments. Repeatable keys (roads, RSU positions) accumulate.

struct ScenarioConfig {
    std::uint32_t iterations{100};
    std::uint32_t entity_count{24};
    std::uint32_t rsu_count{9};
    double bounds{900.0};
    std::vector<double> horizontal_roads{300.0, 600.0};
    std::vector<double> vertical_roads{450.0};
    std::vector<Vec2> rsu_positions; // empty: square grid derived from rsu_count

    TrustThresholds thresholds{};
    TrustValue initial_trust{0.5};

    double comm_range{160.0};
    std::uint32_t rsu_window{10};
    std::uint32_t hop_limit{5};
    double drop_probability{0.5};

    std::uint32_t selective_forwarding_count{6};
    std::uint32_t good_mouthing_count{3};
    std::uint32_t bad_mouthing_count{3};

    // vehicle, pedestrian, cycle, motorcycle
    std::array<std::uint32_t, kEntityClassCount> class_counts{14, 2, 2, 6};
    std::array<SpeedRange, kEntityClassCount> speed_ranges{
        SpeedRange{10.0, 30.0}, SpeedRange{0.0, 8.0}, SpeedRange{3.0, 10.0},
        SpeedRange{10.0, 30.0}};
    double speed_resample_prob{0.1};

    std::uint32_t transactions_per_entity{1};
    bool accumulate_rsu_alarms{true};
    bool sf_truthful_recommendations{true};
    std::uint32_t recommendation_sample{0}; // 0 = ask every one-hop neighbor
    bool dump_trace{false};
    std::uint64_t seed{1};

    std::uint32_t malicious_count() const {
        return selective_forwarding_count + good_mouthing_count + bad_mouthing_count;
    }
    std::uint32_t normal_count() const { return entity_count - malicious_count(); }
};

// Field-level diagnostics collected during parsing/validation.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> issues)
        : std::runtime_error(join(issues)), issues_(std::move(issues)) {}
    const std::vector<std::string>& issues() const { return issues_; }

private:
    static std::string join(const std::vector<std::string>& issues) {
        std::string out = "invalid scenario config:";
        for (const auto& s : issues) out += "\n  - " + s;
        return out;
    }
    std::vector<std::string> issues_;
};

namespace detail {

inline bool parse_double(const std::string& s, double& out) {
    std::istringstream in(s);
    in >> out;
    return static_cast<bool>(in) && in.eof();
}

inline bool parse_u32(const std::string& s, std::uint32_t& out) {
    std::istringstream in(s);
    long long v = 0;
    in >> v;
    if (!in || !in.eof() || v < 0 || v > 0xFFFFFFFFLL) return false;
    out = static_cast<std::uint32_t>(v);
    return true;
}

inline bool parse_u64(const std::string& s, std::uint64_t& out) {
    std::istringstream in(s);
    unsigned long long v = 0;
    in >> v;
    if (!in || !in.eof()) return false;
    out = v;
    return true;
}

inline bool parse_bool(const std::string& s, bool& out) {
    if (s == "true" || s == "1" || s == "yes") {
        out = true;
        return true;
    }
    if (s == "false" || s == "0" || s == "no") {
        out = false;
        return true;
    }
    return false;
}

inline bool parse_pair(const std::string& s, double& a, double& b) {
    std::istringstream in(s);
    in >> a >> b;
    return static_cast<bool>(in) && (in >> std::ws).eof();
}

inline std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

} // namespace detail

inline void validate_config(const ScenarioConfig& cfg) {
    std::vector<std::string> issues;
    const auto require = [&](bool ok, const std::string& msg) {
        if (!ok) issues.push_back(msg);
    };

    require(cfg.iterations >= 1, "iterations: must be >= 1");
    require(cfg.entity_count >= 1, "entity_count: must be >= 1");
    require(cfg.bounds > 0.0, "bounds: must be positive");
    require(!cfg.horizontal_roads.empty() || !cfg.vertical_roads.empty(),
            "roads: at least one road is required");
    for (double y : cfg.horizontal_roads)
        require(y >= 0.0 && y <= cfg.bounds, "road_h: coordinate outside bounds");
    for (double x : cfg.vertical_roads)
        require(x >= 0.0 && x <= cfg.bounds, "road_v: coordinate outside bounds");

    if (cfg.rsu_positions.empty()) {
        require(cfg.rsu_count >= 1, "rsu_count: must be >= 1");
        const auto side = static_cast<std::uint32_t>(std::lround(std::sqrt(cfg.rsu_count)));
        require(side * side == cfg.rsu_count,
                "rsu_count: not a perfect square; list rsu_position entries instead");
    } else {
        for (const Vec2& p : cfg.rsu_positions) {
            require(p.x >= 0.0 && p.x <= cfg.bounds && p.y >= 0.0 && p.y <= cfg.bounds,
                    "rsu_position: outside bounds");
        }
    }

    require(cfg.thresholds.th_min.value >= 0.0 && cfg.thresholds.th_min.value <= 1.0,
            "th_min: must lie in [0,1]");
    require(cfg.thresholds.th_max.value >= 0.0 && cfg.thresholds.th_max.value <= 1.0,
            "th_max: must lie in [0,1]");
    require(cfg.thresholds.th_min.value < cfg.thresholds.th_max.value,
            "th_min/th_max: th_min must be strictly below th_max");
    require(cfg.thresholds.rc > 0.0 && cfg.thresholds.rc <= 1.0, "rc: must lie in (0,1]");
    require(cfg.thresholds.c_w >= 0.0 && cfg.thresholds.c_w <= 1.0, "c_w: must lie in [0,1]");
    require(cfg.initial_trust.value >= 0.0 && cfg.initial_trust.value <= 1.0,
            "initial_trust: must lie in [0,1]");

    require(cfg.comm_range > 0.0, "comm_range: must be positive");
    require(cfg.rsu_window >= 1, "rsu_window: must be >= 1");
    require(cfg.hop_limit >= 1, "hop_limit: must be >= 1");
    require(cfg.drop_probability >= 0.0 && cfg.drop_probability <= 1.0,
            "drop_probability: must lie in [0,1]");
    require(cfg.malicious_count() <= cfg.entity_count,
            "attacker counts: exceed entity_count");

    std::uint32_t class_total = 0;
    for (std::size_t i = 0; i < kEntityClassCount; ++i) {
        class_total += cfg.class_counts[i];
        const SpeedRange& r = cfg.speed_ranges[i];
        require(r.lo >= 0.0 && r.hi >= r.lo, "speed range: need 0 <= min <= max");
    }
    require(class_total == cfg.entity_count,
            "class counts: must sum to entity_count (" + std::to_string(class_total) + " vs " +
                std::to_string(cfg.entity_count) + ")");
    require(cfg.speed_resample_prob >= 0.0 && cfg.speed_resample_prob <= 1.0,
            "speed_resample_prob: must lie in [0,1]");
    require(cfg.transactions_per_entity >= 1, "transactions_per_entity: must be >= 1");

    if (!issues.empty()) throw ConfigError(std::move(issues));
}

// Splits an entity count into the default class mix: mostly vehicles and
// motorcycles with a sprinkle of pedestrians and cycles (24 -> 14/2/2/6).
inline std::array<std::uint32_t, kEntityClassCount> default_class_counts(std::uint32_t n) {
    const std::uint32_t slow = n / 12;
    const std::uint32_t moto = n / 4;
    return {n - 2 * slow - moto, slow, slow, moto};
}

inline ScenarioConfig parse_config(std::istream& in) {
    ScenarioConfig cfg;
    std::vector<std::string> issues;
    bool classes_set = false;
    bool entity_count_set = false;
    bool roads_set = false;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = detail::trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            issues.push_back("line " + std::to_string(line_no) + ": expected key = value");
            continue;
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        const auto bad = [&](const std::string& what) {
            issues.push_back(key + " (line " + std::to_string(line_no) + "): " + what);
        };

        double d = 0.0;
        if (key == "iterations") {
            if (!detail::parse_u32(value, cfg.iterations)) bad("expected non-negative integer");
        } else if (key == "entity_count") {
            if (!detail::parse_u32(value, cfg.entity_count)) bad("expected non-negative integer");
            entity_count_set = true;
        } else if (key == "rsu_count") {
            if (!detail::parse_u32(value, cfg.rsu_count)) bad("expected non-negative integer");
        } else if (key == "bounds") {
            if (!detail::parse_double(value, cfg.bounds)) bad("expected real");
        } else if (key == "road_h") {
            if (!roads_set) {
                cfg.horizontal_roads.clear();
                cfg.vertical_roads.clear();
                roads_set = true;
            }
            if (detail::parse_double(value, d)) cfg.horizontal_roads.push_back(d);
            else bad("expected real");
        } else if (key == "road_v") {
            if (!roads_set) {
                cfg.horizontal_roads.clear();
                cfg.vertical_roads.clear();
                roads_set = true;
            }
            if (detail::parse_double(value, d)) cfg.vertical_roads.push_back(d);
            else bad("expected real");
        } else if (key == "rsu_position") {
            double x = 0.0, y = 0.0;
            if (detail::parse_pair(value, x, y)) cfg.rsu_positions.push_back({x, y});
            else bad("expected two reals: x y");
        } else if (key == "th_min") {
            if (detail::parse_double(value, d)) cfg.thresholds.th_min = TrustValue{d};
            else bad("expected real");
        } else if (key == "th_max") {
            if (detail::parse_double(value, d)) cfg.thresholds.th_max = TrustValue{d};
            else bad("expected real");
        } else if (key == "rc") {
            if (!detail::parse_double(value, cfg.thresholds.rc)) bad("expected real");
        } else if (key == "c_w") {
            if (!detail::parse_double(value, cfg.thresholds.c_w)) bad("expected real");
        } else if (key == "initial_trust") {
            if (detail::parse_double(value, d)) cfg.initial_trust = TrustValue{d};
            else bad("expected real");
        } else if (key == "comm_range") {
            if (!detail::parse_double(value, cfg.comm_range)) bad("expected real");
        } else if (key == "rsu_window") {
            if (!detail::parse_u32(value, cfg.rsu_window)) bad("expected non-negative integer");
        } else if (key == "hop_limit") {
            if (!detail::parse_u32(value, cfg.hop_limit)) bad("expected non-negative integer");
        } else if (key == "drop_probability") {
            if (!detail::parse_double(value, cfg.drop_probability)) bad("expected real");
        } else if (key == "selective_forwarding_count") {
            if (!detail::parse_u32(value, cfg.selective_forwarding_count))
                bad("expected non-negative integer");
        } else if (key == "good_mouthing_count") {
            if (!detail::parse_u32(value, cfg.good_mouthing_count))
                bad("expected non-negative integer");
        } else if (key == "bad_mouthing_count") {
            if (!detail::parse_u32(value, cfg.bad_mouthing_count))
                bad("expected non-negative integer");
        } else if (key == "vehicle_count" || key == "pedestrian_count" || key == "cycle_count" ||
                   key == "motorcycle_count") {
            std::uint32_t n = 0;
            if (!detail::parse_u32(value, n)) {
                bad("expected non-negative integer");
            } else {
                if (!classes_set) {
                    cfg.class_counts = {0, 0, 0, 0};
                    classes_set = true;
                }
                if (key == "vehicle_count") cfg.class_counts[0] = n;
                else if (key == "pedestrian_count") cfg.class_counts[1] = n;
                else if (key == "cycle_count") cfg.class_counts[2] = n;
                else cfg.class_counts[3] = n;
            }
        } else if (key == "vehicle_speed" || key == "pedestrian_speed" || key == "cycle_speed" ||
                   key == "motorcycle_speed") {
            double lo = 0.0, hi = 0.0;
            if (!detail::parse_pair(value, lo, hi)) {
                bad("expected two reals: min max");
            } else {
                const std::size_t idx = key == "vehicle_speed"      ? 0
                                        : key == "pedestrian_speed" ? 1
                                        : key == "cycle_speed"      ? 2
                                                                    : 3;
                cfg.speed_ranges[idx] = SpeedRange{lo, hi};
            }
        } else if (key == "speed_resample_prob") {
            if (!detail::parse_double(value, cfg.speed_resample_prob)) bad("expected real");
        } else if (key == "transactions_per_entity") {
            if (!detail::parse_u32(value, cfg.transactions_per_entity))
                bad("expected non-negative integer");
        } else if (key == "accumulate_rsu_alarms") {
            if (!detail::parse_bool(value, cfg.accumulate_rsu_alarms)) bad("expected true/false");
        } else if (key == "sf_truthful_recommendations") {
            if (!detail::parse_bool(value, cfg.sf_truthful_recommendations))
                bad("expected true/false");
        } else if (key == "recommendation_sample") {
            if (!detail::parse_u32(value, cfg.recommendation_sample))
                bad("expected non-negative integer");
        } else if (key == "dump_trace") {
            if (!detail::parse_bool(value, cfg.dump_trace)) bad("expected true/false");
        } else if (key == "seed") {
            if (!detail::parse_u64(value, cfg.seed)) bad("expected non-negative integer");
        } else {
            issues.push_back("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }

    if (entity_count_set && !classes_set) cfg.class_counts = default_class_counts(cfg.entity_count);
    if (!issues.empty()) throw ConfigError(std::move(issues));
    validate_config(cfg);
    return cfg;
}

inline ScenarioConfig parse_config_string(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

// RSU positions: explicit entries if given, otherwise a centered square
// grid (9 RSUs on 900 m -> 150/450/750).
inline std::vector<RsuSite> rsu_sites(const ScenarioConfig& cfg) {
    std::vector<RsuSite> sites;
    if (!cfg.rsu_positions.empty()) {
        for (std::size_t i = 0; i < cfg.rsu_positions.size(); ++i)
            sites.push_back({static_cast<RsuId>(i), cfg.rsu_positions[i]});
        return sites;
    }
    const auto side = static_cast<std::uint32_t>(std::lround(std::sqrt(cfg.rsu_count)));
    const double spacing = cfg.bounds / side;
    RsuId id = 0;
    for (std::uint32_t row = 0; row < side; ++row) {
        for (std::uint32_t col = 0; col < side; ++col) {
            sites.push_back(
                {id++, Vec2{spacing * (col + 0.5), spacing * (row + 0.5)}});
        }
    }
    return sites;
}

} // namespace v2xtrust
