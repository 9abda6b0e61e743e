#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cstdint>
#include <utility>
#include <vector>

#include "rng.hpp"
#include "types.hpp"

namespace v2xtrust {

// Road layout, entity kinematics and range-based connectivity queries.
// Default geometry: two horizontal roads crossed by one vertical road on a
// 900 x 900 m area, giving exactly two intersections. Each road carries two
// lanes, one per direction; a lane wraps onto itself at the road ends so the
// density stays stationary.

enum class EntityClass : std::uint8_t { Vehicle = 0, Pedestrian = 1, Cycle = 2, Motorcycle = 3 };
inline constexpr std::size_t kEntityClassCount = 4;

inline const char* to_string(EntityClass c) {
    switch (c) {
    case EntityClass::Vehicle: return "vehicle";
    case EntityClass::Pedestrian: return "pedestrian";
    case EntityClass::Cycle: return "cycle";
    case EntityClass::Motorcycle: return "motorcycle";
    }
    return "?";
}

struct SpeedRange {
    double lo{0.0};
    double hi{0.0};
};

struct Road {
    bool horizontal{true};
    double fixed{0.0};  // y for horizontal roads, x for vertical ones
    double length{900.0};
};

// A point where another road crosses this one.
struct Crossing {
    double offset{0.0};
    std::size_t other_road{0};
    double other_offset{0.0};
};

struct RoadLayout {
    double bounds{900.0};
    std::vector<Road> roads;
    std::vector<std::vector<Crossing>> crossings; // per road, sorted by offset
    std::vector<Vec2> intersections;

    static RoadLayout make(double bounds, const std::vector<double>& horizontal_ys,
                           const std::vector<double>& vertical_xs) {
        RoadLayout layout;
        layout.bounds = bounds;
        for (double y : horizontal_ys) layout.roads.push_back({true, y, bounds});
        for (double x : vertical_xs) layout.roads.push_back({false, x, bounds});
        layout.crossings.resize(layout.roads.size());
        const std::size_t h = horizontal_ys.size();
        for (std::size_t i = 0; i < h; ++i) {
            for (std::size_t j = 0; j < vertical_xs.size(); ++j) {
                const std::size_t v = h + j;
                const double x = vertical_xs[j];
                const double y = horizontal_ys[i];
                layout.crossings[i].push_back({x, v, y});
                layout.crossings[v].push_back({y, i, x});
                layout.intersections.push_back({x, y});
            }
        }
        for (auto& list : layout.crossings) {
            std::sort(list.begin(), list.end(),
                      [](const Crossing& a, const Crossing& b) { return a.offset < b.offset; });
        }
        return layout;
    }
};

struct EntityKinematics {
    std::size_t road{0};
    int direction{+1}; // +1 or -1 along the road axis; selects the lane
    double offset{0.0};
    double speed{0.0};
    EntityClass klass{EntityClass::Vehicle};

    Vec2 position(const RoadLayout& layout) const {
        const Road& r = layout.roads[road];
        return r.horizontal ? Vec2{offset, r.fixed} : Vec2{r.fixed, offset};
    }
};

struct RsuSite {
    RsuId id{};
    Vec2 position{};
};

class World {
public:
    World(RoadLayout layout, std::vector<RsuSite> rsus, std::vector<EntityKinematics> entities,
          std::array<SpeedRange, kEntityClassCount> speed_ranges, double speed_resample_prob)
        : layout_(std::move(layout)),
          rsus_(std::move(rsus)),
          entities_(std::move(entities)),
          speed_ranges_(speed_ranges),
          speed_resample_prob_(speed_resample_prob) {}

    // Advances every entity by speed*dt along its lane. Entities are
    // processed in id order so the rng stream is reproducible.
    void step(Rng& rng, double dt) {
        assert(dt > 0.0);
        for (EntityKinematics& e : entities_) {
            if (speed_resample_prob_ > 0.0 && rng.bernoulli(speed_resample_prob_)) {
                const SpeedRange& range = speed_ranges_[static_cast<std::size_t>(e.klass)];
                e.speed = rng.uniform(range.lo, range.hi);
            }
            advance(e, e.speed * dt, rng);
        }
    }

    // All entities (excluding the node itself) within Euclidean distance
    // <= range; ids ascending.
    std::vector<NodeId> neighbors(NodeId node, double range) const {
        assert(range > 0.0);
        std::vector<NodeId> out;
        const Vec2 own = entities_[node].position(layout_);
        for (NodeId other = 0; other < entities_.size(); ++other) {
            if (other == node) continue;
            if (distance(own, entities_[other].position(layout_)) <= range) out.push_back(other);
        }
        return out;
    }

    std::vector<RsuId> reachable_rsus(NodeId node, double range) const {
        return rsus_in_range(entities_[node].position(layout_), range);
    }

    std::vector<RsuId> rsus_in_range(Vec2 point, double range) const {
        assert(range > 0.0);
        std::vector<RsuId> out;
        for (const RsuSite& site : rsus_) {
            if (distance(point, site.position) <= range) out.push_back(site.id);
        }
        return out;
    }

    Vec2 position(NodeId node) const { return entities_[node].position(layout_); }
    const EntityKinematics& kinematics(NodeId node) const { return entities_[node]; }
    std::size_t entity_count() const { return entities_.size(); }
    const std::vector<RsuSite>& rsus() const { return rsus_; }
    const RoadLayout& layout() const { return layout_; }

private:
    // Moves one entity, handling intersection turns and lane wrap. At an
    // intersection the entity continues straight or turns onto either lane
    // of the crossing road, uniformly; U-turns are excluded.
    void advance(EntityKinematics& e, double dist, Rng& rng) {
        constexpr double eps = 1e-9;
        double remaining = dist;
        while (remaining > eps) {
            const Road& road = layout_.roads[e.road];
            double to_event =
                e.direction > 0 ? road.length - e.offset : e.offset; // distance to road end
            const Crossing* hit = nullptr;
            for (const Crossing& c : layout_.crossings[e.road]) {
                const double d = (c.offset - e.offset) * e.direction;
                if (d > eps && d < to_event - eps) {
                    to_event = d;
                    hit = &c;
                }
            }
            if (remaining < to_event - eps) {
                e.offset += e.direction * remaining;
                return;
            }
            e.offset += e.direction * to_event;
            remaining -= to_event;
            if (hit != nullptr) {
                switch (rng.pick(3)) {
                case 0: // continue straight
                    break;
                case 1:
                    e.road = hit->other_road;
                    e.offset = hit->other_offset;
                    e.direction = +1;
                    break;
                case 2:
                    e.road = hit->other_road;
                    e.offset = hit->other_offset;
                    e.direction = -1;
                    break;
                }
            } else {
                // road end: wrap to the opposite end of the same lane
                e.offset = e.direction > 0 ? 0.0 : road.length;
            }
        }
    }

    RoadLayout layout_;
    std::vector<RsuSite> rsus_;
    std::vector<EntityKinematics> entities_;
    std::array<SpeedRange, kEntityClassCount> speed_ranges_;
    double speed_resample_prob_;
};

} // namespace v2xtrust
