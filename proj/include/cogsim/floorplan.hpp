#ifndef COGSIM_FLOORPLAN_HPP
#define COGSIM_FLOORPLAN_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "cogsim/geometry.hpp"

namespace cogsim {

struct Room {
    double x = 0, y = 0, w = 0, h = 0;

    bool contains(Vec2 p) const {
        return p.x >= x && p.x <= x + w && p.y >= y && p.y <= y + h;
    }
    Vec2 center() const { return {x + w / 2, y + h / 2}; }
};

struct WallSegment {
    Vec2 a, b;
};

// Parameter t in (0, 1) at which the open segment p->q strictly crosses the
// wall, or nullopt. Endpoint touches do not count.
inline std::optional<double> segment_crossing_param(Vec2 p, Vec2 q, const WallSegment& w) {
    const double d = (w.b.x - w.a.x) * (q.y - p.y) - (w.b.y - w.a.y) * (q.x - p.x);
    if (d == 0.0) return std::nullopt;
    const double side_p = (w.b.x - w.a.x) * (p.y - w.a.y) - (w.b.y - w.a.y) * (p.x - w.a.x);
    const double side_q = (w.b.x - w.a.x) * (q.y - w.a.y) - (w.b.y - w.a.y) * (q.x - w.a.x);
    if (!(side_p * side_q < 0.0)) return std::nullopt;
    // half-open extent so a path through the junction of collinear wall
    // segments counts the wall plane once
    const double t_wall = ((p.x - w.a.x) * (q.y - p.y) - (p.y - w.a.y) * (q.x - p.x)) / d;
    if (t_wall < 0.0 || t_wall >= 1.0) return std::nullopt;
    return side_p / (side_p - side_q); // crossing parameter along p->q
}

// Rooms plus the wall segments separating them. Walls are the deduplicated
// room edges; a straight path between two points is attenuated (2.4 GHz) or
// blocked (60 GHz) per wall it crosses.
class FloorPlan {
public:
    explicit FloorPlan(std::vector<Room> rooms) : rooms_(std::move(rooms)) { build_walls(); }

    // 2x2 grid of equal rooms, the layout used by the default scenarios.
    static FloorPlan four_room(double width = 16.0, double height = 12.0) {
        const double w = width / 2, h = height / 2;
        return FloorPlan({{0, 0, w, h}, {w, 0, w, h}, {0, h, w, h}, {w, h, w, h}});
    }

    const std::vector<Room>& rooms() const { return rooms_; }
    const std::vector<WallSegment>& walls() const { return walls_; }

    // Index of the first room containing p, or -1.
    int room_of(Vec2 p) const {
        for (std::size_t i = 0; i < rooms_.size(); ++i)
            if (rooms_[i].contains(p)) return static_cast<int>(i);
        return -1;
    }

    // Number of walls strictly crossed by the open segment (a, b). Touching a
    // wall at an endpoint does not count.
    int walls_crossed(Vec2 a, Vec2 b) const {
        int n = 0;
        for (const auto& w : walls_)
            if (crosses(a, b, w)) ++n;
        return n;
    }

private:
    static bool crosses(Vec2 p, Vec2 q, const WallSegment& w) {
        return segment_crossing_param(p, q, w).has_value();
    }

    void add_wall(Vec2 a, Vec2 b) {
        // canonical order, dedupe exact matches (shared edges between rooms)
        if (b.x < a.x || (b.x == a.x && b.y < a.y)) std::swap(a, b);
        for (const auto& w : walls_)
            if (w.a == a && w.b == b) return;
        walls_.push_back({a, b});
    }

    void build_walls() {
        for (const auto& r : rooms_) {
            add_wall({r.x, r.y}, {r.x + r.w, r.y});
            add_wall({r.x, r.y + r.h}, {r.x + r.w, r.y + r.h});
            add_wall({r.x, r.y}, {r.x, r.y + r.h});
            add_wall({r.x + r.w, r.y}, {r.x + r.w, r.y + r.h});
        }
    }

    std::vector<Room> rooms_;
    std::vector<WallSegment> walls_;
};

} // namespace cogsim

#endif
