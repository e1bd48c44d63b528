#include "cogsim/mobility.hpp"

#include "cogsim/errors.hpp"

namespace cogsim {

MobilityTrace::MobilityTrace(std::vector<Waypoint> waypoints, double speed_mps)
    : waypoints_(std::move(waypoints)), speed_(speed_mps) {
    if (waypoints_.empty()) throw ConfigError("a route needs at least one waypoint");
    if (speed_ <= 0.0 && waypoints_.size() > 1)
        throw ConfigError("a moving route needs a positive speed");

    SimTime t = SimTime::from_seconds(waypoints_.front().dwell_s);
    for (std::size_t i = 0; i + 1 < waypoints_.size(); ++i) {
        const Vec2 from = waypoints_[i].position;
        const Vec2 to = waypoints_[i + 1].position;
        if (from == to) continue;
        const SimTime dur = SimTime::from_seconds(distance(from, to) / speed_);
        segments_.push_back({t, t + dur, from, to, bearing_deg(from, to)});
        t += dur;
        t += SimTime::from_seconds(waypoints_[i + 1].dwell_s);
    }
    end_ = t;
}

PoseSample MobilityTrace::pose_at(SimTime t) const {
    if (segments_.empty()) return {waypoints_.front().position, 0.0};
    if (t <= segments_.front().start)
        return {segments_.front().from, segments_.front().heading_deg};
    for (const auto& s : segments_) {
        if (t < s.start) // dwelling at the previous corner
            return {s.from, s.heading_deg};
        if (t <= s.end) {
            const double frac = static_cast<double>((t - s.start).nanoseconds()) /
                                static_cast<double>((s.end - s.start).nanoseconds());
            return {s.from + (s.to - s.from) * frac, s.heading_deg};
        }
    }
    return {segments_.back().to, segments_.back().heading_deg};
}

MobilityTrace stationary_trace(Vec2 position) {
    return MobilityTrace({{position, 0.0}}, 0.0);
}

MobilityTrace line_trace(Vec2 from, Vec2 to, double speed_mps) {
    return MobilityTrace({{from, 0.0}, {to, 0.0}}, speed_mps);
}

MobilityTrace l_shape_trace(Vec2 c0, Vec2 c1, Vec2 c2, double speed_mps) {
    return MobilityTrace({{c0, 0.0}, {c1, 0.0}, {c2, 0.0}}, speed_mps);
}

MobilityTrace rectangle_loop_trace(double x0, double y0, double x1, double y1, double speed_mps) {
    return MobilityTrace({{{x0, y0}, 0.0},
                          {{x1, y0}, 0.0},
                          {{x1, y1}, 0.0},
                          {{x0, y1}, 0.0},
                          {{x0, y0}, 0.0}},
                         speed_mps);
}

MobilityTrace random_waypoint_trace(double x0, double y0, double x1, double y1, int waypoints,
                                    double speed_mps, RngStream& rng) {
    if (waypoints < 2) throw ConfigError("random waypoint route needs at least two waypoints");
    std::vector<Waypoint> pts;
    pts.reserve(static_cast<std::size_t>(waypoints));
    for (int i = 0; i < waypoints; ++i)
        pts.push_back({{x0 + rng.uniform01() * (x1 - x0), y0 + rng.uniform01() * (y1 - y0)}, 0.0});
    return MobilityTrace(std::move(pts), speed_mps);
}

} // namespace cogsim
