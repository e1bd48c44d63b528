#ifndef COGSIM_MOBILITY_HPP
#define COGSIM_MOBILITY_HPP

#include <vector>

#include "cogsim/geometry.hpp"
#include "cogsim/rng.hpp"
#include "cogsim/sim_time.hpp"

namespace cogsim {

struct Waypoint {
    Vec2 position;
    double dwell_s = 0.0;
};

struct PoseSample {
    Vec2 position;
    double heading_deg = 0.0;
};

struct MotionSegment {
    SimTime start, end; // motion interval (dwells excluded)
    Vec2 from, to;
    double heading_deg;
};

// Piecewise-linear constant-speed motion through waypoints. Heading is the
// bearing of the active segment and changes instantaneously at corners.
class MobilityTrace {
public:
    MobilityTrace() : MobilityTrace({{{0.0, 0.0}, 0.0}}, 0.0) {} // stationary at origin
    MobilityTrace(std::vector<Waypoint> waypoints, double speed_mps);

    // Clamps to the endpoints outside the trace span.
    PoseSample pose_at(SimTime t) const;
    Vec2 position_at(SimTime t) const { return pose_at(t).position; }

    SimTime span() const { return end_; }
    double speed_mps() const { return speed_; }
    const std::vector<Waypoint>& waypoints() const { return waypoints_; }
    const std::vector<MotionSegment>& motion_segments() const { return segments_; }
    bool stationary() const { return segments_.empty(); }

private:
    std::vector<Waypoint> waypoints_;
    std::vector<MotionSegment> segments_;
    double speed_;
    SimTime end_;
};

// Named presets used by scenarios and experiments. All fit inside the room
// rectangle with `margin` meters of clearance.
MobilityTrace stationary_trace(Vec2 position);
MobilityTrace line_trace(Vec2 from, Vec2 to, double speed_mps);
MobilityTrace l_shape_trace(Vec2 corner0, Vec2 corner1, Vec2 corner2, double speed_mps);
// Loop around the rectangle [x0,x1]x[y0,y1], starting and ending at (x0,y0).
MobilityTrace rectangle_loop_trace(double x0, double y0, double x1, double y1, double speed_mps);
MobilityTrace random_waypoint_trace(double x0, double y0, double x1, double y1, int waypoints,
                                    double speed_mps, RngStream& rng);

} // namespace cogsim

#endif
