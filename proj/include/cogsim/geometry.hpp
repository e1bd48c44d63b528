#ifndef COGSIM_GEOMETRY_HPP
#define COGSIM_GEOMETRY_HPP

#include <cmath>

#include "cogsim/errors.hpp"

namespace cogsim {

struct Vec2 {
    double x = 0;
    double y = 0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double k) const { return {x * k, y * k}; }
    bool operator==(const Vec2&) const = default;
};

inline double distance(Vec2 a, Vec2 b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

inline double wrap_deg(double deg) {
    double d = std::fmod(deg, 360.0);
    if (d < 0) d += 360.0;
    return d;
}

// Azimuth of `to` as seen from `from`, in [0, 360); 0 deg = +x, 90 deg = +y.
inline double bearing_deg(Vec2 from, Vec2 to) {
    if (from == to) throw SimError("bearing undefined for coincident positions");
    return wrap_deg(std::atan2(to.y - from.y, to.x - from.x) * 180.0 / M_PI);
}

// Smallest absolute angle between two azimuths, in [0, 180].
inline double angle_between_deg(double a, double b) {
    double d = std::fabs(wrap_deg(a) - wrap_deg(b));
    return d > 180.0 ? 360.0 - d : d;
}

} // namespace cogsim

#endif
