#ifndef COGSIM_SIM_TIME_HPP
#define COGSIM_SIM_TIME_HPP

#include <compare>
#include <cstdint>

namespace cogsim {

// Virtual time since run start, in integer nanoseconds. Integer so that all
// microsecond MAC constants stay exact and runs replay bit-identically.
class SimTime {
public:
    constexpr SimTime() : ns_(0) {}
    constexpr explicit SimTime(std::int64_t ns) : ns_(ns) {}

    static constexpr SimTime ns(std::int64_t v) { return SimTime(v); }
    static constexpr SimTime us(std::int64_t v) { return SimTime(v * 1000); }
    static constexpr SimTime ms(std::int64_t v) { return SimTime(v * 1'000'000); }
    static constexpr SimTime sec(std::int64_t v) { return SimTime(v * 1'000'000'000); }
    static constexpr SimTime from_seconds(double s) {
        return SimTime(static_cast<std::int64_t>(s * 1e9 + 0.5));
    }

    constexpr std::int64_t nanoseconds() const { return ns_; }
    constexpr double microseconds() const { return static_cast<double>(ns_) / 1000.0; }
    constexpr double seconds() const { return static_cast<double>(ns_) / 1e9; }

    constexpr auto operator<=>(const SimTime&) const = default;

    constexpr SimTime operator+(SimTime o) const { return SimTime(ns_ + o.ns_); }
    constexpr SimTime operator-(SimTime o) const { return SimTime(ns_ - o.ns_); }
    constexpr SimTime operator*(std::int64_t k) const { return SimTime(ns_ * k); }
    SimTime& operator+=(SimTime o) { ns_ += o.ns_; return *this; }
    SimTime& operator-=(SimTime o) { ns_ -= o.ns_; return *this; }

private:
    std::int64_t ns_;
};

} // namespace cogsim

#endif
