#ifndef COGSIM_ERRORS_HPP
#define COGSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cogsim {

// Bad scenario file, bad CLI override, or a precondition violated by
// configuration (maps to exit code 2).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Invariant broken while a run is in progress (maps to exit code 3).
class SimError : public std::runtime_error {
public:
    explicit SimError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cogsim

#endif
