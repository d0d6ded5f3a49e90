#pragma once

#include <stdexcept>
#include <string>

namespace krc {

/// Invalid parameters or inconsistent configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A lookup or computation needed data outside the available time range.
class RangeError : public std::out_of_range {
public:
    explicit RangeError(const std::string& what) : std::out_of_range(what) {}
};

} // namespace krc
