#pragma once

#include <stdexcept>
#include <string>

namespace bfm {

/// Malformed or physically inconsistent input (scenario, terrain, formation).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Advection stability limit exceeded during a step.
class CflError : public std::runtime_error {
public:
    CflError(const std::string& what, double max_speed, int i, int j)
        : std::runtime_error(what), max_speed(max_speed), i(i), j(j) {}
    double max_speed;
    int i;
    int j;
};

/// A NaN or infinity appeared in a unit's fields.
class NonFiniteError : public std::runtime_error {
public:
    NonFiniteError(const std::string& what, int unit_id, int i, int j)
        : std::runtime_error(what), unit_id(unit_id), i(i), j(j) {}
    int unit_id;
    int i;
    int j;
};

}  // namespace bfm
