#pragma once

#include <stdexcept>
#include <string>

namespace cewc {

/// Parameters or inputs outside an operation's domain.
class invalid_params : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A transition was requested from a fixated state (no red vertices).
class no_transition : public std::logic_error {
public:
    no_transition() : std::logic_error("no transition: process has already fixated (no red vertices)") {}
};

/// Requested work exceeds a configured size cap.
class resource_limit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adaptive quadrature failed to reach its error target.
class quadrature_error : public std::runtime_error {
public:
    quadrature_error(const std::string& what, double estimate, double error)
        : std::runtime_error(what), estimate_{estimate}, error_{error}
    {}
    double estimate() const noexcept { return estimate_; }
    double error() const noexcept { return error_; }

private:
    double estimate_;
    double error_;
};

} // namespace cewc
