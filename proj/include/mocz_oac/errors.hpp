#pragma once

#include <stdexcept>
#include <string>

namespace mocz {

/// Raised when a parameter violates a documented precondition.
class invalid_parameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when sequence or matrix dimensions do not line up.
class shape_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when numerical integration fails to reach its tolerance.
class integration_failure : public std::runtime_error {
public:
    integration_failure(const std::string& what, double residual)
        : std::runtime_error(what + " (residual estimate " + std::to_string(residual) + ")"),
          residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

namespace detail {

inline void require(bool cond, const std::string& msg)
{
    if (!cond)
        throw invalid_parameter(msg);
}

inline void require_shape(bool cond, const std::string& msg)
{
    if (!cond)
        throw shape_error(msg);
}

} // namespace detail
} // namespace mocz
