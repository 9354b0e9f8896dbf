#pragma once

#include <stdexcept>
#include <string>

namespace nlclaw {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid construction parameters (epsilon out of range, bad mesh, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Two fields or trajectories live on different discretizations.
class MeshMismatch : public Error {
public:
    using Error::Error;
};

/// Flux or constraint function produced a non-finite value.
class ModelError : public Error {
public:
    using Error::Error;
};

/// Time step violates the monotonicity restriction of the scheme.
class CflError : public Error {
public:
    CflError(const std::string& what, double admissible_dt)
        : Error(what), admissible_dt_(admissible_dt) {}

    double admissible_dt() const noexcept { return admissible_dt_; }

private:
    double admissible_dt_;
};

/// Solution support would reach the truncated domain boundary.
class MarginError : public Error {
public:
    using Error::Error;
};

/// Malformed run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace nlclaw
