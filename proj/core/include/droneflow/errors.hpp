#pragma once

#include <stdexcept>
#include <string>

namespace droneflow {

/// Base class for every error raised by the framework.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed configuration file (unreadable, not valid JSON, unsupported scheme).
class ConfigParseError : public Error {
public:
    using Error::Error;
};

/// Structurally valid input that violates a schema or cross-reference rule
/// (duplicate id, dangling scheduler member, unknown key, bad field value).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Lookup of an identifier that is not present in the registry.
class NotFoundError : public Error {
public:
    using Error::Error;
};

/// Operation not legal in the current mission / lifecycle state.
class IllegalStateError : public Error {
public:
    using Error::Error;
};

/// Operation requires a capability the backend does not advertise.
class CapabilityError : public Error {
public:
    using Error::Error;
};

/// Timestamp regression on a stream publish.
class TimestampError : public Error {
public:
    using Error::Error;
};

/// Deployment problems: analytic used before deploy, or the target has no
/// configured service time for it.
class DeployError : public Error {
public:
    using Error::Error;
};

/// Invalid argument to an operation (non-positive duration, bad swath, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Filesystem failure while persisting data.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace droneflow
