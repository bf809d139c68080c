#pragma once

#include <stdexcept>
#include <string>

namespace bohm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter or argument violates its documented precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Velocity requested where the probability density is below the evaluation floor.
class DensityUnderflow : public Error {
public:
    using Error::Error;
};

/// Operation applied to a state of the wrong kind (e.g. reduced quantities of a product state).
class WrongKind : public Error {
public:
    using Error::Error;
};

/// Finite-difference oracle evaluated too close to a node of the amplitude.
class NodeProximity : public Error {
public:
    using Error::Error;
};

class PhaseUnwrapFailure : public Error {
public:
    using Error::Error;
};

/// Sampling grid does not resolve the structure it is meant to resolve.
class GridTooCoarse : public Error {
public:
    using Error::Error;
};

class StepUnderflow : public Error {
public:
    using Error::Error;
};

class InvalidInitialCondition : public Error {
public:
    using Error::Error;
};

/// Density slice shows no interference contrast worth reporting.
class NoFringes : public Error {
public:
    using Error::Error;
};

/// Scenario configuration rejected; the message names the offending field.
class ConfigError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Reading or writing an artifact failed; the message carries the path.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace bohm
