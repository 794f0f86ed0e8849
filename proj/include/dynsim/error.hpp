#pragma once

#include <stdexcept>
#include <string>

namespace dynsim {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A Cholesky pivot was not strictly positive (mass matrix is not SPD).
class NotPositiveDefinite : public Error {
public:
    using Error::Error;
};

/// Matrix handed to the SPD solver is not symmetric within tolerance.
class NotSymmetric : public Error {
public:
    using Error::Error;
};

/// Integration produced (or started from) a NaN/Inf state.
class NonFiniteState : public Error {
public:
    using Error::Error;
};

class MaxStepsExceeded : public Error {
public:
    using Error::Error;
};

class StepUnderflow : public Error {
public:
    using Error::Error;
};

class UnknownScenario : public Error {
public:
    using Error::Error;
};

/// Trajectory dimension does not match the model it is evaluated against.
class ModelMismatch : public Error {
public:
    using Error::Error;
};

class UnknownChannel : public Error {
public:
    using Error::Error;
};

/// Malformed or physically invalid scenario description.
class ScenarioError : public Error {
public:
    using Error::Error;
};

}  // namespace dynsim
