#pragma once

#include <stdexcept>
#include <string>

namespace csd {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input / validation failures (CLI exit code 2).
struct InputError : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};
struct RankDeficient : Error {
    using Error::Error;
};
struct DegenerateResidual : Error {
    using Error::Error;
};
struct NumericalError : Error {
    using Error::Error;
};
struct NonPositiveVariance : Error {
    using Error::Error;
};
struct ZeroTrace : Error {
    using Error::Error;
};
struct DegenerateDiagonal : Error {
    using Error::Error;
};
struct ZeroMatrix : Error {
    using Error::Error;
};
struct DomainError : Error {
    using Error::Error;
};
struct SmallSample : Error {
    using Error::Error;
};
struct EigenFailure : Error {
    using Error::Error;
};

struct ParseError : InputError {
    using InputError::InputError;
};
struct UnbalancedPanel : InputError {
    using InputError::InputError;
};
struct DuplicateObservation : InputError {
    using InputError::InputError;
};

}  // namespace csd
