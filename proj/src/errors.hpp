#pragma once

#include <stdexcept>
#include <string>

namespace bandtest {

// Error taxonomy shared by the core and mirrored by the C API status codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyInput : Error {
    using Error::Error;
};

struct DuplicateSample : Error {
    using Error::Error;
};

struct InfeasibleBand : Error {
    using Error::Error;
};

struct InfeasibleMoment : Error {
    using Error::Error;
};

struct NonMonotoneCdf : Error {
    using Error::Error;
};

struct ZeroVariance : Error {
    using Error::Error;
};

struct TooFewSamples : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct UnknownKey : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

struct RangeError : Error {
    using Error::Error;
};

}  // namespace bandtest
