#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ebci {

// Base class for everything the library throws. The CLI maps BadInput to
// exit code 1 and any other Error (or unexpected exception) to exit code 2.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The caller handed us something unusable: bad alpha, mismatched lengths,
// values outside a declared range, malformed file, ...
struct BadInput : Error {
    using Error::Error;
};

// Too few observations carry kernel weight near the evaluation point, or the
// local design matrix is numerically singular (condition estimate > 1e12).
struct InsufficientLocalData : Error {
    std::size_t effective_count;
    InsufficientLocalData(const std::string& msg, std::size_t count)
        : Error(msg), effective_count(count) {}
};

// Quadrature failed to reach tolerance, a root finder lost its bracket, ...
struct NumericError : Error {
    using Error::Error;
};

}  // namespace ebci
