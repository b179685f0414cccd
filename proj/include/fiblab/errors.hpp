#pragma once

#include <stdexcept>
#include <string>

namespace fiblab {

// Base class for all errors thrown by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A precondition on an argument was violated.
struct InvalidArgument : Error {
    using Error::Error;
};

// An intermediate integer value left the representable range.
// Arithmetic in this library is exact; overflow is never silently wrapped.
struct OverflowError : Error {
    using Error::Error;
};

// Registry lookup for a (key, params) pair that has no record.
struct UnknownKey : Error {
    using Error::Error;
};

// A data file (registry, matrix) could not be parsed. Message names the
// offending line.
struct ParseError : Error {
    using Error::Error;
};

// An exact division was requested for a non-multiple.
struct NotDivisible : Error {
    using Error::Error;
};

// A brute-force oracle was asked for an instance outside its feasible range.
struct OracleInapplicable : Error {
    using Error::Error;
};

// A long-running oracle was interrupted through its cancellation callback.
struct OracleCancelled : Error {
    using Error::Error;
};

// Two supposedly equivalent code paths disagreed. Indicates a bug, never
// bad user input.
struct InternalInconsistency : Error {
    using Error::Error;
};

}  // namespace fiblab
