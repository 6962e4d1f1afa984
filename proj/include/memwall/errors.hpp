#pragma once

#include <stdexcept>
#include <string>

namespace memwall {

// Error taxonomy shared by the library and the CLI. The CLI maps these to
// process exit codes: IoError -> 2, ParseError/ValidationError/LookupError/
// DomainError -> 3, OverflowError -> 4.

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// File could not be opened or read.
struct IoError : Error {
    using Error::Error;
};

// Input document does not conform to its schema (bad JSON, bad CSV row,
// unknown or mistyped key). Messages name the offending field or line.
struct ParseError : Error {
    using Error::Error;
};

// A structurally valid input violates a domain invariant.
struct ValidationError : Error {
    using Error::Error;
};

// A name (preset, metric, device) did not resolve.
struct LookupError : Error {
    using Error::Error;
};

// Numeric argument outside the operation's domain.
struct DomainError : Error {
    using Error::Error;
};

// 64-bit count arithmetic overflowed.
struct OverflowError : Error {
    using Error::Error;
};

}  // namespace memwall
