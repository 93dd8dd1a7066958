#pragma once

#include <stdexcept>
#include <string>

namespace prw {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonPrimitiveError : Error {
    using Error::Error;
};

struct NotDoublyStochasticError : Error {
    using Error::Error;
};

struct BadParameterError : Error {
    using Error::Error;
};

struct IndeterminateRatioError : Error {
    using Error::Error;
};

struct HorizonTooLargeError : Error {
    using Error::Error;
};

struct NotAdjacentError : Error {
    using Error::Error;
};

struct NotInImageError : Error {
    using Error::Error;
};

struct UnsatisfiableError : Error {
    using Error::Error;
};

struct OutOfSnapshotError : Error {
    using Error::Error;
};

/// Parse failure with 1-based line/column position.
struct ParseError : Error {
    int line;
    int column;
    ParseError(const std::string& what, int line_, int column_)
        : Error(what + " (line " + std::to_string(line_) + ", column " +
                std::to_string(column_) + ")"),
          line(line_), column(column_) {}
};

} // namespace prw
