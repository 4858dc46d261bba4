#pragma once

#include <stdexcept>
#include <string>

namespace sortition {

// Bad arguments or a domain object that violates its invariants.
struct validation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Profile file could not be parsed. Coordinates are 1-based data positions;
// row 0 refers to the header line.
struct parse_error : std::runtime_error {
    int row = 0;
    int col = 0;
    parse_error(const std::string& what, int row_, int col_)
        : std::runtime_error(what + " (row " + std::to_string(row_) + ", col " +
                             std::to_string(col_) + ")"),
          row(row_),
          col(col_) {}
};

// A configured resource cap (enumeration size, issue count, ...) would be exceeded.
struct cap_exceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A randomized construction did not reach its postcondition within the allowed
// number of attempts.
struct generation_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sortition
