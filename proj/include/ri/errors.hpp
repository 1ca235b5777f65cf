#pragma once

#include <stdexcept>
#include <string>

namespace ri {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidInputError : Error {
    using Error::Error;
};

struct NotPsdError : Error {
    using Error::Error;
};

struct NotPdError : Error {
    using Error::Error;
};

// Dyadic refinement hit the cap without stabilizing; carries the last two sums.
struct NonConvergenceError : Error {
    double previous;
    double last;
    NonConvergenceError(const std::string& msg, double prev, double val)
        : Error(msg), previous(prev), last(val) {}
};

struct NotMonotoneGrowthError : Error {
    using Error::Error;
};

struct InvalidSplitError : Error {
    using Error::Error;
};

struct CorruptedTreeError : Error {
    using Error::Error;
};

struct InfeasibleStartError : Error {
    using Error::Error;
};

struct ValidationError : Error {
    using Error::Error;
};

struct ParseError : Error {
    int line;
    ParseError(const std::string& msg, int line_no) : Error(msg), line(line_no) {}
};

}  // namespace ri
