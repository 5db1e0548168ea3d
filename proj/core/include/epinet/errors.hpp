#pragma once

#include <stdexcept>
#include <string>

namespace epinet {

/// A call violated a documented precondition (bad parameter, malformed input).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Random network construction gave up after its restart budget.
class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical procedure failed (step-size underflow, non-convergence, ...).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace epinet
