#pragma once

#include <stdexcept>
#include <string>

namespace jcm {

// Parameters outside the domain of an operation.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Precision loss, non-finite intermediates, caps and non-convergence.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace jcm
