#pragma once

#include <stdexcept>
#include <string>

namespace vortexsol {

// Invalid argument values or mismatched sample lengths.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Gram matrix of the raw basis is not numerically positive definite.
class ConditioningError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input outside the range where a formula is defined (e.g. lambda past k_max).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Zero vector where a direction is required.
class DegenerateInputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace vortexsol
