#pragma once

#include <stdexcept>
#include <string>

namespace ptscatter {

// Input outside the domain of an operation (negative xi, below-cutoff mode, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// The evaluation point sits on a spectral singularity to machine precision:
// the transmission denominator or the boundary system is exactly singular.
class SingularPointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A result that cannot be represented in double precision even after scaling.
class UnrepresentableError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

// A finite-difference stencil touches a flagged singular sample.
class NearSingularDerivativeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InsufficientDataError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NotFoundError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ptscatter
