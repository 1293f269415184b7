#pragma once

#include <stdexcept>
#include <string>

namespace bosonic {

// Bad parameter values (out-of-range eta, negative variance, ...).
using DomainError = std::domain_error;

// A truncated Fock basis is too small for the requested state or channel.
class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An iterative solver did not reach its tolerances.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A search (bisection, bracketing, crossover) has no solution in range.
class NotFoundError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

}  // namespace bosonic
