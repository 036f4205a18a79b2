#pragma once

#include <stdexcept>
#include <string>

namespace subprod {

// Tensor power or dense matrix would exceed the configured size budget.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input: wrong lengths, bad descriptors, out-of-range levels.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The tuple is not a row contraction (or not a strict one where required).
class ContractivityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A precondition on the mathematical state failed (non-converged limit,
// representation not relatively isometric, ...). Carries a diagnostic.
class PreconditionError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace subprod
