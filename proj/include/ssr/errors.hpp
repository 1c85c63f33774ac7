#pragma once

#include <stdexcept>

namespace ssr {

// Violated precondition or broken internal invariant: a caller or algorithm bug.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Malformed input text (prefixes, scenario files, ...).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A lookup found matching entries but no unique minimum among them.
class AmbiguityError : public ContractViolation {
public:
    using ContractViolation::ContractViolation;
};

} // namespace ssr
