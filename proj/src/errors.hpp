#pragma once

#include <stdexcept>
#include <string>

namespace qfi {

// Malformed input text (JSON schema, rational syntax). Message carries the
// offending path or token.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A structurally well-formed instance that violates a named invariant
// (non-unit start vector, non-orthogonal letter image, ...).
struct InvalidInstance : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Incompatible shapes passed to an exact-arithmetic operation.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A resource-capped computation (Groebner basis, branch-and-bound,
// enumeration) ran past its explicit budget.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A certified-real refinement could not separate two quantities within the
// allowed precision.
struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Soundness violation: contradictory verdicts or broken internal invariants.
// Never expected on any input; aborts the computation with a diagnostic.
struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace qfi
