#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace treecut {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad vertex label, bad size, empty selection, bad parameter.
struct InvalidArgument : Error {
    using Error::Error;
};

// Requested exact computation exceeds the small-n budget.
struct BudgetExceeded : Error {
    using Error::Error;
};

// Conditioned Galton-Watson size not attainable under the offspring law.
struct UnattainableSize : Error {
    using Error::Error;
};

// Offspring law fails a validity requirement (mean != 1, bad pmf, ...).
struct UnsupportedLaw : Error {
    using Error::Error;
};

// Edge sequence is not a possible cutting sequence; carries the first bad index.
struct InvalidCutSequence : Error {
    InvalidCutSequence(const std::string& what, std::size_t index)
        : Error(what), offending_index(index) {}
    std::size_t offending_index;
};

// Operation needs a run-to-completion trace but got a truncated one.
struct IncompleteTrace : Error {
    using Error::Error;
};

}  // namespace treecut
