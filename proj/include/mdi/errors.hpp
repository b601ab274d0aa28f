#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mdi {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed expression source; `offset` is the byte position of the first
// offending character.
struct SyntaxError : Error {
    SyntaxError(const std::string& what, std::size_t offset)
        : Error(what + " (byte " + std::to_string(offset) + ")"), offset(offset) {}
    std::size_t offset;
};

// '^' with anything but an integer literal exponent.
struct NonIntegerExponent : SyntaxError {
    using SyntaxError::SyntaxError;
};

// Identifier that is neither a variable, 'pi', nor a known function name.
struct UnknownIdentifier : SyntaxError {
    using SyntaxError::SyntaxError;
};

// Evaluation point has fewer coordinates than the highest variable index used.
struct MissingCoordinate : Error {
    using Error::Error;
};

// A computation produced Inf or NaN where a finite value is required.
struct NonFiniteResult : Error {
    using Error::Error;
};

// Invalid node count for a quadrature rule (parity or minimum violated).
struct BadNodeCount : Error {
    using Error::Error;
};

// Integrand references a variable beyond the box dimension, or axis lists
// disagree in length.
struct DimensionMismatch : Error {
    using Error::Error;
};

// Reduction grew past max_monomials or max_nodes_per_monomial.
struct SizeBudgetExceeded : Error {
    using Error::Error;
};

// Tensor-product summand count exceeds the direct-summation cap.
struct CapExceeded : Error {
    using Error::Error;
};

// Equivalence check requested for a configuration too large to sum directly.
struct OracleInfeasible : Error {
    using Error::Error;
};

// Family name not recognized, or no reference value exists for it.
struct UnknownFamily : Error {
    using Error::Error;
};

// Family instantiated with a dimension it does not support.
struct BadDimension : Error {
    using Error::Error;
};

// Too few or degenerate points for a least-squares fit.
struct DegenerateData : Error {
    using Error::Error;
};

// Benchmark suite id not present in the table registry.
struct UnknownTable : Error {
    using Error::Error;
};

} // namespace mdi
