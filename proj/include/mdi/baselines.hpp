#pragma once

#include "mdi/expr.hpp"
#include "mdi/families.hpp"
#include "mdi/quad.hpp"

#include <cstdint>
#include <optional>

namespace mdi {

// Direct tensor-product quadrature: the full N^d-point sum with product
// weights, accumulated pairwise in ascending lexicographic index order.
// Throws CapExceeded when N^d > cap.
double stp_integrate(const Expr& g, const Box& box, int n_points, RuleKind rule,
                     std::uint64_t cap = 100000000ull);

struct McConfig {
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 1;
};

struct McResult {
    double estimate;
    double stderr_est; // volume * sample std / sqrt(samples)
};

// Plain Monte Carlo with a counter-based generator: sample s, axis j draws
// from the fixed stream value at index s*d+j, so results depend only on
// (seed, samples, box) and never on threading or call order.
McResult mc_integrate(const Expr& g, const Box& box, const McConfig& cfg);

enum class RefMethod : std::uint8_t {
    analytic_product, // closed-form per-axis factors
    high_res_1d,      // per-axis high-resolution composite rule + extrapolation
    stp_richardson,   // reserved for integrands with no per-axis form
};

struct Reference {
    double value;
    RefMethod method;
    double est_accuracy; // conservative absolute error estimate
};

// High-accuracy reference for a named family on its box. Every built-in
// family reduces to per-axis 1-d integrals (real or complex); families whose
// axis integral has no elementary antiderivative use the high-resolution
// path. Throws UnknownFamily for custom, BadDimension for a fixed-d family
// at the wrong dimension.
Reference reference_integral(const TestFamily& family, int d, const Box& box);

// Forces a specific method (used for cross-validation); throws UnknownFamily
// when that family has no closed form for the requested method.
Reference reference_integral(const TestFamily& family, int d, const Box& box, RefMethod method);

// |J - ref| / |ref|, falling back to absolute error when |ref| <= 1e-300.
double relative_error(double value, double reference_value);

} // namespace mdi
