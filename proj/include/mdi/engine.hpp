#pragma once

#include "mdi/expr.hpp"
#include "mdi/quad.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace mdi {

// What to do with the last few dimensions: keep binding them one at a time
// until none remain (iterate), or stop once no more than `step` remain and
// evaluate that small tensor-product sum directly (direct). Both give the
// same value up to roundoff.
enum class ResidualMode : std::uint8_t { iterate, direct };

struct MdiConfig {
    int n_points = 11;                        // nodes per direction
    int step = 1;                             // axes bound per iteration, 1..3
    RuleKind rule = RuleKind::simpson;
    std::size_t max_monomials = 100000;       // working-form size budget
    std::size_t max_nodes_per_monomial = 10000;
    ResidualMode residual = ResidualMode::iterate;
};

struct IterationRecord {
    int remaining_dims;     // free variables left after this iteration
    std::size_t monomials;  // working-form terms after this iteration
    std::uint64_t nodes;    // IR nodes across all monomials
    double seconds;
};

struct ReductionTrace {
    std::vector<IterationRecord> steps;
    std::size_t peak_monomials = 0;
    std::uint64_t evals = 0; // factor evaluations at rule nodes
};

struct MdiResult {
    double value;
    ReductionTrace trace;
};

// Integrates g over the box by repeated dimension binding: each iteration
// binds the `step` lowest-indexed free variables, replacing every monomial
// by its weighted sum over that axis's rule nodes and carrying the rest
// symbolically. Throws DimensionMismatch when g uses variables beyond the
// box, SizeBudgetExceeded when the working form outgrows the budgets,
// NonFiniteResult when a coefficient leaves the finite range.
MdiResult mdi_integrate(const Expr& g, const Box& box, const MdiConfig& cfg = {});

struct BindLimits {
    std::size_t max_monomials = 100000;
    std::size_t max_nodes_per_monomial = 10000;
};

// One reduction step as a standalone transform: binds x1..xm of g with the
// given per-axis rules (m = rules.size()) and returns the reduced integrand,
// remaining variables shifted down by m. The result is normalized.
Expr bind_and_sum(const Expr& g, std::span<const Rule1D> rules, const BindLimits& limits = {});

struct EquivalenceResult {
    bool equal;
    double mdi_value;
    double stp_value;
    double rel_gap;
};

// Cross-checks the reduction against the direct tensor-product sum of the
// same rule. Throws OracleInfeasible when the direct sum is too large
// (d > 6 or N^d > 1e7).
EquivalenceResult stp_equivalence_check(const Expr& g, const Box& box, const MdiConfig& cfg,
                                        double tol = 1e-12);

} // namespace mdi
