#pragma once

#include "mdi/expr.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace mdi {

// A finite sum of coeff * monomial, the working representation between
// dimension-binding steps. Monomial keys are normalized, constant-free
// expressions compared structurally (bit-exact constants); terms with
// coefficient exactly zero are dropped.
class LinearForm {
public:
    struct Term {
        Expr monomial; // Constant(1) for the constant term
        double coeff;
    };

    LinearForm() = default;

    static LinearForm from_expr(const Expr& e); // normalizes, then splits the top-level sum
    Expr to_expr() const;                       // normalized; pointwise equal to the source

    void add(const Expr& monomial, double coeff);
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    // Terms in canonical monomial order.
    std::span<const Term> terms() const;

private:
    mutable std::vector<Term> terms_;
    mutable bool sorted_ = true;
    void sort_terms() const;
};

// Splits a normalized term into coefficient and monomial factor list (the
// factors exclude the leading constant; empty list = the monomial 1).
void monomial_split(const Expr& term, double& coeff, std::vector<Expr>& factors);

// One multiplicative arrangement of a monomial with respect to the variable
// being bound: coeff * (product of v_only) * (product of v_free) * (product
// of entangled). v_only factors depend on x_v alone, v_free factors not at
// all; entangled factors mix x_v with other variables and force the
// substitution fallback.
struct FactorBranch {
    double coeff = 1.0;
    std::vector<Expr> v_only;
    std::vector<Expr> v_free;
    std::vector<Expr> entangled;
};

// Applies the separation rules to a factor list:
//   - factors free of x_v pass through; factors in x_v alone separate;
//   - exp of a sum with both x_v-dependent and x_v-free summands splits into
//     a product of exps (constant summands fold into the coefficient);
//   - sin/cos of such a sum splits by the angle-addition identities, constant
//     summands staying with the x_v side;
//   - a sum factor distributes, each term decomposed recursively (branches
//     multiply out; count capped by branch_limit).
// Anything else that mixes x_v with other variables is entangled. Throws
// SizeBudgetExceeded when the branch count would exceed branch_limit.
std::vector<FactorBranch> decompose_factors(std::span<const Expr> factors, std::uint32_t v,
                                            std::size_t branch_limit = 100000);

// Additive separated view of a whole expression with respect to x_v.
struct SplitTerm {
    double coeff;
    Expr v_part;    // Constant(1) when absent
    Expr rest;      // Constant(1) when absent
    Expr entangled; // Constant(1) when the term separates cleanly
};

struct SplitResult {
    std::vector<SplitTerm> terms;
    bool fully_separable; // true when no term has an entangled part
};

SplitResult split_for_binding(const Expr& e, std::uint32_t v);

} // namespace mdi
