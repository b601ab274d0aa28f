#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mdi {

// Symbolic expression IR for integrands. Nodes are immutable and shared;
// copying an Expr copies a pointer. The node set is deliberately small:
// constants, variables x1..xd, n-ary sums and products, integer powers, and
// the unary functions exp/sin/cos.
//
// Normal form (produced by normalize(), preserved by the reduction engine):
//   - Sum/Product children are flat (no nested Sum in Sum, Product in Product)
//     and sorted in canonical order (Expr::compare);
//   - constants are folded: a Product carries at most one constant factor,
//     first; a Sum carries at most one constant term; pure-constant subtrees
//     collapse to Constant;
//   - like monomials in a Sum are collected (coefficients added), like bases
//     in a Product are collected into Power;
//   - Power exponents are nonzero integers, possibly negative; Power never
//     wraps a Constant or a Product.
// Canonical order is total and deterministic, so equal expressions have equal
// trees bit for bit and runs reproduce exactly.

enum class ExprKind : std::uint8_t {
    Constant,
    Var,
    Power,
    Exp,
    Sin,
    Cos,
    Product,
    Sum,
};

namespace detail {
struct ExprNode;
}

class Expr {
public:
    Expr(); // Constant 0

    static Expr constant(double value);
    static Expr var(std::uint32_t index); // 1-based; index >= 1
    static Expr sum(std::vector<Expr> terms);        // sum({}) == 0
    static Expr product(std::vector<Expr> factors);  // product({}) == 1
    static Expr pow(Expr base, std::int64_t exponent); // exponent 0 folds to 1
    static Expr exp(Expr arg);
    static Expr sin(Expr arg);
    static Expr cos(Expr arg);

    ExprKind kind() const;
    double constant_value() const;   // pre: kind() == Constant
    std::uint32_t var_index() const; // pre: kind() == Var
    std::int64_t exponent() const;   // pre: kind() == Power
    std::span<const Expr> children() const;
    const Expr& child(std::size_t i = 0) const;

    std::uint64_t tree_size() const; // total node count of the subtree
    std::uint64_t hash() const;      // structural, cached at construction

    // Smallest / largest variable index present; 0 when none.
    std::uint32_t min_var() const;
    std::uint32_t max_var() const;
    bool has_vars() const { return min_var() != 0; }
    bool depends_on(std::uint32_t index) const;
    std::vector<std::uint32_t> free_vars() const; // sorted, distinct

    bool is_constant() const { return kind() == ExprKind::Constant; }
    bool is_constant(double v) const;

    // Deep structural equality (with shared-pointer fast path).
    friend bool operator==(const Expr& a, const Expr& b);
    friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

    // Canonical total order: kind rank first (Constant < Var < Power < Exp <
    // Sin < Cos < Product < Sum), then payload / children lexicographically.
    static int compare(const Expr& a, const Expr& b);

    bool same_node(const Expr& o) const { return node_ == o.node_; }

private:
    explicit Expr(std::shared_ptr<const detail::ExprNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const detail::ExprNode> node_;
    friend struct detail::ExprNode;
};

// Parses the integrand DSL and returns the normalized expression.
//
//   expr    := term (('+'|'-') term)*
//   term    := unary (('*'|'/') unary)*
//   unary   := ('-'|'+') unary | factor
//   factor  := primary ('^' exponent)?        exponent: integer literal,
//   primary := number | 'pi' | 'x'digits      optionally signed, right-assoc
//            | ('exp'|'sin'|'cos') '(' expr ')' | '(' expr ')'
//
// Numbers are decimal or scientific doubles; 'pi' folds to the double value.
// a/b is read as a * b^-1. Throws SyntaxError (with byte offset),
// NonIntegerExponent, UnknownIdentifier.
Expr parse_expr(std::string_view src);

// Evaluates at point (x1..xd = point[0..d-1]). Throws MissingCoordinate if a
// variable index exceeds point.size(), NonFiniteResult if the value is not
// finite. Deterministic: children are reduced left to right in stored order.
double eval(const Expr& e, std::span<const double> point);

// Rewrites into the normal form described above. Idempotent; pointwise equal
// to the input up to floating-point reassociation.
Expr normalize(const Expr& e);

// Replaces variable `index` with the constant `value`, folding what becomes
// constant. Result is normalized if the input was.
Expr substitute(const Expr& e, std::uint32_t index, double value);

// Shifts every variable index down by `delta` (pre: min_var > delta).
Expr shift_vars_down(const Expr& e, std::uint32_t delta);

// Prints in DSL syntax; parse_expr(to_string(e)) reproduces normalize(e)
// exactly, and printing is a fixed point on parser output.
std::string to_string(const Expr& e);

// Deterministic integer power by binary exponentiation; negative exponents
// via one final reciprocal. Shared by eval and constant folding.
double ipow(double base, std::int64_t exponent);

std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t v);

} // namespace mdi
