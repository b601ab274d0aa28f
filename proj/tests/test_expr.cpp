#include "mdi/errors.hpp"
#include "mdi/expr.hpp"
#include "mdi/linear_form.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <span>
#include <vector>

using namespace mdi;

namespace {

double eval2(const Expr& e, double x1, double x2) {
    const double p[] = {x1, x2};
    return eval(e, p);
}

// Random expression trees over x1..x3 for property tests. Depth-bounded,
// with small constants so most samples stay in a numerically sane range.
Expr random_expr(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 7);
    std::uniform_real_distribution<double> cval(-2.0, 2.0);
    std::uniform_int_distribution<int> vidx(1, 3);
    std::uniform_int_distribution<int> arity(2, 3);
    switch (pick(rng)) {
    case 0: return Expr::constant(cval(rng));
    case 1: return Expr::var(static_cast<std::uint32_t>(vidx(rng)));
    case 2: {
        std::vector<Expr> kids;
        for (int i = arity(rng); i > 0; --i) kids.push_back(random_expr(rng, depth - 1));
        return Expr::sum(std::move(kids));
    }
    case 3: {
        std::vector<Expr> kids;
        for (int i = arity(rng); i > 0; --i) kids.push_back(random_expr(rng, depth - 1));
        return Expr::product(std::move(kids));
    }
    case 4: {
        const int exps[] = {-2, -1, 2, 3};
        return Expr::pow(random_expr(rng, depth - 1), exps[pick(rng) % 4]);
    }
    case 5: return Expr::exp(random_expr(rng, depth - 1));
    case 6: return Expr::sin(random_expr(rng, depth - 1));
    default: return Expr::cos(random_expr(rng, depth - 1));
    }
}

} // namespace

TEST_CASE("parse: grammar essentials") {
    const Expr e = parse_expr("exp(5*x1^2+5*x2^2)");
    REQUIRE(e.kind() == ExprKind::Exp);
    const Expr& arg = e.child();
    REQUIRE(arg.kind() == ExprKind::Sum);
    REQUIRE(arg.children().size() == 2);
    for (const Expr& term : arg.children()) {
        REQUIRE(term.kind() == ExprKind::Product);
        REQUIRE(term.children().size() == 2);
        CHECK(term.child(0).kind() == ExprKind::Constant);
        CHECK(term.child(0).constant_value() == 5.0);
        CHECK(term.child(1).kind() == ExprKind::Power);
        CHECK(term.child(1).exponent() == 2);
    }
    CHECK(eval2(e, 0.3, -0.2) == doctest::Approx(std::exp(5 * 0.09 + 5 * 0.04)).epsilon(1e-15));

    const Expr zero = parse_expr("0");
    CHECK(zero.is_constant());
    CHECK(zero.constant_value() == 0.0);

    CHECK(parse_expr("pi").constant_value() == std::numbers::pi);
}

TEST_CASE("parse: division becomes a negative power") {
    const Expr e = parse_expr("1/(0.9^2+(x1-0.6)^2)");
    REQUIRE(e.kind() == ExprKind::Power);
    CHECK(e.exponent() == -1);
    REQUIRE(e.child().kind() == ExprKind::Sum);
    for (double x : {0.0, 0.6, 1.5}) {
        const double expect = 1.0 / (0.81 + (x - 0.6) * (x - 0.6));
        const double p[] = {x};
        CHECK(eval(e, p) == doctest::Approx(expect).epsilon(1e-15));
    }
}

TEST_CASE("parse: exponent tower is right-associative and integer-only") {
    const Expr t = parse_expr("x1^2^3");
    REQUIRE(t.kind() == ExprKind::Power);
    CHECK(t.exponent() == 8);
    CHECK(parse_expr("x1^-2").exponent() == -2);

    CHECK_THROWS_AS((void)parse_expr("x1^2.5"), NonIntegerExponent);
    CHECK_THROWS_AS((void)parse_expr("x1^x2"), NonIntegerExponent);
    CHECK_THROWS_AS((void)parse_expr("x1^1e3"), NonIntegerExponent);
}

TEST_CASE("parse: errors carry a byte offset") {
    CHECK_THROWS_AS((void)parse_expr("foo(x1)"), UnknownIdentifier);
    CHECK_THROWS_AS((void)parse_expr("x0"), UnknownIdentifier);
    CHECK_THROWS_AS((void)parse_expr("(x1"), SyntaxError);
    CHECK_THROWS_AS((void)parse_expr("x1 + * x2"), SyntaxError);
    try {
        (void)parse_expr("x1 + (x2");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }
}

TEST_CASE("eval: documented values and failure modes") {
    {
        const double p[] = {0.0, 0.0};
        CHECK(eval(parse_expr("exp(x1+x2)"), p) == 1.0);
    }
    {
        const double p[] = {0.25};
        CHECK(eval(parse_expr("sin(2*pi+2*x1)"), p) ==
              doctest::Approx(0.479425538604203).epsilon(1e-14));
    }
    {
        const double p[] = {1.0};
        CHECK_THROWS_AS((void)eval(parse_expr("x2"), p), MissingCoordinate);
    }
    {
        const double p[] = {1e9};
        CHECK_THROWS_AS((void)eval(parse_expr("exp(x1)"), p), NonFiniteResult);
    }
    {
        const double p[] = {0.0};
        CHECK_THROWS_AS((void)eval(parse_expr("1/x1"), p), NonFiniteResult);
    }
}

TEST_CASE("normalize: constant folding") {
    CHECK(normalize(Expr::sum({Expr::constant(2), Expr::constant(3)})).constant_value() == 5.0);
    CHECK(normalize(Expr::exp(Expr::constant(0))).constant_value() == 1.0);
    CHECK(normalize(Expr::product({Expr::constant(0), Expr::exp(Expr::var(1))}))
              .constant_value() == 0.0);
    CHECK(normalize(Expr::pow(Expr::constant(3), 2)).constant_value() == 9.0);
    // cos of a constant folds too
    CHECK(normalize(Expr::cos(Expr::constant(0))).constant_value() == 1.0);
}

TEST_CASE("normalize: flattening and like-term collection") {
    const Expr e = normalize(Expr::product({Expr::var(1), Expr::product({Expr::var(2), Expr::var(1)})}));
    REQUIRE(e.kind() == ExprKind::Product);
    REQUIRE(e.children().size() == 2);
    bool saw_square = false, saw_x2 = false;
    for (const Expr& f : e.children()) {
        if (f.kind() == ExprKind::Power) {
            CHECK(f.exponent() == 2);
            CHECK(f.child().var_index() == 1);
            saw_square = true;
        } else {
            CHECK(f.var_index() == 2);
            saw_x2 = true;
        }
    }
    CHECK(saw_square);
    CHECK(saw_x2);
    CHECK(eval2(e, 1.7, -0.4) == doctest::Approx(1.7 * 1.7 * -0.4).epsilon(1e-15));

    // 2*x1 + 3*x1 collapses to one monomial; cancelling terms vanish.
    const Expr s = parse_expr("2*x1 + 3*x1 + x1*x2 - x1*x2 + 4");
    const LinearForm lf = LinearForm::from_expr(s);
    CHECK(lf.size() == 2);
    CHECK(eval2(lf.to_expr(), 0.5, 9.0) == doctest::Approx(2.5 + 4.0).epsilon(1e-15));
}

TEST_CASE("tree_size counts every node") {
    CHECK(Expr::constant(3).tree_size() == 1);
    CHECK(parse_expr("x1+x2").tree_size() == 3);
    CHECK(parse_expr("exp(x1*x2)").tree_size() == 4);
}

TEST_CASE("normalize: random-tree soundness, idempotence, print round-trip") {
    std::mt19937 rng(20240817u);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    int points_checked = 0;
    for (int t = 0; t < 1000; ++t) {
        const Expr raw = random_expr(rng, 4);
        const Expr norm = normalize(raw);

        // Idempotence: a second pass leaves the tree structurally identical.
        CHECK(normalize(norm) == norm);

        // Printed form parses back to the same normalized tree.
        const Expr reparsed = parse_expr(to_string(norm));
        CHECK(reparsed == norm);

        for (int k = 0; k < 10; ++k) {
            const double p[] = {coord(rng), coord(rng), coord(rng)};
            double a = 0.0, b = 0.0, sens = 0.0;
            try {
                a = eval(raw, p);
                b = eval(norm, p);
                // Estimate the local condition via central differences; trees
                // like cos(exp(x^-6)) are infinitely sensitive to rounding in
                // their interior and cannot witness algebraic equivalence.
                for (int i = 0; i < 3; ++i) {
                    double q[] = {p[0], p[1], p[2]};
                    const double h = 1e-6 * std::max(0.25, std::fabs(p[i]));
                    q[i] = p[i] + h;
                    const double up = eval(raw, q);
                    q[i] = p[i] - h;
                    const double dn = eval(raw, q);
                    sens += std::fabs(up - dn) / (2.0 * h) * std::max(std::fabs(p[i]), 0.25);
                }
            } catch (const NonFiniteResult&) {
                continue; // pole or overflow at this sample; skip the point
            }
            if (std::fabs(a) > 1e8) continue;                      // overflow regime
            if (sens > 1e3 * std::max(1.0, std::fabs(a))) continue; // ill-conditioned sample
            ++points_checked;
            CHECK(std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(a)));
        }
    }
    // The filters must not have rejected the bulk of the samples.
    CHECK(points_checked > 5000);
}

TEST_CASE("canonical order is a deterministic total order") {
    std::mt19937 rng(7u);
    std::vector<Expr> exprs;
    for (int i = 0; i < 50; ++i) exprs.push_back(normalize(random_expr(rng, 3)));
    auto by_compare = [](const Expr& a, const Expr& b) { return Expr::compare(a, b) < 0; };
    std::vector<Expr> s1 = exprs, s2 = exprs;
    std::sort(s1.begin(), s1.end(), by_compare);
    std::shuffle(s2.begin(), s2.end(), rng);
    std::sort(s2.begin(), s2.end(), by_compare);
    for (std::size_t i = 0; i < s1.size(); ++i) CHECK(Expr::compare(s1[i], s2[i]) == 0);
    for (const Expr& e : exprs) CHECK(Expr::compare(e, e) == 0);
}

namespace {

// Reassembles a split term and evaluates it: coeff * v_part * rest * entangled.
double eval_split(const SplitResult& sr, std::span<const double> p) {
    double total = 0.0;
    for (const SplitTerm& t : sr.terms)
        total += t.coeff * eval(t.v_part, p) * eval(t.rest, p) * eval(t.entangled, p);
    return total;
}

} // namespace

TEST_CASE("split_for_binding: product and trig separation") {
    {
        const Expr e = parse_expr("exp(5*x1^2+5*x2^2)");
        const SplitResult sr = split_for_binding(e, 1);
        CHECK(sr.fully_separable);
        REQUIRE(sr.terms.size() == 1);
        CHECK(sr.terms[0].entangled.is_constant());
        // v_part depends on x1 alone, rest on x2 alone
        CHECK(sr.terms[0].v_part.free_vars() == std::vector<std::uint32_t>{1});
        CHECK(sr.terms[0].rest.free_vars() == std::vector<std::uint32_t>{2});
        const double p[] = {0.7, -0.3};
        CHECK(eval_split(sr, p) == doctest::Approx(eval(e, p)).epsilon(1e-14));
    }
    {
        const Expr e = parse_expr("sin(2*pi+10*x1^2+5*x2^2)");
        const SplitResult sr = split_for_binding(e, 1);
        CHECK(sr.fully_separable);
        REQUIRE(sr.terms.size() == 2);
        std::mt19937 rng(3u);
        std::uniform_real_distribution<double> coord(-1.0, 1.0);
        for (int k = 0; k < 20; ++k) {
            const double p[] = {coord(rng), coord(rng)};
            const double want = eval(e, p);
            CHECK(std::fabs(eval_split(sr, p) - want) <= 1e-12 * std::max(1.0, std::fabs(want)));
        }
    }
    {
        // No x1 dependence: single term with unit v-part.
        const SplitResult sr = split_for_binding(parse_expr("x2"), 1);
        REQUIRE(sr.terms.size() == 1);
        CHECK(sr.terms[0].v_part.is_constant());
        CHECK(sr.terms[0].v_part.constant_value() == 1.0);
        CHECK(sr.terms[0].rest == parse_expr("x2"));
    }
    {
        // x1*x2 inside exp separates by no rule: entangled classification.
        const SplitResult sr = split_for_binding(parse_expr("exp(x1*x2)"), 1);
        CHECK(!sr.fully_separable);
        REQUIRE(sr.terms.size() == 1);
        CHECK(!sr.terms[0].entangled.is_constant());
    }
}

TEST_CASE("split_for_binding: random-tree soundness") {
    std::mt19937 rng(99173u);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    int checked = 0;
    for (int t = 0; t < 300; ++t) {
        const Expr e = normalize(random_expr(rng, 4));
        const SplitResult sr = split_for_binding(e, 1);
        for (int k = 0; k < 5; ++k) {
            const double p[] = {coord(rng), coord(rng), coord(rng)};
            double want = 0.0, got = 0.0;
            try {
                want = eval(e, p);
                got = eval_split(sr, p);
            } catch (const NonFiniteResult&) {
                continue;
            }
            if (std::fabs(want) > 1e8) continue;
            ++checked;
            CHECK(std::fabs(got - want) <= 1e-12 * std::max(1.0, std::fabs(want)));
        }
    }
    CHECK(checked > 1000);
}

TEST_CASE("substitute and shift_vars_down") {
    const Expr e = parse_expr("exp(x1+x2)*x3^2");
    const Expr bound = substitute(e, 1, 0.5);
    CHECK(bound.free_vars() == std::vector<std::uint32_t>{2, 3});
    const Expr shifted = shift_vars_down(bound, 1);
    CHECK(shifted.free_vars() == std::vector<std::uint32_t>{1, 2});
    const double p[] = {0.25, -1.5};
    const double full[] = {0.5, 0.25, -1.5};
    CHECK(eval(shifted, p) == doctest::Approx(eval(e, full)).epsilon(1e-15));
}
