// Direct tensor-product summation, Monte Carlo, and the reference-value
// machinery the benchmarks compare against.
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <mdi/baselines.hpp>
#include <mdi/errors.hpp>
#include <mdi/expr.hpp>
#include <mdi/families.hpp>
#include <mdi/quad.hpp>
#include <mdi/tables.hpp>

using namespace mdi;

TEST_CASE("stp_integrate: constants and low-degree polynomials are exact") {
    CHECK(stp_integrate(parse_expr("1"), Box::cube(3, 0.0, 2.0), 5, RuleKind::simpson) ==
          doctest::Approx(8.0).epsilon(1e-14));

    // Simpson is exact through degree 3 per axis.
    const double cubic = stp_integrate(parse_expr("x1^2 * x2 * x3"), Box::cube(3, 0.0, 1.0), 5,
                                       RuleKind::simpson);
    CHECK(std::abs(cubic - 1.0 / 12.0) <= 1e-13 / 12.0);

    const double g2 = stp_integrate(parse_expr("x1^3 * x2^3"), Box::cube(2, 0.0, 1.0), 4,
                                    RuleKind::gauss2);
    CHECK(std::abs(g2 - 1.0 / 16.0) <= 1e-13 / 16.0);

    // Trapezoid handles the multilinear case exactly.
    const double lin = stp_integrate(parse_expr("x1 * x2 * x3 * x4"), Box::cube(4, 0.0, 1.0), 5,
                                     RuleKind::trap);
    CHECK(std::abs(lin - 1.0 / 16.0) <= 1e-13 / 16.0);
}

TEST_CASE("stp_integrate: frozen relative error at 3-d, 21 points") {
    TestFamily f = TestFamily::named(FamilyKind::exp_radial3);
    FamilyInstance inst = expand_family(f, 3);
    const double value = stp_integrate(inst.integrand, inst.box, 21, RuleKind::simpson);
    const Reference ref = reference_integral(f, 3, inst.box);
    CHECK(four_digit_match(relative_error(value, ref.value), 1.8762e-1));
}

TEST_CASE("stp_integrate: summand cap") {
    FamilyInstance big = expand_family(TestFamily::named(FamilyKind::alt_exp), 10);
    CHECK_THROWS_AS(stp_integrate(big.integrand, big.box, 11, RuleKind::simpson), CapExceeded);

    // The cap is inclusive: 10^4 summands pass at cap 10000, fail at 9999.
    FamilyInstance small = expand_family(TestFamily::named(FamilyKind::alt_exp), 4);
    CHECK_NOTHROW(stp_integrate(small.integrand, small.box, 10, RuleKind::midpoint, 10000));
    CHECK_THROWS_AS(stp_integrate(small.integrand, small.box, 10, RuleKind::midpoint, 9999),
                    CapExceeded);
}

TEST_CASE("mc_integrate: constant integrand has zero spread") {
    McConfig cfg;
    cfg.samples = 100;
    McResult r = mc_integrate(parse_expr("1"), Box::cube(2, 0.0, 3.0), cfg);
    CHECK(r.estimate == doctest::Approx(9.0).epsilon(1e-14));
    CHECK(r.stderr_est == 0.0);
}

TEST_CASE("mc_integrate: estimate lands within a few standard errors") {
    McConfig cfg;
    cfg.samples = 1000000;
    cfg.seed = 7;
    McResult r = mc_integrate(parse_expr("x1"), Box::cube(1, 0.0, 1.0), cfg);
    CHECK(r.stderr_est > 0.0);
    CHECK(r.stderr_est < 1e-3);
    CHECK(std::abs(r.estimate - 0.5) <= 4.0 * r.stderr_est);
}

TEST_CASE("mc_integrate: seeded determinism and degenerate input") {
    Expr g = parse_expr("exp(x1 - x2)");
    Box box = Box::cube(2, 0.0, 1.0);
    McConfig cfg;
    cfg.samples = 50000;
    cfg.seed = 3;
    McResult a = mc_integrate(g, box, cfg);
    McResult b = mc_integrate(g, box, cfg);
    CHECK(a.estimate == b.estimate);
    CHECK(a.stderr_est == b.stderr_est);

    cfg.seed = 4;
    McResult c = mc_integrate(g, box, cfg);
    CHECK(c.estimate != a.estimate);

    cfg.samples = 0;
    CHECK_THROWS_AS(mc_integrate(g, box, cfg), DegenerateData);
}

TEST_CASE("reference_integral: frozen values") {
    Box unit1 = Box::cube(1, 0.0, 1.0);
    Reference g1 = reference_integral(TestFamily::named(FamilyKind::gauss), 1, unit1);
    CHECK(std::abs(g1.value - 0.3413447460685429) <= 1e-12);

    Box unit2 = Box::cube(2, 0.0, 1.0);
    Reference a2 = reference_integral(TestFamily::named(FamilyKind::alt_exp), 2, unit2);
    const double want = (std::exp(1.0) - 1.0) * (1.0 - std::exp(-1.0));
    CHECK(std::abs(a2.value - want) <= 1e-13 * want);
}

TEST_CASE("reference_integral: closed form agrees with the numeric axis path") {
    for (FamilyKind fam : {FamilyKind::alt_exp, FamilyKind::prod_rational, FamilyKind::gauss,
                           FamilyKind::cos_sum})
        for (int d : {1, 3}) {
            TestFamily f = TestFamily::named(fam);
            Box box = Box::cube(d, 0.0, 1.0);
            Reference closed = reference_integral(f, d, box, RefMethod::analytic_product);
            Reference numeric = reference_integral(f, d, box, RefMethod::high_res_1d);
            INFO("family ", family_name(f), " d=", d);
            const double scale = std::max(1.0, std::abs(closed.value));
            CHECK(std::abs(closed.value - numeric.value) <= 1e-12 * scale);
            CHECK(numeric.est_accuracy >= 0.0);
        }
}

TEST_CASE("reference_integral: unsupported requests throw") {
    Box unit2 = Box::cube(2, 0.0, 1.0);
    CHECK_THROWS_AS(reference_integral(TestFamily::custom("x1 + 1"), 2, unit2), UnknownFamily);
    CHECK_THROWS_AS(reference_integral(TestFamily::named(FamilyKind::alt_exp_sq), 2, unit2,
                                       RefMethod::analytic_product),
                    UnknownFamily);
    CHECK_THROWS_AS(reference_integral(TestFamily::named(FamilyKind::alt_exp), 2, unit2,
                                       RefMethod::stp_richardson),
                    UnknownFamily);
    CHECK_THROWS_AS(reference_integral(TestFamily::named(FamilyKind::exp_radial2), 3,
                                       Box::cube(3, 0.0, 2.0)),
                    BadDimension);
}

TEST_CASE("relative_error: definition and zero-reference fallback") {
    CHECK(relative_error(1.1, 1.0) == doctest::Approx(0.1).epsilon(1e-13));
    CHECK(relative_error(2.5, 2.5) == 0.0);
    CHECK(relative_error(0.5, 0.0) == 0.5); // absolute when the reference vanishes
}
