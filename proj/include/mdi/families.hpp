#pragma once

#include "mdi/expr.hpp"
#include "mdi/quad.hpp"

#include <string>

namespace mdi {

// Built-in integrand families. Unless noted, the family exists for every
// d >= 1 on the unit cube [0,1]^d:
//   alt_exp        exp(x1 - x2 + x3 - ...)                 signs alternate
//   prod_rational  prod_i 1 / (0.9^2 + (x_i - 0.6)^2)
//   gauss          (2*pi)^(-1/2) * exp(-|x|^2 / 2)
//   cos_sum        cos(2*pi + 2*(x1 + ... + xd))
//   alt_exp_sq     exp(5*x1^2 - 5*x2^2 + 5*x3^2 - ...)     signs alternate
// Fixed-dimension families on [0,2]^d:
//   exp_radial2    exp(5*x1^2 + 5*x2^2)                    d = 2
//   sin_phase2     sin(2*pi + 10*x1^2 + 5*x2^2)            d = 2
//   exp_radial3    exp(5*(x1^2 + x2^2 + x3^2))             d = 3
//   sin_phase3     sin(2*pi + 10*x1^2 + 5*x2^2 + 20*x3^2)  d = 3
// `custom` carries a DSL expression string instead.
enum class FamilyKind : int {
    alt_exp,
    prod_rational,
    gauss,
    cos_sum,
    alt_exp_sq,
    exp_radial2,
    sin_phase2,
    exp_radial3,
    sin_phase3,
    custom,
};

struct TestFamily {
    FamilyKind kind = FamilyKind::alt_exp;
    std::string expr; // DSL source, custom only

    static TestFamily named(FamilyKind k) { return TestFamily{k, {}}; }
    static TestFamily custom(std::string dsl) { return TestFamily{FamilyKind::custom, std::move(dsl)}; }

    friend bool operator==(const TestFamily&, const TestFamily&) = default;
};

// Name <-> value mapping used by the CLI and the CSV tables; custom families
// serialize as "custom:<expression>". Throws UnknownFamily.
std::string family_name(const TestFamily& f);
TestFamily family_from_name(const std::string& name);

struct FamilyInstance {
    Expr integrand;
    Box box;
};

// Builds the integrand and its default box at dimension d. Throws
// BadDimension for a fixed-d family at the wrong d (or d < 1), and parse
// errors for custom sources; a custom integrand must fit within d variables.
FamilyInstance expand_family(const TestFamily& f, int d);

} // namespace mdi
