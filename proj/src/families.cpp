#include "mdi/families.hpp"

#include "mdi/errors.hpp"

#include <cmath>
#include <numbers>

namespace mdi {

namespace {

struct NameEntry {
    FamilyKind kind;
    const char* name;
};

constexpr NameEntry kNames[] = {
    {FamilyKind::alt_exp, "alt_exp"},
    {FamilyKind::prod_rational, "prod_rational"},
    {FamilyKind::gauss, "gauss"},
    {FamilyKind::cos_sum, "cos_sum"},
    {FamilyKind::alt_exp_sq, "alt_exp_sq"},
    {FamilyKind::exp_radial2, "exp_radial2"},
    {FamilyKind::sin_phase2, "sin_phase2"},
    {FamilyKind::exp_radial3, "exp_radial3"},
    {FamilyKind::sin_phase3, "sin_phase3"},
};

} // namespace

std::string family_name(const TestFamily& f) {
    if (f.kind == FamilyKind::custom) return "custom:" + f.expr;
    for (const NameEntry& e : kNames)
        if (e.kind == f.kind) return e.name;
    throw UnknownFamily("unnamed family");
}

TestFamily family_from_name(const std::string& name) {
    if (name.starts_with("custom:")) return TestFamily::custom(name.substr(7));
    for (const NameEntry& e : kNames)
        if (name == e.name) return TestFamily::named(e.kind);
    throw UnknownFamily("unknown family '" + name + "'");
}

namespace {

Expr negated(Expr e) { return Expr::product({Expr::constant(-1.0), std::move(e)}); }

Expr scaled_square(double c, std::uint32_t i) {
    return Expr::product({Expr::constant(c), Expr::pow(Expr::var(i), 2)});
}

} // namespace

FamilyInstance expand_family(const TestFamily& f, int d) {
    if (d < 1) throw BadDimension("dimension must be at least 1");
    const double pi = std::numbers::pi;
    auto dv = static_cast<std::uint32_t>(d);
    std::vector<Expr> parts;
    switch (f.kind) {
    case FamilyKind::alt_exp:
        for (std::uint32_t i = 1; i <= dv; ++i)
            parts.push_back(i % 2 == 1 ? Expr::var(i) : negated(Expr::var(i)));
        return {normalize(Expr::exp(Expr::sum(std::move(parts)))), Box::cube(d, 0.0, 1.0)};
    case FamilyKind::prod_rational:
        for (std::uint32_t i = 1; i <= dv; ++i)
            parts.push_back(Expr::pow(
                Expr::sum({Expr::constant(ipow(0.9, 2)),
                           Expr::pow(Expr::sum({Expr::var(i), Expr::constant(-0.6)}), 2)}),
                -1));
        return {normalize(Expr::product(std::move(parts))), Box::cube(d, 0.0, 1.0)};
    case FamilyKind::gauss:
        for (std::uint32_t i = 1; i <= dv; ++i) parts.push_back(scaled_square(-0.5, i));
        return {normalize(Expr::product({Expr::constant(1.0 / std::sqrt(2.0 * pi)),
                                         Expr::exp(Expr::sum(std::move(parts)))})),
                Box::cube(d, 0.0, 1.0)};
    case FamilyKind::cos_sum:
        parts.push_back(Expr::constant(2 * pi));
        for (std::uint32_t i = 1; i <= dv; ++i)
            parts.push_back(Expr::product({Expr::constant(2.0), Expr::var(i)}));
        return {normalize(Expr::cos(Expr::sum(std::move(parts)))), Box::cube(d, 0.0, 1.0)};
    case FamilyKind::alt_exp_sq:
        for (std::uint32_t i = 1; i <= dv; ++i)
            parts.push_back(scaled_square(i % 2 == 1 ? 5.0 : -5.0, i));
        return {normalize(Expr::exp(Expr::sum(std::move(parts)))), Box::cube(d, 0.0, 1.0)};
    case FamilyKind::exp_radial2:
    case FamilyKind::exp_radial3: {
        int expect = f.kind == FamilyKind::exp_radial2 ? 2 : 3;
        if (d != expect)
            throw BadDimension(family_name(f) + " requires d = " + std::to_string(expect));
        for (std::uint32_t i = 1; i <= dv; ++i) parts.push_back(scaled_square(5.0, i));
        return {normalize(Expr::exp(Expr::sum(std::move(parts)))), Box::cube(d, 0.0, 2.0)};
    }
    case FamilyKind::sin_phase2:
    case FamilyKind::sin_phase3: {
        bool three = f.kind == FamilyKind::sin_phase3;
        int expect = three ? 3 : 2;
        if (d != expect)
            throw BadDimension(family_name(f) + " requires d = " + std::to_string(expect));
        const double coeff2[] = {10.0, 5.0};
        const double coeff3[] = {10.0, 5.0, 20.0};
        parts.push_back(Expr::constant(2 * pi));
        for (std::uint32_t i = 1; i <= dv; ++i)
            parts.push_back(scaled_square(three ? coeff3[i - 1] : coeff2[i - 1], i));
        return {normalize(Expr::sin(Expr::sum(std::move(parts)))), Box::cube(d, 0.0, 2.0)};
    }
    case FamilyKind::custom: {
        Expr g = parse_expr(f.expr);
        if (g.max_var() > dv)
            throw DimensionMismatch("custom integrand uses x" + std::to_string(g.max_var()) +
                                    " but d = " + std::to_string(d));
        return {std::move(g), Box::cube(d, 0.0, 1.0)};
    }
    }
    throw UnknownFamily("unnamed family");
}

} // namespace mdi
