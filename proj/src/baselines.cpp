#include "mdi/baselines.hpp"

#include "mdi/errors.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace mdi {

double stp_integrate(const Expr& g, const Box& box, int n_points, RuleKind rule,
                     std::uint64_t cap) {
    int d = box.dims();
    if (d < 1) throw DimensionMismatch("box must have at least one axis");
    if (g.max_var() > static_cast<std::uint32_t>(d))
        throw DimensionMismatch("integrand uses x" + std::to_string(g.max_var()) +
                                " but the box has " + std::to_string(d) + " axes");

    std::vector<Rule1D> rules;
    rules.reserve(static_cast<std::size_t>(d));
    std::uint64_t total = 1;
    for (int i = 0; i < d; ++i) {
        rules.push_back(make_rule(rule, n_points, box.axis(i).lo, box.axis(i).hi));
        std::uint64_t n = static_cast<std::uint64_t>(rules.back().n_points());
        if (total > cap / n)
            throw CapExceeded("tensor product has more than " + std::to_string(cap) +
                              " summands");
        total *= n;
    }

    auto dd = static_cast<std::size_t>(d);
    std::vector<std::size_t> idx(dd, 0);
    std::vector<double> pt(dd), wpre(dd + 1);
    wpre[0] = 1.0;
    for (std::size_t j = 0; j < dd; ++j) {
        pt[j] = rules[j].nodes[0];
        wpre[j + 1] = wpre[j] * rules[j].weights[0];
    }

    // ascending lexicographic multi-index walk, last axis fastest; weight
    // prefix products make each step O(changed axes)
    PairwiseAccumulator acc;
    for (;;) {
        acc.add(wpre[dd] * eval(g, pt));
        std::size_t j = dd;
        while (j-- > 0) {
            if (++idx[j] < rules[j].nodes.size()) break;
            idx[j] = 0;
            if (j == 0) return acc.total();
        }
        for (std::size_t t = j; t < dd; ++t) {
            pt[t] = rules[t].nodes[idx[t]];
            wpre[t + 1] = wpre[t] * rules[t].weights[idx[t]];
        }
    }
}

namespace {

// SplitMix64 stream; the value at counter position c depends only on (seed, c).
std::uint64_t sm64_at(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + (counter + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double unit_double(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53; // [0,1)
}

} // namespace

McResult mc_integrate(const Expr& g, const Box& box, const McConfig& cfg) {
    int d = box.dims();
    if (d < 1) throw DimensionMismatch("box must have at least one axis");
    if (g.max_var() > static_cast<std::uint32_t>(d))
        throw DimensionMismatch("integrand uses x" + std::to_string(g.max_var()) +
                                " but the box has " + std::to_string(d) + " axes");
    if (cfg.samples == 0) throw DegenerateData("Monte Carlo needs at least one sample");

    auto dd = static_cast<std::size_t>(d);
    std::vector<double> pt(dd);
    double mean = 0.0, m2 = 0.0;
    for (std::uint64_t s = 0; s < cfg.samples; ++s) {
        for (std::size_t j = 0; j < dd; ++j) {
            double u = unit_double(sm64_at(cfg.seed, s * dd + j));
            pt[j] = box.axis(static_cast<int>(j)).lo +
                    (box.axis(static_cast<int>(j)).hi - box.axis(static_cast<int>(j)).lo) * u;
        }
        double v = eval(g, pt);
        double delta = v - mean;
        mean += delta / static_cast<double>(s + 1);
        m2 += delta * (v - mean);
    }
    double vol = box.volume();
    double stderr_est = 0.0;
    if (cfg.samples > 1) {
        double var = m2 / static_cast<double>(cfg.samples - 1);
        stderr_est = vol * std::sqrt(var / static_cast<double>(cfg.samples));
    }
    double estimate = vol * mean;
    if (!std::isfinite(estimate) || !std::isfinite(stderr_est))
        throw NonFiniteResult("Monte Carlo estimate is not finite");
    return McResult{estimate, stderr_est};
}

namespace {

using cplx = std::complex<double>;

// Composite Simpson with long-double accumulation; doubles the mesh and
// extrapolates the order-4 error term away. err is the extrapolation size.
template <typename F>
cplx simpson_rich(F f, double a, double b, double& err) {
    auto once = [&](int n) {
        long double h = static_cast<long double>(b - a) / (n - 1);
        std::complex<long double> acc = 0;
        for (int i = 0; i < n; ++i) {
            double x = a + static_cast<double>(h) * i;
            long double w = (i == 0 || i == n - 1) ? h / 3 : (i % 2 == 1 ? 4 * h / 3 : 2 * h / 3);
            acc += std::complex<long double>(cplx(f(x))) * w;
        }
        return acc;
    };
    auto s1 = once(20001);
    auto s2 = once(40001);
    auto corr = (s2 - s1) / 15.0L;
    auto val = s2 + corr;
    err = static_cast<double>(std::abs(corr));
    return cplx(val);
}

double sign_of_axis(int i) { return i % 2 == 1 ? 1.0 : -1.0; } // 1-based, odd positive

struct AxisAccum {
    cplx prod = 1.0;
    double rel_err = 0.0; // accumulated relative error estimate

    void mul_exact(cplx v) { prod *= v; }
    void mul_numeric(cplx v, double abs_err) {
        prod *= v;
        if (std::abs(v) > 0) rel_err += abs_err / std::abs(v);
    }
};

void require_dims(const TestFamily& f, int expect, int d) {
    if (d != expect)
        throw BadDimension(family_name(f) + " is a " + std::to_string(expect) +
                           "-dimensional family, got d = " + std::to_string(d));
}

} // namespace

Reference reference_integral(const TestFamily& family, int d, const Box& box, RefMethod method) {
    if (family.kind == FamilyKind::custom)
        throw UnknownFamily("no reference value for custom integrands");
    if (d < 1 || box.dims() != d) throw BadDimension("reference needs a d-dimensional box");
    if (method == RefMethod::stp_richardson)
        throw UnknownFamily("every built-in family has a per-axis reference; the tensor "
                            "fallback is not implemented");
    bool analytic = method == RefMethod::analytic_product;

    const double pi = std::numbers::pi;
    const double sqrt2 = std::sqrt(2.0);
    AxisAccum acc;
    double prefactor = 1.0;
    double phase = 0.0;
    bool imag_part = false, trig = false;

    auto axis_numeric_real = [&acc](auto f, double a, double b) {
        double err = 0.0;
        cplx v = simpson_rich(f, a, b, err);
        acc.mul_numeric(v, err);
    };

    switch (family.kind) {
    case FamilyKind::alt_exp:
        for (int i = 1; i <= d; ++i) {
            double s = sign_of_axis(i);
            double a = box.axis(i - 1).lo, b = box.axis(i - 1).hi;
            if (analytic)
                acc.mul_exact((std::exp(s * b) - std::exp(s * a)) / s);
            else
                axis_numeric_real([s](double x) { return std::exp(s * x); }, a, b);
        }
        break;
    case FamilyKind::prod_rational:
        for (int i = 1; i <= d; ++i) {
            double a = box.axis(i - 1).lo, b = box.axis(i - 1).hi;
            if (analytic)
                acc.mul_exact((std::atan((b - 0.6) / 0.9) - std::atan((a - 0.6) / 0.9)) / 0.9);
            else
                axis_numeric_real(
                    [](double x) { return 1.0 / (0.81 + (x - 0.6) * (x - 0.6)); }, a, b);
        }
        break;
    case FamilyKind::gauss:
        prefactor = 1.0 / std::sqrt(2.0 * pi);
        for (int i = 1; i <= d; ++i) {
            double a = box.axis(i - 1).lo, b = box.axis(i - 1).hi;
            if (analytic)
                acc.mul_exact(std::sqrt(pi / 2) * (std::erf(b / sqrt2) - std::erf(a / sqrt2)));
            else
                axis_numeric_real([](double x) { return std::exp(-0.5 * x * x); }, a, b);
        }
        break;
    case FamilyKind::cos_sum:
        trig = true;
        phase = 2 * pi;
        for (int i = 1; i <= d; ++i) {
            double a = box.axis(i - 1).lo, b = box.axis(i - 1).hi;
            if (analytic) {
                cplx ic(0.0, 2.0);
                acc.mul_exact((std::exp(ic * b) - std::exp(ic * a)) / ic);
            } else {
                double err = 0.0;
                cplx v = simpson_rich([](double x) { return std::exp(cplx(0.0, 2.0 * x)); }, a, b,
                                      err);
                acc.mul_numeric(v, err);
            }
        }
        break;
    case FamilyKind::alt_exp_sq:
        if (analytic) throw UnknownFamily("exp(5x^2) has no elementary antiderivative");
        for (int i = 1; i <= d; ++i) {
            double s = 5.0 * sign_of_axis(i);
            axis_numeric_real([s](double x) { return std::exp(s * x * x); }, box.axis(i - 1).lo,
                              box.axis(i - 1).hi);
        }
        break;
    case FamilyKind::exp_radial2:
    case FamilyKind::exp_radial3:
        require_dims(family, family.kind == FamilyKind::exp_radial2 ? 2 : 3, d);
        if (analytic) throw UnknownFamily("exp(5x^2) has no elementary antiderivative");
        for (int i = 1; i <= d; ++i)
            axis_numeric_real([](double x) { return std::exp(5.0 * x * x); }, box.axis(i - 1).lo,
                              box.axis(i - 1).hi);
        break;
    case FamilyKind::sin_phase2:
    case FamilyKind::sin_phase3: {
        bool three = family.kind == FamilyKind::sin_phase3;
        require_dims(family, three ? 3 : 2, d);
        if (analytic) throw UnknownFamily("exp(i c x^2) has no elementary antiderivative");
        trig = true;
        imag_part = true;
        phase = 2 * pi;
        const double coeff2[] = {10.0, 5.0};
        const double coeff3[] = {10.0, 5.0, 20.0};
        for (int i = 1; i <= d; ++i) {
            double c = three ? coeff3[i - 1] : coeff2[i - 1];
            double err = 0.0;
            cplx v = simpson_rich([c](double x) { return std::exp(cplx(0.0, c * x * x)); },
                                  box.axis(i - 1).lo, box.axis(i - 1).hi, err);
            acc.mul_numeric(v, err);
        }
        break;
    }
    case FamilyKind::custom:
        break; // unreachable
    }

    double value;
    if (trig) {
        cplx full = std::exp(cplx(0.0, phase)) * acc.prod;
        value = imag_part ? full.imag() : full.real();
    } else {
        value = prefactor * acc.prod.real();
    }
    // relative per-axis errors compound; the trig projection can cancel, so
    // keep the bound in terms of the product's magnitude
    double est = std::abs(acc.prod) * (acc.rel_err + 1e-14 * d) * std::abs(prefactor);
    if (!std::isfinite(value)) throw NonFiniteResult("reference value is not finite");
    return Reference{value, analytic ? RefMethod::analytic_product : RefMethod::high_res_1d, est};
}

Reference reference_integral(const TestFamily& family, int d, const Box& box) {
    switch (family.kind) {
    case FamilyKind::alt_exp:
    case FamilyKind::prod_rational:
    case FamilyKind::gauss:
    case FamilyKind::cos_sum:
        return reference_integral(family, d, box, RefMethod::analytic_product);
    default:
        return reference_integral(family, d, box, RefMethod::high_res_1d);
    }
}

double relative_error(double value, double reference_value) {
    double diff = std::abs(value - reference_value);
    if (std::abs(reference_value) <= 1e-300) return diff;
    return diff / std::abs(reference_value);
}

} // namespace mdi
