#include "mdi/tables.hpp"

#include "mdi/errors.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <initializer_list>
#include <span>
#include <utility>

namespace mdi {

namespace {

RunConfig tcfg(int n, RuleKind r = RuleKind::simpson, int m = 1) {
    RunConfig cfg;
    cfg.n_points = n;
    cfg.rule = r;
    cfg.step = m;
    cfg.timing_reps = 1; // error-reproduction suites report single-shot timings
    return cfg;
}

void add_row(TableResult& t, Method method, const TestFamily& fam, int d, const RunConfig& cfg,
             std::optional<double> expected) {
    TableRow row;
    row.report = run(method, fam, d, cfg);
    row.expected = expected;
    if (expected && method != Method::mc && row.report.status == "ok" &&
        row.report.rel_error) {
        row.checked = true;
        row.match = four_digit_match(*row.report.rel_error, *expected);
    }
    t.rows.push_back(std::move(row));
}

// One node-refinement suite over a 2-d or 3-d family, pairing the direct
// tensor-product sum with the dimension-iteration run at every node count.
TableResult refinement_suite(const char* id, const char* title, FamilyKind kind, int d,
                             std::span<const int> ns, std::span<const double> expected) {
    TableResult t{id, title, {}, {}, {}};
    const TestFamily fam = TestFamily::named(kind);
    for (std::size_t i = 0; i < ns.size(); ++i) {
        add_row(t, Method::stp, fam, d, tcfg(ns[i]), expected[i]);
        add_row(t, Method::mdi, fam, d, tcfg(ns[i]), expected[i]);
    }
    return t;
}

// Dimension sweep pairing the tensor-product sum (feasible rows only; the
// summand cap turns the rest into failed rows) with the dimension iteration.
TableResult dim_suite_vs_stp(const char* id, const char* title, FamilyKind kind, int n,
                             std::span<const int> ds, std::span<const double> expected) {
    TableResult t{id, title, {}, {}, {}};
    const TestFamily fam = TestFamily::named(kind);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        add_row(t, Method::stp, fam, ds[i], tcfg(n), expected[i]);
        add_row(t, Method::mdi, fam, ds[i], tcfg(n), expected[i]);
    }
    t.notes.push_back("Tensor-product rows whose summand count exceeds the default cap are "
                      "reported as failed; only the dimension-iteration rows are feasible there.");
    return t;
}

// Dimension sweep pairing the dimension iteration with a seeded Monte Carlo
// run. The recorded Monte Carlo errors came from matched-error sample counts
// on different hardware; our rows use a fixed sample budget and report their
// own standard error, so they carry no match flag.
TableResult dim_suite_vs_mc(const char* id, const char* title, FamilyKind kind,
                            std::span<const int> ds, std::span<const double> expected,
                            std::uint64_t mc_samples) {
    TableResult t{id, title, {}, {}, {}};
    const TestFamily fam = TestFamily::named(kind);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        add_row(t, Method::mdi, fam, ds[i], tcfg(11), expected[i]);
        RunConfig mc = tcfg(11);
        mc.samples = mc_samples;
        add_row(t, Method::mc, fam, ds[i], mc, std::nullopt);
    }
    t.notes.push_back("Monte Carlo rows use a fixed sample budget of " +
                      std::to_string(mc_samples) +
                      " and are stochastic; compare their rel_error against their own "
                      "standard error, not against the deterministic baseline.");
    return t;
}

// High-dimension sweep of the dimension iteration alone at a small node count.
TableResult high_dim_suite(const char* id, const char* title, FamilyKind kind, int n,
                           std::span<const int> ds, std::span<const double> expected) {
    TableResult t{id, title, {}, {}, {}};
    const TestFamily fam = TestFamily::named(kind);
    for (std::size_t i = 0; i < ds.size(); ++i)
        add_row(t, Method::mdi, fam, ds[i], tcfg(n), expected[i]);
    return t;
}

struct RuleBlock {
    RuleKind rule;
    int n; // total nodes
    std::span<const int> ds;
    std::span<const double> expected;
};

TableResult rule_suite(const char* id, const char* title, FamilyKind kind,
                       std::span<const RuleBlock> blocks) {
    TableResult t{id, title, {}, {}, {}};
    const TestFamily fam = TestFamily::named(kind);
    for (const RuleBlock& b : blocks)
        for (std::size_t i = 0; i < b.ds.size(); ++i)
            add_row(t, Method::mdi, fam, b.ds[i], tcfg(b.n, b.rule), b.expected[i]);
    t.notes.push_back("Two-point Gauss rows pair their N nodes into N/2 panels, so the panel "
                      "width matches the Simpson rows with N+1 nodes of the same baseline.");
    return t;
}

TableResult step_suite(const char* id, const char* title, FamilyKind kind,
                       std::span<const int> ds, std::span<const double> expected) {
    TableResult t{id, title, {}, {}, {}};
    const TestFamily fam = TestFamily::named(kind);
    for (std::size_t i = 0; i < ds.size(); ++i)
        for (int m : {1, 2, 3})
            add_row(t, Method::mdi, fam, ds[i], tcfg(11, RuleKind::simpson, m), expected[i]);
    t.notes.push_back("The computed value is independent of the step length m; every m row "
                      "of a dimension shares one baseline error.");
    return t;
}

TableResult node_sweep_suite(const char* id, const char* title, FamilyKind kind,
                             std::span<const int> ns, std::span<const double> expected_d5,
                             std::span<const double> expected_d10) {
    TableResult t{id, title, {}, {}, {}};
    const TestFamily fam = TestFamily::named(kind);
    for (std::size_t i = 0; i < ns.size(); ++i) {
        add_row(t, Method::mdi, fam, 5, tcfg(ns[i]), expected_d5[i]);
        add_row(t, Method::mdi, fam, 10, tcfg(ns[i]), expected_d10[i]);
    }
    return t;
}

constexpr int kRefineNs2[] = {21, 41, 81, 161, 201, 321};
constexpr int kRefineNs3[] = {21, 41, 81, 161, 201, 321, 641};
constexpr int kSweepNs[] = {11, 21, 41, 81, 161, 321};
constexpr int kRuleDs[] = {10, 30, 50, 70, 90, 100};

TableResult t1() {
    constexpr double e[] = {1.2146e-1, 1.0222e-2, 7.0238e-4, 4.5031e-5, 1.8502e-5, 2.8328e-6};
    return refinement_suite("t1", "exp_radial2 on [0,2]^2: error vs nodes, STP and MDI (Simpson, m=1)",
                            FamilyKind::exp_radial2, 2, kRefineNs2, e);
}

TableResult t2() {
    constexpr double e[] = {8.4038e-1, 1.2825e-2, 5.1928e-4, 2.9642e-5,
                            1.2014e-5, 1.8123e-6, 1.1213e-7};
    TableResult t = refinement_suite(
        "t2", "sin_phase2 on [0,2]^2: error vs nodes, STP and MDI (Simpson, m=1)",
        FamilyKind::sin_phase2, 2, kRefineNs3, e);
    t.notes.push_back("The recorded errors at N=321 (1.8123e-6) and N=641 (1.1213e-7) sit "
                      "0.03% and 0.5% away from an independent high-precision recomputation "
                      "(1.8129e-6, 1.1270e-7); both methods here agree with each other to ten "
                      "digits, so the baselines are kept as recorded and those rows report "
                      "honest mismatches.");
    return t;
}

TableResult t3() {
    constexpr double e[] = {1.8762e-1, 1.0222e-2, 7.0238e-4, 4.5031e-5,
                            1.8502e-5, 2.8328e-6, 2.6601e-7};
    TableResult t = refinement_suite(
        "t3", "exp_radial3 on [0,2]^3: error vs nodes, STP and MDI (Simpson, m=1)",
        FamilyKind::exp_radial3, 3, kRefineNs3, e);
    t.notes.push_back("Recorded rows N=41..321 coincide digit-for-digit with the 2-d suite (t1); "
                      "for this per-axis product integrand the 3-d error is 1.5x the 2-d error, "
                      "which the first and last recorded rows follow. The computed values are "
                      "reported unmodified, so the copied rows show as mismatches.");
    t.notes.push_back("The STP row at N=641 needs 641^3 > 1e8 summands and fails under the "
                      "default cap.");
    return t;
}

TableResult t4() {
    constexpr double e[] = {2.5789e-1, 3.0493e-1, 1.2800e-2, 4.9563e-4,
                            1.9345e-4, 2.8065e-5, 1.7128e-6};
    TableResult t = refinement_suite(
        "t4", "sin_phase3 on [0,2]^3: error vs nodes, STP and MDI (Simpson, m=1)",
        FamilyKind::sin_phase3, 3, kRefineNs3, e);
    t.notes.push_back("The STP row at N=641 needs 641^3 > 1e8 summands and fails under the "
                      "default cap.");
    return t;
}

TableResult t55() {
    constexpr int ds[] = {2, 4, 6, 8, 10, 11};
    constexpr double e[] = {1.5809e-6, 3.1618e-6, 4.7427e-6, 6.3237e-6, 7.9046e-6, 8.6951e-6};
    return dim_suite_vs_stp("t55", "gauss: error vs dimension at N=11 (Simpson, m=1)",
                            FamilyKind::gauss, 11, ds, e);
}

TableResult t5() {
    constexpr int ds[] = {2, 4, 6, 8, 9, 10};
    constexpr double e[] = {9.8542e-8, 1.9708e-7, 2.9564e-7, 3.9149e-7, 4.4344e-7, 4.9271e-7};
    TableResult t = dim_suite_vs_stp("t5", "gauss: error vs dimension at N=21 (Simpson, m=1)",
                                     FamilyKind::gauss, 21, ds, e);
    t.notes.push_back("Every recorded error in this suite is (d/2) times the d=2 value except "
                      "d=8, which breaks the pattern of its own column (4 x 9.8542e-8 = "
                      "3.9417e-7, the computed value, vs the recorded 3.9149e-7 -- the middle "
                      "digits look transposed). The baseline is kept as recorded.");
    return t;
}

TableResult t6() {
    constexpr int ds[] = {5, 10, 20, 30, 35, 40, 80, 100};
    constexpr double e[] = {2.6251e-5, 5.2504e-5, 1.0501e-4, 1.5752e-4,
                            1.8377e-4, 2.1003e-4, 4.2011e-4, 5.2516e-4};
    return dim_suite_vs_mc("t6", "prod_rational: MDI vs Monte Carlo across dimensions (N=11)",
                           FamilyKind::prod_rational, ds, e, 100000);
}

TableResult t7() {
    constexpr int ds[] = {5, 10, 20, 30, 35, 40, 80, 100};
    constexpr double e[] = {3.9523e-6, 7.9046e-6, 1.5809e-5, 2.3714e-5,
                            2.7666e-5, 3.1618e-5, 6.3238e-5, 7.9049e-5};
    return dim_suite_vs_mc("t7", "gauss: MDI vs Monte Carlo across dimensions (N=11)",
                           FamilyKind::gauss, ds, e, 100000);
}

// MDI dimension sweep plus one Monte Carlo row holding the total evaluation
// count of the d=5 grid (11^5 samples). Higher-dimension grids imply sample
// counts far beyond any practical budget, so those rows carry no MC run.
TableResult matched_nodes_suite(const char* id, const char* title, FamilyKind kind,
                                std::span<const int> ds, std::span<const double> expected) {
    TableResult t{id, title, {}, {}, {}};
    const TestFamily fam = TestFamily::named(kind);
    for (std::size_t i = 0; i < ds.size(); ++i)
        add_row(t, Method::mdi, fam, ds[i], tcfg(11), expected[i]);
    RunConfig mc = tcfg(11);
    mc.samples = 161051; // 11^5, the full d=5 grid
    add_row(t, Method::mc, fam, 5, mc, std::nullopt);
    t.notes.push_back("The Monte Carlo row matches the d=5 grid's 11^5 evaluations; matching "
                      "the d>=11 grids would need 11^d samples, far beyond any feasible budget.");
    return t;
}

TableResult t66() {
    constexpr int ds[] = {5, 11, 15, 30, 40, 50};
    constexpr double e[] = {2.6251e-5, 5.7754e-5, 7.8757e-5, 1.5752e-4, 2.1003e-4, 2.6254e-4};
    return matched_nodes_suite("t66", "prod_rational: MDI vs equal-budget Monte Carlo (N=11)",
                               FamilyKind::prod_rational, ds, e);
}

TableResult t77() {
    constexpr int ds[] = {5, 11, 15, 30, 40, 50};
    constexpr double e[] = {3.9523e-6, 8.6951e-6, 1.1856e-5, 2.3714e-5, 3.1618e-5, 3.9523e-5};
    return matched_nodes_suite("t77", "gauss: MDI vs equal-budget Monte Carlo (N=11)",
                               FamilyKind::gauss, ds, e);
}

constexpr int kHighDs[] = {10, 100, 200, 300, 400, 500, 600, 700, 800, 900, 1000};

TableResult t17() {
    constexpr double e[] = {4.2726e-5, 4.2734e-4, 8.5487e-4, 1.4386e-4, 1.7097e-3, 2.1371e-3,
                            2.8772e-3, 3.3566e-3, 3.5194e-3, 3.8467e-3, 4.2742e-3};
    TableResult t = high_dim_suite("t17", "alt_exp: error up to d=1000 at N=7 (Simpson, m=1)",
                                   FamilyKind::alt_exp, 7, kHighDs, e);
    t.notes.push_back("For this integrand the error compounds per axis, so it grows as "
                      "d*eps + d^2*eps^2/2 with eps ~ 4.27e-6; the computed column follows "
                      "that law to five digits at every d. Recorded rows drift from it: d=300 "
                      "looks like a dropped exponent digit (1.4386e-4 vs trend ~1.28e-3), "
                      "d=600..800 sit ~10% low, and d=500/900/1000 differ by 0.07..0.18%. "
                      "Baselines are kept as recorded.");
    return t;
}

TableResult t16() {
    constexpr double e[] = {4.0743e-4, 4.0818e-3, 8.1803e-3, 1.2295e-2, 1.6427e-2, 2.0576e-2,
                            2.4742e-2, 2.8925e-2, 3.3125e-2, 3.7342e-2, 4.1576e-2};
    return high_dim_suite("t16", "prod_rational: error up to d=1000 at N=7 (Simpson, m=1)",
                          FamilyKind::prod_rational, 7, kHighDs, e);
}

TableResult t12() {
    constexpr double e1[] = {5.8935e-3, 1.7576e-2, 2.9122e-2, 4.0532e-2, 5.1808e-2, 5.7396e-2};
    constexpr double e2[] = {7.9046e-6, 2.3714e-5, 3.9523e-5, 5.5333e-5, 7.1144e-5, 7.9049e-5};
    constexpr double e4[] = {2.9593e-3, 8.9042e-3, 1.4884e-2, 2.0899e-2, 2.6951e-2, 2.9990e-2};
    const RuleBlock blocks[] = {
        {RuleKind::trap, 11, kRuleDs, e1},
        {RuleKind::simpson, 11, kRuleDs, e2},
        {RuleKind::midpoint, 10, kRuleDs, e4},
    };
    TableResult t = rule_suite("t12", "gauss: quadrature-rule comparison (m=1)",
                               FamilyKind::gauss, blocks);
    t.notes.push_back("The recorded baseline has no two-point Gauss block for this family.");
    return t;
}

TableResult t100() {
    constexpr double e1[] = {8.3632e-3, 2.5300e-2, 4.2521e-2, 6.0032e-2, 7.7837e-2, 8.6851e-2};
    constexpr double e2[] = {5.5489e-6, 1.6646e-5, 2.7745e-5, 3.8843e-5, 4.9941e-5, 5.5491e-5};
    constexpr int g3ds[] = {10, 30, 50, 60};
    constexpr double e3[] = {2.8477e-5, 8.5428e-5, 1.4237e-4, 2.8775e-5};
    constexpr double e4[] = {4.1576e-3, 1.2421e-2, 2.0616e-2, 2.8743e-2, 3.6802e-2, 4.0807e-2};
    const RuleBlock blocks[] = {
        {RuleKind::trap, 11, kRuleDs, e1},
        {RuleKind::simpson, 11, kRuleDs, e2},
        {RuleKind::gauss2, 6, g3ds, e3},
        {RuleKind::midpoint, 10, kRuleDs, e4},
    };
    TableResult t = rule_suite("t100", "alt_exp: quadrature-rule comparison (m=1)",
                               FamilyKind::alt_exp, blocks);
    t.notes.push_back("The recorded Gauss error at d=60 (2.8775e-5) breaks the d-proportional "
                      "trend of its own block (d=50 is 1.4237e-4); the computed value is "
                      "reported unmodified.");
    return t;
}

TableResult t10() {
    constexpr double e1[] = {1.2809e-2, 3.7939e-2, 6.2429e-2, 8.6296e-2, 1.0955e-1, 1.2096e-1};
    constexpr double e2[] = {5.2504e-5, 1.5752e-4, 2.6254e-4, 3.6758e-4, 4.7263e-4, 5.2516e-4};
    constexpr double e3[] = {3.5014e-5, 1.0503e-4, 1.7505e-4, 2.4507e-4, 3.1508e-4, 3.5008e-4};
    constexpr double e4[] = {6.4658e-3, 1.9523e-2, 3.2750e-2, 4.6148e-2, 5.9720e-2, 6.6572e-2};
    const RuleBlock blocks[] = {
        {RuleKind::trap, 11, kRuleDs, e1},
        {RuleKind::simpson, 11, kRuleDs, e2},
        {RuleKind::gauss2, 10, kRuleDs, e3},
        {RuleKind::midpoint, 10, kRuleDs, e4},
    };
    return rule_suite("t10", "prod_rational: quadrature-rule comparison (m=1)",
                      FamilyKind::prod_rational, blocks);
}

TableResult t21() {
    constexpr double e[] = {5.2504e-5, 1.5752e-4, 2.6254e-4, 3.6758e-4, 4.7263e-4, 5.2516e-4};
    return step_suite("t21", "prod_rational: step-length comparison m=1,2,3 (Simpson, N=11)",
                      FamilyKind::prod_rational, kRuleDs, e);
}

TableResult t11() {
    constexpr double e[] = {7.9046e-6, 2.3714e-5, 3.9523e-5, 5.5333e-5, 7.1144e-5, 7.9049e-5};
    return step_suite("t11", "gauss: step-length comparison m=1,2,3 (Simpson, N=11)",
                      FamilyKind::gauss, kRuleDs, e);
}

TableResult t13() {
    constexpr double e5[] = {2.7744e-6, 1.7355e-7, 1.0849e-8, 6.7815e-10, 4.2384e-11, 2.6479e-12};
    constexpr double e10[] = {5.5489e-6, 3.4711e-7, 2.1699e-8, 1.3563e-9, 8.4768e-11, 5.2993e-12};
    TableResult t = node_sweep_suite("t13", "alt_exp: error vs N at d=5 and d=10 (Simpson, m=1)",
                                     FamilyKind::alt_exp, kSweepNs, e5, e10);
    t.notes.push_back("At N=321 the relative error is ~3e-12, within two decades of the "
                      "double-precision floor of the quadrature value itself; independent "
                      "implementations agree only to ~3 digits there, so those two rows may "
                      "report mismatches against the recorded baseline.");
    return t;
}

TableResult t14() {
    constexpr double e5[] = {4.4657e-5, 2.7810e-6, 1.7366e-7, 1.0851e-8, 6.7818e-10, 4.2383e-11};
    constexpr double e10[] = {8.9317e-5, 5.5621e-6, 3.4732e-7, 2.1703e-8, 1.3563e-9, 8.4768e-11};
    return node_sweep_suite("t14", "cos_sum: error vs N at d=5 and d=10 (Simpson, m=1)",
                            FamilyKind::cos_sum, kSweepNs, e5, e10);
}

TableResult t19() {
    constexpr double e5[] = {2.6251e-5, 1.6339e-6, 1.0200e-7, 6.3736e-9, 3.9832e-10, 2.4894e-11};
    constexpr double e10[] = {5.2504e-5, 3.2679e-6, 2.0401e-7, 1.2747e-8, 7.9664e-10, 4.9788e-11};
    return node_sweep_suite("t19", "prod_rational: error vs N at d=5 and d=10 (Simpson, m=1)",
                            FamilyKind::prod_rational, kSweepNs, e5, e10);
}

void add_fit(TableResult& t, std::string label, std::span<const TableRow> rows,
             std::size_t first, std::size_t count, bool x_is_dims, double expected_p,
             std::optional<double> expected_r2) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = first; i < first + count && i < rows.size(); ++i) {
        const RunReport& r = rows[i].report;
        if (r.status != "ok" || r.wall_seconds <= 0.0) continue;
        const double x = x_is_dims ? double(r.dims) : double(r.n_points.value_or(0));
        pts.emplace_back(x, r.wall_seconds);
    }
    TableFit tf;
    tf.label = std::move(label);
    tf.expected_exponent = expected_p;
    tf.expected_r_square = expected_r2;
    try {
        tf.fit = fit_power_law(pts);
    } catch (const Error& e) {
        t.notes.push_back("fit skipped for " + tf.label + ": " + e.what());
        return;
    }
    t.fits.push_back(std::move(tf));
}

TableResult t20() {
    TableResult t{"t20",
                  "wall time vs N at d=5 and d=10 (Simpson, m=1), power-law fits",
                  {},
                  {},
                  {}};
    struct Row {
        FamilyKind fam;
        int d;
        double q;
        double r2;
    };
    const Row fits[] = {
        {FamilyKind::alt_exp, 5, 2.0, 0.9973},       {FamilyKind::cos_sum, 5, 2.0, 0.9914},
        {FamilyKind::prod_rational, 5, 1.0, 0.9963}, {FamilyKind::alt_exp, 10, 2.0, 0.9998},
        {FamilyKind::cos_sum, 10, 2.0, 0.9997},      {FamilyKind::prod_rational, 10, 1.267, 0.9971},
    };
    for (const Row& f : fits) {
        const TestFamily fam = TestFamily::named(f.fam);
        const std::size_t first = t.rows.size();
        for (int n : kSweepNs) {
            RunConfig cfg = tcfg(n);
            cfg.timing_reps = 3;
            add_row(t, Method::mdi, fam, f.d, cfg, std::nullopt);
        }
        add_fit(t, family_name(fam) + " d=" + std::to_string(f.d), t.rows, first,
                std::size(kSweepNs), /*x_is_dims=*/false, f.q, f.r2);
    }
    t.notes.push_back("Baseline exponents and R-squares describe runtimes recorded with a "
                      "different implementation on different hardware; they are context, not "
                      "a pass/fail target. This engine's cost for separable integrands grows "
                      "roughly linearly in N per axis, so smaller exponents are expected.");
    return t;
}

TableResult t15() {
    TableResult t{"t15",
                  "wall time vs dimension, power-law fits across rules and step lengths",
                  {},
                  {},
                  {}};
    struct Row {
        FamilyKind fam;
        RuleKind rule;
        int m;
        int n; // total nodes
        double q;
        double r2;
    };
    const Row fits[] = {
        {FamilyKind::alt_exp, RuleKind::trap, 1, 11, 3.0, 0.9966},
        {FamilyKind::alt_exp, RuleKind::simpson, 1, 7, 3.0, 0.9961},
        {FamilyKind::alt_exp, RuleKind::simpson, 1, 11, 3.0, 0.9964},
        {FamilyKind::alt_exp, RuleKind::gauss2, 1, 4, 3.0, 0.9978},
        {FamilyKind::alt_exp, RuleKind::midpoint, 1, 10, 3.0, 0.9947},
        {FamilyKind::prod_rational, RuleKind::trap, 1, 11, 1.0, 0.9922},
        {FamilyKind::prod_rational, RuleKind::simpson, 1, 7, 1.358, 0.9991},
        {FamilyKind::prod_rational, RuleKind::simpson, 1, 11, 1.0, 0.9898},
        {FamilyKind::prod_rational, RuleKind::simpson, 2, 11, 1.0, 0.9937},
        {FamilyKind::prod_rational, RuleKind::simpson, 3, 11, 1.0, 0.9808},
        {FamilyKind::prod_rational, RuleKind::gauss2, 1, 10, 3.0, 0.9932},
        {FamilyKind::prod_rational, RuleKind::midpoint, 1, 10, 1.0, 0.9952},
        {FamilyKind::gauss, RuleKind::trap, 1, 11, 3.0, 0.9977},
        {FamilyKind::gauss, RuleKind::simpson, 1, 11, 3.0, 0.9995},
        {FamilyKind::gauss, RuleKind::simpson, 2, 11, 3.0, 0.9929},
        {FamilyKind::gauss, RuleKind::simpson, 3, 11, 3.0, 0.9974},
        {FamilyKind::gauss, RuleKind::midpoint, 1, 10, 3.0, 0.9903},
        {FamilyKind::cos_sum, RuleKind::simpson, 1, 11, 3.0, 0.9990},
        {FamilyKind::cos_sum, RuleKind::simpson, 1, 21, 3.0, 0.9966},
        {FamilyKind::cos_sum, RuleKind::gauss2, 1, 4, 3.0, 1.0000},
        {FamilyKind::alt_exp_sq, RuleKind::simpson, 1, 11, 3.0, 0.9968},
        {FamilyKind::alt_exp_sq, RuleKind::simpson, 1, 21, 3.0, 0.9994},
    };
    constexpr int ds[] = {50, 100, 150, 200, 250, 300};
    for (const Row& f : fits) {
        const TestFamily fam = TestFamily::named(f.fam);
        const std::size_t first = t.rows.size();
        for (int d : ds) {
            RunConfig cfg = tcfg(f.n, f.rule, f.m);
            cfg.timing_reps = 3;
            add_row(t, Method::mdi, fam, d, cfg, std::nullopt);
        }
        add_fit(t,
                family_name(fam) + " r=" + std::to_string(int(f.rule)) +
                    " m=" + std::to_string(f.m) + " N=" + std::to_string(f.n),
                t.rows, first, std::size(ds), /*x_is_dims=*/true, f.q, f.r2);
    }
    t.notes.push_back("Two-point Gauss rows whose recorded node count is odd run at the "
                      "nearest even count (paired nodes need even N).");
    t.notes.push_back("Baseline exponents and R-squares describe runtimes recorded with a "
                      "different implementation on different hardware; they are context, not "
                      "a pass/fail target. This engine binds one axis at O(N) for separable "
                      "integrands, so exponents near 1 are expected here.");
    return t;
}

struct TableEntry {
    const char* id;
    const char* title;
    TableResult (*build)();
};

const TableEntry kTables[] = {
    {"t1", "exp_radial2 on [0,2]^2: error vs nodes, STP and MDI (Simpson, m=1)", t1},
    {"t2", "sin_phase2 on [0,2]^2: error vs nodes, STP and MDI (Simpson, m=1)", t2},
    {"t3", "exp_radial3 on [0,2]^3: error vs nodes, STP and MDI (Simpson, m=1)", t3},
    {"t4", "sin_phase3 on [0,2]^3: error vs nodes, STP and MDI (Simpson, m=1)", t4},
    {"t55", "gauss: error vs dimension at N=11 (Simpson, m=1)", t55},
    {"t5", "gauss: error vs dimension at N=21 (Simpson, m=1)", t5},
    {"t6", "prod_rational: MDI vs Monte Carlo across dimensions (N=11)", t6},
    {"t7", "gauss: MDI vs Monte Carlo across dimensions (N=11)", t7},
    {"t66", "prod_rational: MDI vs equal-budget Monte Carlo (N=11)", t66},
    {"t77", "gauss: MDI vs equal-budget Monte Carlo (N=11)", t77},
    {"t17", "alt_exp: error up to d=1000 at N=7 (Simpson, m=1)", t17},
    {"t16", "prod_rational: error up to d=1000 at N=7 (Simpson, m=1)", t16},
    {"t12", "gauss: quadrature-rule comparison (m=1)", t12},
    {"t100", "alt_exp: quadrature-rule comparison (m=1)", t100},
    {"t10", "prod_rational: quadrature-rule comparison (m=1)", t10},
    {"t21", "prod_rational: step-length comparison m=1,2,3 (Simpson, N=11)", t21},
    {"t11", "gauss: step-length comparison m=1,2,3 (Simpson, N=11)", t11},
    {"t13", "alt_exp: error vs N at d=5 and d=10 (Simpson, m=1)", t13},
    {"t14", "cos_sum: error vs N at d=5 and d=10 (Simpson, m=1)", t14},
    {"t19", "prod_rational: error vs N at d=5 and d=10 (Simpson, m=1)", t19},
    {"t20", "wall time vs N at d=5 and d=10 (Simpson, m=1), power-law fits", t20},
    {"t15", "wall time vs dimension, power-law fits across rules and step lengths", t15},
};

void append_cell(std::string& out, const std::string& s) {
    out += ' ';
    out += s;
    out += " |";
}

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string opt_e(const std::optional<double>& v) { return v ? fmt("%.4e", *v) : std::string(); }

} // namespace

bool four_digit_match(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b)) return false;
    char fa[32], fb[32];
    std::snprintf(fa, sizeof fa, "%.3e", a);
    std::snprintf(fb, sizeof fb, "%.3e", b);
    if (std::strcmp(fa, fb) == 0) return true;
    // Values straddling a rounding boundary print differently while agreeing
    // far beyond four digits; accept anything within half a unit in the
    // fourth significant digit.
    const double mag = std::max(std::abs(a), std::abs(b));
    if (mag == 0.0) return true;
    const double unit = std::pow(10.0, std::floor(std::log10(mag)) - 3.0);
    return std::abs(a - b) <= 0.5 * unit;
}

std::vector<TableInfo> table_manifest() {
    std::vector<TableInfo> out;
    out.reserve(std::size(kTables));
    for (const TableEntry& e : kTables) out.push_back({e.id, e.title});
    return out;
}

TableResult run_table(const std::string& id) {
    for (const TableEntry& e : kTables)
        if (id == e.id) return e.build();
    throw UnknownTable("unknown table id: " + id + " (see `tables --list`)");
}

std::string render_table_markdown(const TableResult& t) {
    std::string out = "# " + t.id + ": " + t.title + "\n\n";
    if (!t.rows.empty()) {
        out += "| method | family | d | N | M | m | r | value | rel_error | stderr | "
               "expected | match | wall_s | status |\n";
        out += "|---|---|---|---|---|---|---|---|---|---|---|---|---|---|\n";
        for (const TableRow& row : t.rows) {
            const RunReport& r = row.report;
            std::string line = "|";
            append_cell(line, r.method);
            append_cell(line, family_name(r.family));
            append_cell(line, std::to_string(r.dims));
            append_cell(line, r.n_points ? std::to_string(*r.n_points) : std::string());
            append_cell(line, r.samples ? std::to_string(*r.samples) : std::string());
            append_cell(line, r.step ? std::to_string(*r.step) : std::string());
            append_cell(line, r.rule ? std::string(rule_name(*r.rule)) : std::string());
            append_cell(line, r.value ? fmt("%.10g", *r.value) : std::string());
            append_cell(line, opt_e(r.rel_error));
            append_cell(line, opt_e(r.stderr_est));
            append_cell(line, opt_e(row.expected));
            append_cell(line, row.checked ? (row.match ? "yes" : "NO") : std::string());
            append_cell(line, fmt("%.6f", r.wall_seconds));
            append_cell(line, r.status + (r.error.empty() ? "" : ": " + r.error));
            out += line + "\n";
        }
        out += "\n";
    }
    if (!t.fits.empty()) {
        out += "| sweep | c | p | r_square | baseline p | baseline r_square |\n";
        out += "|---|---|---|---|---|---|\n";
        for (const TableFit& f : t.fits) {
            std::string line = "|";
            append_cell(line, f.label);
            append_cell(line, fmt("%.4e", f.fit.coefficient));
            append_cell(line, fmt("%.4f", f.fit.exponent));
            append_cell(line, fmt("%.4f", f.fit.r_square));
            append_cell(line, fmt("%.4g", f.expected_exponent));
            append_cell(line, f.expected_r_square ? fmt("%.4f", *f.expected_r_square)
                                                  : std::string());
            out += line + "\n";
        }
        out += "\n";
    }
    for (const std::string& n : t.notes) out += "- " + n + "\n";
    return out;
}

std::string table_reports_csv(const TableResult& t) {
    std::vector<RunReport> reports;
    reports.reserve(t.rows.size());
    for (const TableRow& row : t.rows) reports.push_back(row.report);
    return emit_table(reports, TableFormat::csv);
}

} // namespace mdi
