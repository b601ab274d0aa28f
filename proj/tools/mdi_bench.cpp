// Benchmark harness for the dimension-iteration integrator.
//
// Subcommands:
//   integrate     one run of mdi / stp / mc on a family or a custom integrand
//   sweep         repeat a run along one axis (d, N, or M) and tabulate
//   fit           power-law fit t = c * x^p over a saved sweep CSV
//   tables        rerun a registered benchmark suite against recorded baselines
//   oracle-check  exhaustive small-case equivalence of the iteration vs the
//                 direct tensor-product sum
//
// All options may also come from a flat `key = value` config file passed via
// --config; explicit command-line flags win over config values.

#include "mdi/bench.hpp"
#include "mdi/engine.hpp"
#include "mdi/errors.hpp"
#include "mdi/tables.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Options {
    std::string method = "mdi";
    std::string family;
    std::string expr;
    int d = 2;
    int n = 11;
    int m = 1;
    std::string rule = "simpson";
    std::vector<std::string> domain;
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 1;
    std::uint64_t budget = 100000;
    std::string residual = "iterate";
    std::string format = "csv";
    std::string out;
    std::string gauss_n = "points";
    bool parallel_sweep = false;
};

mdi::TestFamily resolve_family(const Options& opt) {
    if (!opt.expr.empty()) return mdi::TestFamily::custom(opt.expr);
    if (opt.family.empty())
        throw mdi::Error("one of --family or --expr is required");
    return mdi::family_from_name(opt.family);
}

std::optional<mdi::Box> resolve_box(const Options& opt) {
    if (opt.domain.empty()) return std::nullopt;
    std::vector<mdi::Interval> axes;
    axes.reserve(opt.domain.size());
    for (const std::string& s : opt.domain) {
        double a = 0.0, b = 0.0;
        if (std::sscanf(s.c_str(), "%lf , %lf", &a, &b) != 2)
            throw mdi::Error("bad --domain value '" + s + "', expected a,b");
        axes.push_back({a, b});
    }
    if (axes.size() == 1 && opt.d > 1) axes.assign(static_cast<std::size_t>(opt.d), axes[0]);
    if (static_cast<int>(axes.size()) != opt.d)
        throw mdi::DimensionMismatch("--domain given for " + std::to_string(axes.size()) +
                                     " axes but --d is " + std::to_string(opt.d));
    return mdi::Box(std::move(axes));
}

// The N flag counts nodes by default; with --gauss-n panels a two-point
// Gauss run reads N as the panel count instead (2N nodes).
int effective_nodes(const Options& opt, std::uint64_t n) {
    const bool panels = opt.gauss_n == "panels" && mdi::rule_from_name(opt.rule) == mdi::RuleKind::gauss2;
    return static_cast<int>(panels ? 2 * n : n);
}

mdi::RunConfig make_config(const Options& opt) {
    mdi::RunConfig cfg;
    cfg.n_points = effective_nodes(opt, static_cast<std::uint64_t>(opt.n));
    cfg.step = opt.m;
    cfg.rule = mdi::rule_from_name(opt.rule);
    cfg.residual = opt.residual == "direct" ? mdi::ResidualMode::direct
                                            : mdi::ResidualMode::iterate;
    cfg.max_monomials = opt.budget;
    cfg.samples = opt.samples;
    cfg.seed = opt.seed;
    cfg.box = resolve_box(opt);
    return cfg;
}

void write_out(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw mdi::Error("cannot open output file: " + path);
    f << text;
}

mdi::TableFormat format_of(const Options& opt) {
    if (opt.format == "csv") return mdi::TableFormat::csv;
    if (opt.format == "markdown") return mdi::TableFormat::markdown;
    throw mdi::Error("bad --format '" + opt.format + "', expected csv or markdown");
}

int cmd_integrate(const Options& opt) {
    const mdi::TestFamily fam = resolve_family(opt);
    const mdi::RunReport report = mdi::run(mdi::method_from_name(opt.method), fam, opt.d,
                                           make_config(opt));
    write_out(mdi::emit_table({&report, 1}, format_of(opt)), opt.out);
    if (report.status != "ok") {
        std::fprintf(stderr, "run failed: %s\n", report.error.c_str());
        return 1;
    }
    return 0;
}

int cmd_sweep(const Options& opt, const std::string& axis,
              std::vector<std::uint64_t> values) {
    mdi::SweepAxis ax;
    if (axis == "d")
        ax = mdi::SweepAxis::dims;
    else if (axis == "N")
        ax = mdi::SweepAxis::n_points;
    else
        ax = mdi::SweepAxis::samples;
    if (ax == mdi::SweepAxis::n_points)
        for (std::uint64_t& v : values) v = static_cast<std::uint64_t>(effective_nodes(opt, v));
    const mdi::TestFamily fam = resolve_family(opt);
    const std::vector<mdi::RunReport> rows =
        mdi::sweep(mdi::method_from_name(opt.method), fam, ax, values, opt.d, make_config(opt),
                   opt.parallel_sweep);
    write_out(mdi::emit_table(rows, format_of(opt)), opt.out);
    return 0; // per-row failures are recorded in the table, not fatal
}

int cmd_fit(const std::string& in_path, const std::string& x_axis) {
    std::ifstream f(in_path, std::ios::binary);
    if (!f) throw mdi::Error("cannot open input file: " + in_path);
    std::ostringstream buf;
    buf << f.rdbuf();
    const std::vector<mdi::RunReport> rows = mdi::parse_table(buf.str());
    std::vector<std::pair<double, double>> pts;
    for (const mdi::RunReport& r : rows) {
        if (r.status != "ok") continue;
        double x = 0.0;
        if (x_axis == "d")
            x = static_cast<double>(r.dims);
        else if (x_axis == "N")
            x = static_cast<double>(r.n_points.value_or(0));
        else
            x = static_cast<double>(r.samples.value_or(0));
        pts.emplace_back(x, r.wall_seconds);
    }
    const mdi::FitResult fit = mdi::fit_power_law(pts);
    std::printf("t = %.6e * %s^%.4f   (r_square = %.6f, %zu points)\n", fit.coefficient,
                x_axis.c_str(), fit.exponent, fit.r_square, pts.size());
    return 0;
}

int cmd_tables(const Options& opt, const std::string& id, bool list) {
    if (list) {
        for (const mdi::TableInfo& info : mdi::table_manifest())
            std::printf("%-5s %s\n", info.id.c_str(), info.title.c_str());
        return 0;
    }
    if (id.empty()) throw mdi::Error("tables needs a suite id or --list");
    const mdi::TableResult t = mdi::run_table(id);
    write_out(format_of(opt) == mdi::TableFormat::csv ? mdi::table_reports_csv(t)
                                                      : mdi::render_table_markdown(t),
              opt.out);
    std::size_t checked = 0, matched = 0;
    for (const mdi::TableRow& row : t.rows) {
        checked += row.checked;
        matched += row.checked && row.match;
    }
    std::fprintf(stderr, "%s: %zu rows, %zu baseline-checked, %zu matched\n", t.id.c_str(),
                 t.rows.size(), checked, matched);
    return 0;
}

int cmd_oracle_check(double tol, int d_max) {
    const mdi::FamilyKind fams[] = {
        mdi::FamilyKind::alt_exp, mdi::FamilyKind::prod_rational, mdi::FamilyKind::gauss,
        mdi::FamilyKind::cos_sum, mdi::FamilyKind::alt_exp_sq,
    };
    struct RuleNs {
        mdi::RuleKind rule;
        std::vector<int> ns;
    };
    const RuleNs rule_ns[] = {
        {mdi::RuleKind::trap, {4, 5, 8, 9}},
        {mdi::RuleKind::simpson, {5, 9}},
        {mdi::RuleKind::gauss2, {4, 8}},
        {mdi::RuleKind::midpoint, {4, 5, 8, 9}},
    };
    std::size_t combos = 0, failures = 0;
    for (mdi::FamilyKind fk : fams) {
        const mdi::TestFamily fam = mdi::TestFamily::named(fk);
        for (int d = 2; d <= d_max; ++d) {
            const mdi::FamilyInstance inst = mdi::expand_family(fam, d);
            for (const RuleNs& rn : rule_ns) {
                for (int n : rn.ns) {
                    for (int m = 1; m <= 3; ++m) {
                        mdi::MdiConfig cfg;
                        cfg.n_points = n;
                        cfg.step = m;
                        cfg.rule = rn.rule;
                        ++combos;
                        const mdi::EquivalenceResult eq =
                            mdi::stp_equivalence_check(inst.integrand, inst.box, cfg, tol);
                        if (!eq.equal) {
                            ++failures;
                            std::printf("MISMATCH %s d=%d N=%d m=%d r=%s rel_gap=%.3e\n",
                                        mdi::family_name(fam).c_str(), d, n, m,
                                        mdi::rule_name(rn.rule), eq.rel_gap);
                        }
                    }
                }
            }
        }
    }
    std::printf("oracle-check: %zu combinations, %zu mismatches (tol %.1e)\n", combos, failures,
                tol);
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Benchmark harness for dimension-iteration tensor-product integration"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Flat key = value file; command-line flags take precedence");
    app.fallthrough();

    Options opt;
    app.add_option("--method", opt.method, "mdi | stp | mc")->capture_default_str();
    app.add_option("--family", opt.family,
                   "Named integrand family (see README); mutually exclusive with --expr");
    app.add_option("--expr", opt.expr, "Custom integrand in the expression DSL");
    app.add_option("--d", opt.d, "Dimension")->capture_default_str();
    app.add_option("--N", opt.n, "Nodes per axis")->capture_default_str();
    app.add_option("--m", opt.m, "Dimensions bound per iteration (1..3)")->capture_default_str();
    app.add_option("--r", opt.rule, "trap | simpson | gauss2 | midpoint (or 1..4)")
        ->capture_default_str();
    app.add_option("--domain", opt.domain,
                   "Axis interval a,b; repeat per axis or give once for a cube");
    app.add_option("--samples", opt.samples, "Monte Carlo sample count")->capture_default_str();
    app.add_option("--seed", opt.seed, "Monte Carlo seed")->capture_default_str();
    app.add_option("--budget", opt.budget, "Max live monomials before SizeBudgetExceeded")
        ->capture_default_str();
    app.add_option("--residual", opt.residual, "iterate | direct (tail treatment at k <= m)")
        ->check(CLI::IsMember({"iterate", "direct"}))
        ->capture_default_str();
    app.add_option("--format", opt.format, "csv | markdown")->capture_default_str();
    app.add_option("--out", opt.out, "Write the table to a file instead of stdout");
    app.add_option("--gauss-n", opt.gauss_n, "Interpret --N for gauss2 as node or panel count")
        ->check(CLI::IsMember({"points", "panels"}))
        ->capture_default_str();
    app.add_flag("--parallel-sweep", opt.parallel_sweep,
                 "Run sweep rows concurrently (timings flagged as contended)");

    CLI::App* integrate = app.add_subcommand("integrate", "Run one method once and tabulate");
    integrate->fallthrough();

    CLI::App* sweep = app.add_subcommand("sweep", "Run along one axis and tabulate");
    sweep->fallthrough();
    std::string axis = "d";
    std::vector<std::uint64_t> values;
    sweep->add_option("--axis", axis, "d | N | M")
        ->check(CLI::IsMember({"d", "N", "M"}))
        ->capture_default_str();
    sweep->add_option("--values", values, "Swept values (comma separated or repeated)")
        ->required()
        ->delimiter(',');

    CLI::App* fit = app.add_subcommand("fit", "Fit t = c * x^p over a sweep CSV");
    fit->fallthrough();
    std::string fit_in;
    std::string fit_x = "d";
    fit->add_option("--in", fit_in, "Sweep CSV produced by this tool")->required();
    fit->add_option("--x", fit_x, "Regressor column: d | N | M")
        ->check(CLI::IsMember({"d", "N", "M"}))
        ->capture_default_str();

    CLI::App* tables = app.add_subcommand("tables", "Rerun a registered suite (see --list)");
    tables->fallthrough();
    std::string table_id;
    bool table_list = false;
    tables->add_option("id", table_id, "Suite id, e.g. t1");
    tables->add_flag("--list", table_list, "List all registered suites");

    CLI::App* oracle = app.add_subcommand(
        "oracle-check", "Small-case equivalence sweep: dimension iteration vs direct sum");
    oracle->fallthrough();
    double tol = 1e-12;
    int d_max = 6;
    oracle->add_option("--tol", tol, "Relative agreement tolerance")->capture_default_str();
    oracle->add_option("--dmax", d_max, "Largest dimension checked (from 2)")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (integrate->parsed()) return cmd_integrate(opt);
        if (sweep->parsed()) return cmd_sweep(opt, axis, std::move(values));
        if (fit->parsed()) return cmd_fit(fit_in, fit_x);
        if (tables->parsed()) return cmd_tables(opt, table_id, table_list);
        if (oracle->parsed()) return cmd_oracle_check(tol, d_max);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
