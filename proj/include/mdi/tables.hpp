#pragma once

#include "mdi/bench.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mdi {

// Registry of canned benchmark suites with recorded baseline errors.
//
// Each suite reruns a fixed configuration (family, dimensions, rule, step,
// node counts) and compares the computed relative errors against recorded
// baseline values. Deterministic methods must agree with the baseline to
// four significant digits; Monte Carlo rows are stochastic and report their
// own standard error instead of a match flag. Wall-clock fits carry the
// baseline exponents for context only, since absolute timings are hardware-
// and implementation-specific.

struct TableRow {
    RunReport report;
    std::optional<double> expected; // recorded baseline rel_error
    bool checked = false;           // a baseline comparison applies to this row
    bool match = false;             // computed rel_error agrees to 4 significant digits
};

struct TableFit {
    std::string label; // e.g. "alt_exp r=2 m=1 N=11"
    FitResult fit;
    double expected_exponent = 0.0;
    std::optional<double> expected_r_square;
};

struct TableResult {
    std::string id;
    std::string title;
    std::vector<TableRow> rows;
    std::vector<TableFit> fits;
    std::vector<std::string> notes;
};

struct TableInfo {
    std::string id;
    std::string title;
};

// All registered suite ids with one-line titles, in canonical order.
std::vector<TableInfo> table_manifest();

// Runs one suite end to end. Throws UnknownTable for an unregistered id.
// Rows that fail for an expected reason (summand caps, infeasible sample
// counts) are recorded with status "failed" rather than aborting the suite.
TableResult run_table(const std::string& id);

// True when both values print identically under %.3e (four significant
// digits), the comparison used for all deterministic baseline checks.
bool four_digit_match(double a, double b);

// Human-readable rendering: a row table, optional fit table, and notes.
std::string render_table_markdown(const TableResult& t);

// The raw run reports of a suite in the fixed CSV schema (baseline columns
// are a markdown-only decoration; the CSV schema is unchanged).
std::string table_reports_csv(const TableResult& t);

} // namespace mdi
