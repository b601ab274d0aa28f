#pragma once

#include "mdi/baselines.hpp"
#include "mdi/engine.hpp"
#include "mdi/families.hpp"
#include "mdi/quad.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mdi {

enum class Method : std::uint8_t { mdi, stp, mc };

const char* method_name(Method m);
Method method_from_name(const std::string& name);

// Shared knobs for a benchmark run; fields irrelevant to a method are ignored
// (samples/seed are Monte Carlo only, step/residual are reduction only).
struct RunConfig {
    int n_points = 11;
    int step = 1;
    RuleKind rule = RuleKind::simpson;
    ResidualMode residual = ResidualMode::iterate;
    std::size_t max_monomials = 100000;
    std::size_t max_nodes_per_monomial = 10000;
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 1;
    std::uint64_t stp_cap = 100000000ull;
    std::optional<Box> box; // overrides the family's default box
    int timing_reps = 3;    // wall_seconds is the median of this many runs
};

struct RunReport {
    std::string method;
    TestFamily family;
    int dims = 0;
    std::optional<int> n_points;
    std::optional<std::uint64_t> samples;
    std::optional<int> step;
    std::optional<RuleKind> rule;
    std::optional<double> value;
    std::optional<double> ref;
    std::optional<double> rel_error;
    std::optional<double> stderr_est; // Monte Carlo only; not a CSV column
    double wall_seconds = 0.0;
    std::optional<std::uint64_t> peak_monomials;
    std::optional<std::uint64_t> eval_count;
    std::optional<std::uint64_t> seed;
    std::string status = "ok"; // ok | contended | failed
    std::string error;         // failure detail; not a CSV column
};

// Runs one method on one family instance. Numeric failures (size budget,
// summand cap, non-finite values) and configuration errors are captured as
// status = "failed" with the message in `error`; they do not throw.
RunReport run(Method method, const TestFamily& family, int d, const RunConfig& cfg);

enum class SweepAxis : std::uint8_t { dims, n_points, samples };

// One run per value of the swept quantity; `dims` fixes the dimension for
// N/M sweeps. Failed rows are kept and the sweep continues. With parallel
// set, rows run concurrently and successful rows are marked "contended"
// because their timings share the machine.
std::vector<RunReport> sweep(Method method, const TestFamily& family, SweepAxis axis,
                             std::span<const std::uint64_t> values, int dims,
                             const RunConfig& cfg, bool parallel = false);

struct FitResult {
    double coefficient;
    double exponent;
    double r_square; // computed on the original scale, not the log scale
};

// Least-squares fit of t = c * x^p on log-transformed data. Requires at
// least 3 points with distinct positive x and positive t (DegenerateData).
FitResult fit_power_law(std::span<const std::pair<double, double>> points);

enum class TableFormat : std::uint8_t { csv, markdown };

// Fixed CSV schema:
//   method,family,d,N,M,m,r,value,ref,rel_error,wall_seconds,
//   peak_monomials,eval_count,seed,status
// Doubles use shortest round-trip formatting, so parse_table(emit_table(x))
// reproduces every numeric field bit for bit.
std::string emit_table(std::span<const RunReport> rows, TableFormat format);
std::vector<RunReport> parse_table(const std::string& csv);

} // namespace mdi
