#include "mdi/bench.hpp"

#include "mdi/errors.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <sstream>

namespace mdi {

const char* method_name(Method m) {
    switch (m) {
    case Method::mdi:
        return "mdi";
    case Method::stp:
        return "stp";
    case Method::mc:
        return "mc";
    }
    return "?";
}

Method method_from_name(const std::string& name) {
    if (name == "mdi") return Method::mdi;
    if (name == "stp") return Method::stp;
    if (name == "mc") return Method::mc;
    throw Error("unknown method '" + name + "'");
}

namespace {

double median3(double a, double b, double c) {
    return std::max(std::min(a, b), std::min(std::max(a, b), c));
}

} // namespace

RunReport run(Method method, const TestFamily& family, int d, const RunConfig& cfg) {
    RunReport rep;
    rep.method = method_name(method);
    rep.family = family;
    rep.dims = d;
    try {
        FamilyInstance inst = expand_family(family, d);
        const Box& box = cfg.box ? *cfg.box : inst.box;

        using clock = std::chrono::steady_clock;
        int reps = std::max(1, cfg.timing_reps);
        std::vector<double> times;
        times.reserve(static_cast<std::size_t>(reps));

        double value = 0.0;
        switch (method) {
        case Method::mdi: {
            rep.n_points = cfg.n_points;
            rep.step = cfg.step;
            rep.rule = cfg.rule;
            MdiConfig mc{cfg.n_points,    cfg.step,
                         cfg.rule,        cfg.max_monomials,
                         cfg.max_nodes_per_monomial, cfg.residual};
            MdiResult res{};
            for (int i = 0; i < reps; ++i) {
                auto t0 = clock::now();
                res = mdi_integrate(inst.integrand, box, mc);
                times.push_back(std::chrono::duration<double>(clock::now() - t0).count());
            }
            value = res.value;
            rep.peak_monomials = res.trace.peak_monomials;
            rep.eval_count = res.trace.evals;
            break;
        }
        case Method::stp: {
            rep.n_points = cfg.n_points;
            rep.rule = cfg.rule;
            for (int i = 0; i < reps; ++i) {
                auto t0 = clock::now();
                value = stp_integrate(inst.integrand, box, cfg.n_points, cfg.rule, cfg.stp_cap);
                times.push_back(std::chrono::duration<double>(clock::now() - t0).count());
            }
            break;
        }
        case Method::mc: {
            rep.samples = cfg.samples;
            rep.seed = cfg.seed;
            McResult res{};
            for (int i = 0; i < reps; ++i) {
                auto t0 = clock::now();
                res = mc_integrate(inst.integrand, box, McConfig{cfg.samples, cfg.seed});
                times.push_back(std::chrono::duration<double>(clock::now() - t0).count());
            }
            value = res.estimate;
            rep.stderr_est = res.stderr_est;
            break;
        }
        }
        rep.value = value;
        rep.wall_seconds = times.size() >= 3 ? median3(times[0], times[1], times[2])
                                             : *std::min_element(times.begin(), times.end());
        try {
            Reference r = reference_integral(family, d, box);
            rep.ref = r.value;
            rep.rel_error = relative_error(value, r.value);
        } catch (const UnknownFamily&) {
            // custom integrands carry no reference
        }
    } catch (const Error& e) {
        rep.status = "failed";
        rep.error = e.what();
    }
    return rep;
}

std::vector<RunReport> sweep(Method method, const TestFamily& family, SweepAxis axis,
                             std::span<const std::uint64_t> values, int dims,
                             const RunConfig& cfg, bool parallel) {
    auto one = [&](std::uint64_t v) {
        RunConfig c = cfg;
        int d = dims;
        switch (axis) {
        case SweepAxis::dims:
            d = static_cast<int>(v);
            break;
        case SweepAxis::n_points:
            c.n_points = static_cast<int>(v);
            break;
        case SweepAxis::samples:
            c.samples = v;
            break;
        }
        return run(method, family, d, c);
    };
    std::vector<RunReport> rows;
    rows.reserve(values.size());
    if (parallel && values.size() > 1) {
        std::vector<std::future<RunReport>> futs;
        futs.reserve(values.size());
        for (std::uint64_t v : values)
            futs.push_back(std::async(std::launch::async, one, v));
        for (auto& f : futs) {
            RunReport r = f.get();
            if (r.status == "ok") r.status = "contended"; // timings shared the machine
            rows.push_back(std::move(r));
        }
    } else {
        for (std::uint64_t v : values) rows.push_back(one(v));
    }
    return rows;
}

FitResult fit_power_law(std::span<const std::pair<double, double>> points) {
    if (points.size() < 3) throw DegenerateData("power-law fit needs at least 3 points");
    std::vector<double> lx, ly;
    for (auto [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0))
            throw DegenerateData("power-law fit needs positive x and t");
        lx.push_back(std::log(x));
        ly.push_back(std::log(y));
    }
    std::vector<double> sorted(lx);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw DegenerateData("power-law fit needs distinct x values");

    double n = static_cast<double>(points.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    double p = sxy / sxx;
    double c = std::exp(my - p * mx);

    double ybar = 0.0;
    for (auto [x, y] : points) ybar += y;
    ybar /= n;
    double ss_res = 0.0, ss_tot = 0.0;
    for (auto [x, y] : points) {
        double yhat = c * std::pow(x, p);
        ss_res += (y - yhat) * (y - yhat);
        ss_tot += (y - ybar) * (y - ybar);
    }
    double r2 = ss_tot == 0.0 ? (ss_res == 0.0 ? 1.0 : 0.0) : 1.0 - ss_res / ss_tot;
    return FitResult{c, p, r2};
}

namespace {

constexpr const char* kHeader =
    "method,family,d,N,M,m,r,value,ref,rel_error,wall_seconds,peak_monomials,eval_count,seed,status";

void append_double(std::string& out, double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, p);
}

void append_opt_double(std::string& out, const std::optional<double>& v) {
    if (v) append_double(out, *v);
}

template <typename T>
void append_opt_int(std::string& out, const std::optional<T>& v) {
    if (v) out.append(std::to_string(*v));
}

std::string csv_row(const RunReport& r) {
    std::string out;
    out.append(r.method);
    out.push_back(',');
    out.append(family_name(r.family));
    out.push_back(',');
    out.append(std::to_string(r.dims));
    out.push_back(',');
    append_opt_int(out, r.n_points);
    out.push_back(',');
    append_opt_int(out, r.samples);
    out.push_back(',');
    append_opt_int(out, r.step);
    out.push_back(',');
    if (r.rule) out.append(rule_name(*r.rule));
    out.push_back(',');
    append_opt_double(out, r.value);
    out.push_back(',');
    append_opt_double(out, r.ref);
    out.push_back(',');
    append_opt_double(out, r.rel_error);
    out.push_back(',');
    append_double(out, r.wall_seconds);
    out.push_back(',');
    append_opt_int(out, r.peak_monomials);
    out.push_back(',');
    append_opt_int(out, r.eval_count);
    out.push_back(',');
    append_opt_int(out, r.seed);
    out.push_back(',');
    out.append(r.status);
    return out;
}

std::string markdown_double(const std::optional<double>& v, const char* fmt) {
    if (!v) return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, *v);
    return buf;
}

} // namespace

std::string emit_table(std::span<const RunReport> rows, TableFormat format) {
    std::string out;
    if (format == TableFormat::csv) {
        out.append(kHeader);
        out.push_back('\n');
        for (const RunReport& r : rows) {
            out.append(csv_row(r));
            out.push_back('\n');
        }
        return out;
    }
    out.append("| method | family | d | N | M | m | r | value | ref | rel_error | "
               "wall_seconds | peak_monomials | eval_count | seed | status |\n");
    out.append("|---|---|---|---|---|---|---|---|---|---|---|---|---|---|---|\n");
    for (const RunReport& r : rows) {
        out.push_back('|');
        auto cell = [&out](const std::string& s) {
            out.push_back(' ');
            out.append(s);
            out.append(" |");
        };
        cell(r.method);
        cell(family_name(r.family));
        cell(std::to_string(r.dims));
        cell(r.n_points ? std::to_string(*r.n_points) : "");
        cell(r.samples ? std::to_string(*r.samples) : "");
        cell(r.step ? std::to_string(*r.step) : "");
        cell(r.rule ? rule_name(*r.rule) : "");
        cell(markdown_double(r.value, "%.10g"));
        cell(markdown_double(r.ref, "%.10g"));
        cell(markdown_double(r.rel_error, "%.4e"));
        cell(markdown_double(r.wall_seconds, "%.3e"));
        cell(r.peak_monomials ? std::to_string(*r.peak_monomials) : "");
        cell(r.eval_count ? std::to_string(*r.eval_count) : "");
        cell(r.seed ? std::to_string(*r.seed) : "");
        cell(r.status);
        out.push_back('\n');
    }
    return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

double parse_double_field(const std::string& s) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw Error("malformed numeric field '" + s + "'");
    return v;
}

template <typename T>
T parse_int_field(const std::string& s) {
    T v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw Error("malformed integer field '" + s + "'");
    return v;
}

} // namespace

std::vector<RunReport> parse_table(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) || line != kHeader)
        throw Error("missing or unexpected CSV header");
    std::vector<RunReport> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        // a custom family's expression may not contain commas (the DSL has
        // none), so a plain split is lossless
        auto f = split_csv_line(line);
        if (f.size() != 15) throw Error("expected 15 CSV fields, got " + std::to_string(f.size()));
        RunReport r;
        r.method = f[0];
        r.family = family_from_name(f[1]);
        r.dims = parse_int_field<int>(f[2]);
        if (!f[3].empty()) r.n_points = parse_int_field<int>(f[3]);
        if (!f[4].empty()) r.samples = parse_int_field<std::uint64_t>(f[4]);
        if (!f[5].empty()) r.step = parse_int_field<int>(f[5]);
        if (!f[6].empty()) r.rule = rule_from_name(f[6]);
        if (!f[7].empty()) r.value = parse_double_field(f[7]);
        if (!f[8].empty()) r.ref = parse_double_field(f[8]);
        if (!f[9].empty()) r.rel_error = parse_double_field(f[9]);
        r.wall_seconds = parse_double_field(f[10]);
        if (!f[11].empty()) r.peak_monomials = parse_int_field<std::uint64_t>(f[11]);
        if (!f[12].empty()) r.eval_count = parse_int_field<std::uint64_t>(f[12]);
        if (!f[13].empty()) r.seed = parse_int_field<std::uint64_t>(f[13]);
        r.status = f[14];
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace mdi
