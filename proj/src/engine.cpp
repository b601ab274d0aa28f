#include "mdi/engine.hpp"

#include "mdi/baselines.hpp"
#include "mdi/errors.hpp"
#include "mdi/linear_form.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <unordered_map>

namespace mdi {
namespace {

// ---- monomials as shared factor sequences ----------------------------------
//
// A monomial is a product of non-constant factors sorted by (lowest variable,
// base, exponent). Binding an axis consumes the leading factors only, so the
// reduced monomial is a suffix of the original sequence: suffixes share the
// factor vector and precomputed suffix hashes / node counts, making the common
// product-form step O(1) per monomial instead of O(d).

constexpr std::uint64_t kEmptyHash = 0x517cc1b727220a95ULL;

const Expr& base_of(const Expr& f) { return f.kind() == ExprKind::Power ? f.child() : f; }
std::int64_t expo_of(const Expr& f) { return f.kind() == ExprKind::Power ? f.exponent() : 1; }

int factor_cmp(const Expr& a, const Expr& b) {
    if (a.min_var() != b.min_var()) return a.min_var() < b.min_var() ? -1 : 1;
    int c = Expr::compare(base_of(a), base_of(b));
    if (c != 0) return c;
    std::int64_t ea = expo_of(a), eb = expo_of(b);
    return ea == eb ? 0 : (ea < eb ? -1 : 1);
}

struct SeqData {
    std::vector<Expr> fs;
    std::vector<std::uint64_t> shash;  // shash[i] = hash of fs[i..]
    std::vector<std::uint64_t> snodes; // snodes[i] = total tree size of fs[i..]

    explicit SeqData(std::vector<Expr> f) : fs(std::move(f)) {
        std::size_t n = fs.size();
        shash.resize(n + 1);
        snodes.resize(n + 1);
        shash[n] = kEmptyHash;
        snodes[n] = 0;
        for (std::size_t i = n; i-- > 0;) {
            shash[i] = hash_combine(fs[i].hash(), shash[i + 1]);
            snodes[i] = snodes[i + 1] + fs[i].tree_size();
        }
    }
};

class Mono {
public:
    Mono() = default; // the monomial 1
    explicit Mono(std::vector<Expr> sorted_factors) {
        if (!sorted_factors.empty()) d_ = std::make_shared<const SeqData>(std::move(sorted_factors));
    }

    std::size_t size() const { return d_ ? d_->fs.size() - off_ : 0; }
    std::span<const Expr> factors() const {
        return d_ ? std::span<const Expr>(d_->fs).subspan(off_) : std::span<const Expr>();
    }
    std::uint64_t hash() const { return d_ ? d_->shash[off_] : kEmptyHash; }
    std::uint64_t nodes() const { return d_ ? d_->snodes[off_] : 0; }

    Mono drop_front(std::size_t k) const {
        Mono m;
        if (d_ && off_ + k < d_->fs.size()) {
            m.d_ = d_;
            m.off_ = off_ + k;
        }
        return m;
    }

    bool same_rep(const Mono& o) const { return d_ == o.d_ && off_ == o.off_; }

    friend bool operator==(const Mono& a, const Mono& b) {
        if (a.same_rep(b)) return true;
        if (a.hash() != b.hash() || a.size() != b.size() || a.nodes() != b.nodes()) return false;
        auto fa = a.factors(), fb = b.factors();
        for (std::size_t i = 0; i < fa.size(); ++i)
            if (!(fa[i] == fb[i])) return false;
        return true;
    }

    static int cmp(const Mono& a, const Mono& b) {
        if (a.same_rep(b)) return 0;
        auto fa = a.factors(), fb = b.factors();
        std::size_t n = std::min(fa.size(), fb.size());
        for (std::size_t i = 0; i < n; ++i) {
            int c = factor_cmp(fa[i], fb[i]);
            if (c != 0) return c;
            if (!(fa[i] == fb[i])) return Expr::compare(fa[i], fb[i]);
        }
        return fa.size() == fb.size() ? 0 : (fa.size() < fb.size() ? -1 : 1);
    }

private:
    std::shared_ptr<const SeqData> d_;
    std::size_t off_ = 0;
};

struct FTerm {
    Mono mono;
    double coeff;
};

using Form = std::vector<FTerm>;

// Merges extra factors (unsorted) into a sorted suffix, collecting repeated
// bases into powers. Dropping to the shared suffix when nothing is added is
// the hot path.
Mono merge_mono(std::vector<Expr> extra, const Mono& rest) {
    if (extra.empty()) return rest;
    std::sort(extra.begin(), extra.end(),
              [](const Expr& a, const Expr& b) { return factor_cmp(a, b) < 0; });
    auto suffix = rest.factors();
    std::vector<Expr> merged;
    merged.reserve(extra.size() + suffix.size());
    std::merge(extra.begin(), extra.end(), suffix.begin(), suffix.end(), std::back_inserter(merged),
               [](const Expr& a, const Expr& b) { return factor_cmp(a, b) < 0; });
    // collect equal bases
    std::vector<Expr> out;
    out.reserve(merged.size());
    for (std::size_t i = 0; i < merged.size();) {
        const Expr& b = base_of(merged[i]);
        std::int64_t ex = expo_of(merged[i]);
        std::size_t j = i + 1;
        while (j < merged.size() && base_of(merged[j]) == b) {
            ex += expo_of(merged[j]);
            ++j;
        }
        if (ex != 0) out.push_back(Expr::pow(b, ex));
        i = j;
    }
    return Mono(std::move(out));
}

class FormBuilder {
public:
    explicit FormBuilder(std::size_t max_monomials) : max_(max_monomials) {}

    void add(Mono m, double c) {
        auto& slot = index_[m.hash()];
        for (std::uint32_t i : slot) {
            if (terms_[i].mono == m) {
                terms_[i].coeff += c;
                return;
            }
        }
        if (terms_.size() >= max_)
            throw SizeBudgetExceeded("working form exceeds max_monomials = " + std::to_string(max_));
        slot.push_back(static_cast<std::uint32_t>(terms_.size()));
        terms_.push_back(FTerm{std::move(m), c});
    }

    Form take() {
        Form f;
        f.reserve(terms_.size());
        for (FTerm& t : terms_) {
            if (!std::isfinite(t.coeff))
                throw NonFiniteResult("reduction coefficient is not finite");
            if (t.coeff != 0.0) f.push_back(std::move(t));
        }
        std::sort(f.begin(), f.end(),
                  [](const FTerm& a, const FTerm& b) { return Mono::cmp(a.mono, b.mono) < 0; });
        return f;
    }

private:
    std::size_t max_;
    Form terms_;
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> index_;
};

Form initial_form(const Expr& normalized, std::size_t max_monomials) {
    FormBuilder b(max_monomials);
    auto add_term = [&b](const Expr& t) {
        double c;
        std::vector<Expr> fs;
        monomial_split(t, c, fs);
        std::vector<Expr> with_vars;
        with_vars.reserve(fs.size());
        for (Expr& f : fs) {
            if (!f.has_vars())
                c *= eval(f, {}); // stray variable-free factor folds numerically
            else
                with_vars.push_back(std::move(f));
        }
        std::sort(with_vars.begin(), with_vars.end(),
                  [](const Expr& a, const Expr& b) { return factor_cmp(a, b) < 0; });
        b.add(Mono(std::move(with_vars)), c);
    };
    if (normalized.kind() == ExprKind::Sum)
        for (const Expr& t : normalized.children()) add_term(t);
    else
        add_term(normalized);
    return b.take();
}

struct StepCounters {
    std::uint64_t evals = 0;
};

// Binds variable v (the lowest free variable in the form) against one rule.
// scratch is a reusable point buffer; only slot v-1 is read by the factor
// evaluations.
Form bind_axis(Form form, std::uint32_t v, const Rule1D& rule, const BindLimits& lim,
               StepCounters& ctr, std::vector<double>& scratch) {
    FormBuilder out(lim.max_monomials);
    if (scratch.size() < v) scratch.resize(v, 0.0);
    std::vector<double>& pt = scratch;
    const int n = rule.n_points();
    for (const FTerm& term : form) {
        auto fs = term.mono.factors();
        std::size_t np = 0;
        while (np < fs.size() && fs[np].min_var() == v) ++np;
        Mono rest = term.mono.drop_front(np);
        if (np == 0) {
            // monomial does not involve x_v: integrating multiplies by the weight sum
            ctr.evals += static_cast<std::uint64_t>(n);
            out.add(std::move(rest), term.coeff * rule.weight_sum);
            continue;
        }
        auto branches = decompose_factors(fs.first(np), v, lim.max_monomials);
        for (FactorBranch& br : branches) {
            if (br.entangled.empty()) {
                PairwiseAccumulator acc;
                for (int i = 0; i < n; ++i) {
                    pt[v - 1] = rule.nodes[static_cast<std::size_t>(i)];
                    double p = 1.0;
                    for (const Expr& f : br.v_only) p *= eval(f, pt);
                    acc.add(rule.weights[static_cast<std::size_t>(i)] * p);
                }
                ctr.evals += static_cast<std::uint64_t>(n);
                out.add(merge_mono(std::move(br.v_free), rest),
                        term.coeff * br.coeff * acc.total());
            } else {
                // substitution fallback: one reduced monomial per rule node
                for (int i = 0; i < n; ++i) {
                    double xi = rule.nodes[static_cast<std::size_t>(i)];
                    pt[v - 1] = xi;
                    double c = rule.weights[static_cast<std::size_t>(i)] * term.coeff * br.coeff;
                    for (const Expr& f : br.v_only) c *= eval(f, pt);
                    std::vector<Expr> extra = br.v_free;
                    for (const Expr& g : br.entangled) {
                        Expr s = substitute(g, v, xi);
                        if (s.kind() == ExprKind::Constant) {
                            c *= s.constant_value();
                        } else if (s.kind() == ExprKind::Product) {
                            for (const Expr& f : s.children()) {
                                if (f.kind() == ExprKind::Constant)
                                    c *= f.constant_value();
                                else
                                    extra.push_back(f);
                            }
                        } else {
                            extra.push_back(std::move(s));
                        }
                    }
                    Mono key = merge_mono(std::move(extra), rest);
                    if (key.nodes() > lim.max_nodes_per_monomial)
                        throw SizeBudgetExceeded("monomial exceeds max_nodes_per_monomial = " +
                                                 std::to_string(lim.max_nodes_per_monomial));
                    out.add(std::move(key), c);
                }
                ctr.evals += static_cast<std::uint64_t>(n);
            }
        }
    }
    return out.take();
}

std::uint64_t form_nodes(const Form& f) {
    std::uint64_t n = 0;
    for (const FTerm& t : f) n += t.mono.nodes();
    return n;
}

// Direct tensor-product evaluation of the residual form over axes
// off+1 .. off+k (used by ResidualMode::direct).
double direct_residual(const Form& form, std::span<const Rule1D> rules, std::uint32_t off, int k,
                       StepCounters& ctr) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
    std::vector<double> pt(off + static_cast<std::size_t>(k), 0.0);
    PairwiseAccumulator acc;
    std::uint64_t points = 1;
    for (int j = 0; j < k; ++j)
        points *= static_cast<std::uint64_t>(rules[off + static_cast<std::size_t>(j)].n_points());
    for (std::uint64_t count = 0;; ++count) {
        double w = 1.0;
        for (int j = 0; j < k; ++j) {
            const Rule1D& r = rules[off + static_cast<std::size_t>(j)];
            pt[off + static_cast<std::size_t>(j)] = r.nodes[idx[static_cast<std::size_t>(j)]];
            w *= r.weights[idx[static_cast<std::size_t>(j)]];
        }
        PairwiseAccumulator val;
        for (const FTerm& t : form) {
            double p = t.coeff;
            for (const Expr& f : t.mono.factors()) p *= eval(f, pt);
            val.add(p);
        }
        acc.add(w * val.total());
        // odometer, last axis fastest
        int j = k - 1;
        for (; j >= 0; --j) {
            std::size_t& i = idx[static_cast<std::size_t>(j)];
            if (++i < rules[off + static_cast<std::size_t>(j)].nodes.size()) break;
            i = 0;
        }
        if (j < 0) {
            ctr.evals += points;
            return acc.total();
        }
    }
}

} // namespace

MdiResult mdi_integrate(const Expr& g, const Box& box, const MdiConfig& cfg) {
    if (cfg.step < 1 || cfg.step > 3)
        throw DimensionMismatch("step must be 1, 2, or 3");
    Expr ng = normalize(g);
    int d = box.dims();
    if (d < 1) throw DimensionMismatch("box must have at least one axis");
    if (ng.max_var() > static_cast<std::uint32_t>(d))
        throw DimensionMismatch("integrand uses x" + std::to_string(ng.max_var()) +
                                " but the box has " + std::to_string(d) + " axes");

    std::vector<Rule1D> rules;
    rules.reserve(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
        rules.push_back(make_rule(cfg.rule, cfg.n_points, box.axis(i).lo, box.axis(i).hi));

    BindLimits lim{cfg.max_monomials, cfg.max_nodes_per_monomial};
    StepCounters ctr;
    std::vector<double> scratch;
    Form form = initial_form(ng, cfg.max_monomials);

    MdiResult res;
    res.trace.peak_monomials = form.size();

    std::uint32_t off = 0;
    int k = d;
    bool direct_done = false;
    double direct_value = 0.0;
    using clock = std::chrono::steady_clock;
    while (k > 0) {
        auto t0 = clock::now();
        if (cfg.residual == ResidualMode::direct && k <= cfg.step) {
            direct_value = direct_residual(form, rules, off, k, ctr);
            direct_done = true;
            k = 0;
        } else {
            int mm = std::min(cfg.step, k);
            for (int j = 0; j < mm; ++j) {
                form = bind_axis(std::move(form), off + 1, rules[off], lim, ctr, scratch);
                ++off;
            }
            k -= mm;
        }
        auto t1 = clock::now();
        res.trace.steps.push_back(IterationRecord{
            k, form.size(), form_nodes(form), std::chrono::duration<double>(t1 - t0).count()});
        res.trace.peak_monomials = std::max(res.trace.peak_monomials, form.size());
    }
    res.trace.evals = ctr.evals;

    double value;
    if (direct_done) {
        value = direct_value;
    } else {
        PairwiseAccumulator acc;
        for (const FTerm& t : form) acc.add(t.coeff); // all monomials are empty now
        value = acc.total();
    }
    if (!std::isfinite(value)) throw NonFiniteResult("integral value is not finite");
    res.value = value;
    return res;
}

Expr bind_and_sum(const Expr& g, std::span<const Rule1D> rules, const BindLimits& limits) {
    if (rules.empty()) return normalize(g);
    if (rules.size() > 3) throw DimensionMismatch("at most 3 axes per binding step");
    Expr ng = normalize(g);
    StepCounters ctr;
    std::vector<double> scratch;
    Form form = initial_form(ng, limits.max_monomials);
    for (std::size_t j = 0; j < rules.size(); ++j)
        form = bind_axis(std::move(form), static_cast<std::uint32_t>(j + 1), rules[j], limits, ctr,
                         scratch);
    auto delta = static_cast<std::uint32_t>(rules.size());
    std::vector<Expr> terms;
    terms.reserve(form.size());
    for (const FTerm& t : form) {
        std::vector<Expr> fs;
        fs.reserve(t.mono.size() + 1);
        fs.push_back(Expr::constant(t.coeff));
        for (const Expr& f : t.mono.factors()) fs.push_back(shift_vars_down(f, delta));
        terms.push_back(Expr::product(std::move(fs)));
    }
    return normalize(Expr::sum(std::move(terms)));
}

EquivalenceResult stp_equivalence_check(const Expr& g, const Box& box, const MdiConfig& cfg,
                                        double tol) {
    int d = box.dims();
    double points = std::pow(static_cast<double>(cfg.n_points), d);
    if (d > 6 || points > 1e7)
        throw OracleInfeasible("direct tensor sum too large for the equivalence check");
    MdiResult m = mdi_integrate(g, box, cfg);
    double s = stp_integrate(g, box, cfg.n_points, cfg.rule);
    double scale = std::max({std::abs(m.value), std::abs(s), 1e-300});
    double gap = std::abs(m.value - s) / scale;
    return EquivalenceResult{gap <= tol, m.value, s, gap};
}

} // namespace mdi
