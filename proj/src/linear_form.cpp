#include "mdi/linear_form.hpp"

#include "mdi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace mdi {

namespace {

struct ExprHashEq {
    std::size_t operator()(const Expr& e) const { return static_cast<std::size_t>(e.hash()); }
    bool operator()(const Expr& a, const Expr& b) const { return a == b; }
};

Expr product_of(std::vector<Expr> fs) {
    if (fs.empty()) return Expr::constant(1.0);
    if (fs.size() == 1) return std::move(fs[0]);
    return normalize(Expr::product(std::move(fs)));
}

// Rebuilds a sum from a subsequence of a normalized Sum's children; the
// subsequence is already in canonical order.
Expr sum_of(std::vector<Expr> ts) {
    if (ts.size() == 1) return std::move(ts[0]);
    return Expr::sum(std::move(ts));
}

bool pure_in(const Expr& e, std::uint32_t v) { return e.min_var() == v && e.max_var() == v; }

} // namespace

void monomial_split(const Expr& term, double& coeff, std::vector<Expr>& factors) {
    coeff = 1.0;
    factors.clear();
    if (term.kind() == ExprKind::Constant) {
        coeff = term.constant_value();
        return;
    }
    if (term.kind() == ExprKind::Product) {
        auto kids = term.children();
        std::size_t i = 0;
        if (!kids.empty() && kids[0].kind() == ExprKind::Constant) {
            coeff = kids[0].constant_value();
            i = 1;
        }
        factors.assign(kids.begin() + static_cast<std::ptrdiff_t>(i), kids.end());
        return;
    }
    factors.push_back(term);
}

LinearForm LinearForm::from_expr(const Expr& e) {
    Expr n = normalize(e);
    LinearForm lf;
    auto add_term = [&lf](const Expr& t) {
        double c;
        std::vector<Expr> fs;
        monomial_split(t, c, fs);
        lf.add(product_of(std::move(fs)), c);
    };
    if (n.kind() == ExprKind::Sum)
        for (const Expr& t : n.children()) add_term(t);
    else
        add_term(n);
    return lf;
}

void LinearForm::add(const Expr& monomial, double coeff) {
    if (coeff == 0.0) return;
    for (Term& t : terms_) {
        if (t.monomial == monomial) {
            t.coeff += coeff;
            return;
        }
    }
    terms_.push_back(Term{monomial, coeff});
    sorted_ = false;
}

void LinearForm::sort_terms() const {
    if (sorted_) return;
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return Expr::compare(a.monomial, b.monomial) < 0; });
    sorted_ = true;
}

std::span<const LinearForm::Term> LinearForm::terms() const {
    sort_terms();
    return terms_;
}

Expr LinearForm::to_expr() const {
    std::vector<Expr> ts;
    for (const Term& t : terms()) {
        if (t.coeff == 0.0) continue;
        ts.push_back(Expr::product({Expr::constant(t.coeff), t.monomial}));
    }
    return normalize(Expr::sum(std::move(ts)));
}

namespace {

void classify_atom(Expr e, std::uint32_t v, FactorBranch& b) {
    if (pure_in(e, v))
        b.v_only.push_back(std::move(e));
    else
        b.entangled.push_back(std::move(e));
}

std::vector<FactorBranch> decompose_one(const Expr& f, std::uint32_t v, std::size_t branch_limit);

std::vector<FactorBranch> cross(std::vector<FactorBranch> acc, std::vector<FactorBranch> more,
                                std::size_t branch_limit) {
    if (more.size() == 1) {
        for (FactorBranch& a : acc) {
            const FactorBranch& m = more[0];
            a.coeff *= m.coeff;
            a.v_only.insert(a.v_only.end(), m.v_only.begin(), m.v_only.end());
            a.v_free.insert(a.v_free.end(), m.v_free.begin(), m.v_free.end());
            a.entangled.insert(a.entangled.end(), m.entangled.begin(), m.entangled.end());
        }
        return acc;
    }
    if (acc.size() > branch_limit / more.size())
        throw SizeBudgetExceeded("separation branch count exceeds limit");
    std::vector<FactorBranch> out;
    out.reserve(acc.size() * more.size());
    for (const FactorBranch& a : acc) {
        for (const FactorBranch& m : more) {
            FactorBranch x = a;
            x.coeff *= m.coeff;
            x.v_only.insert(x.v_only.end(), m.v_only.begin(), m.v_only.end());
            x.v_free.insert(x.v_free.end(), m.v_free.begin(), m.v_free.end());
            x.entangled.insert(x.entangled.end(), m.entangled.begin(), m.entangled.end());
            out.push_back(std::move(x));
        }
    }
    return out;
}

std::vector<FactorBranch> decompose_one(const Expr& f, std::uint32_t v, std::size_t branch_limit) {
    switch (f.kind()) {
    case ExprKind::Exp: {
        const Expr& arg = f.child();
        if (arg.kind() != ExprKind::Sum) break;
        FactorBranch b;
        bool any_free = false;
        for (const Expr& t : arg.children()) {
            if (t.kind() == ExprKind::Constant) {
                b.coeff *= std::exp(t.constant_value());
                any_free = true;
            } else if (!t.depends_on(v)) {
                b.v_free.push_back(Expr::exp(t));
                any_free = true;
            } else {
                classify_atom(Expr::exp(t), v, b);
            }
        }
        if (!any_free) break;
        return {std::move(b)};
    }
    case ExprKind::Sin:
    case ExprKind::Cos: {
        const Expr& arg = f.child();
        if (arg.kind() != ExprKind::Sum) break;
        // constants ride with the bound side so both halves of the identity
        // share the same variable-only keys
        std::vector<Expr> theta, rest;
        bool theta_has_v = false;
        for (const Expr& t : arg.children()) {
            if (t.kind() == ExprKind::Constant) {
                theta.push_back(t);
            } else if (t.depends_on(v)) {
                theta.push_back(t);
                theta_has_v = true;
            } else {
                rest.push_back(t);
            }
        }
        if (!theta_has_v || rest.empty()) break;
        Expr th = sum_of(std::move(theta));
        Expr re = sum_of(std::move(rest));
        FactorBranch b1, b2;
        if (f.kind() == ExprKind::Sin) {
            // sin(th + re) = sin(th)cos(re) + cos(th)sin(re)
            classify_atom(Expr::sin(th), v, b1);
            b1.v_free.push_back(Expr::cos(re));
            classify_atom(Expr::cos(th), v, b2);
            b2.v_free.push_back(Expr::sin(re));
        } else {
            // cos(th + re) = cos(th)cos(re) - sin(th)sin(re)
            classify_atom(Expr::cos(th), v, b1);
            b1.v_free.push_back(Expr::cos(re));
            classify_atom(Expr::sin(th), v, b2);
            b2.v_free.push_back(Expr::sin(re));
            b2.coeff = -1.0;
        }
        std::vector<FactorBranch> out;
        out.push_back(std::move(b1));
        out.push_back(std::move(b2));
        return out;
    }
    case ExprKind::Sum: {
        std::vector<FactorBranch> out;
        double c;
        std::vector<Expr> fs;
        for (const Expr& t : f.children()) {
            monomial_split(t, c, fs);
            auto subs = decompose_factors(fs, v, branch_limit);
            for (FactorBranch& s : subs) {
                s.coeff *= c;
                out.push_back(std::move(s));
            }
            if (out.size() > branch_limit)
                throw SizeBudgetExceeded("separation branch count exceeds limit");
        }
        return out;
    }
    default:
        break;
    }
    FactorBranch b;
    b.entangled.push_back(f);
    return {std::move(b)};
}

} // namespace

std::vector<FactorBranch> decompose_factors(std::span<const Expr> factors, std::uint32_t v,
                                            std::size_t branch_limit) {
    std::vector<FactorBranch> acc;
    acc.emplace_back();
    for (const Expr& f : factors) {
        if (f.kind() == ExprKind::Constant) {
            for (FactorBranch& a : acc) a.coeff *= f.constant_value();
            continue;
        }
        if (!f.depends_on(v)) {
            for (FactorBranch& a : acc) a.v_free.push_back(f);
            continue;
        }
        if (pure_in(f, v)) {
            for (FactorBranch& a : acc) a.v_only.push_back(f);
            continue;
        }
        acc = cross(std::move(acc), decompose_one(f, v, branch_limit), branch_limit);
    }
    return acc;
}

SplitResult split_for_binding(const Expr& e, std::uint32_t v) {
    LinearForm lf = LinearForm::from_expr(e);
    SplitResult out;
    out.fully_separable = true;
    double c;
    std::vector<Expr> fs;
    for (const LinearForm::Term& t : lf.terms()) {
        monomial_split(t.monomial, c, fs);
        for (FactorBranch& b : decompose_factors(fs, v)) {
            SplitTerm st;
            st.coeff = t.coeff * b.coeff;
            st.v_part = product_of(std::move(b.v_only));
            st.rest = product_of(std::move(b.v_free));
            st.entangled = product_of(std::move(b.entangled));
            if (!st.entangled.is_constant(1.0)) out.fully_separable = false;
            out.terms.push_back(std::move(st));
        }
    }
    return out;
}

} // namespace mdi
