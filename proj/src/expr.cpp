#include "mdi/expr.hpp"

#include "mdi/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <unordered_map>
#include <utility>

namespace mdi {

std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

namespace detail {

struct ExprNode {
    ExprKind kind;
    double value = 0.0;          // Constant
    std::uint32_t var = 0;       // Var
    std::int64_t exponent = 0;   // Power
    std::vector<Expr> kids;

    // caches
    std::uint64_t hash = 0;
    std::uint64_t nodes = 1;
    std::uint32_t min_var = 0; // 0 = no variables
    std::uint32_t max_var = 0;

    void finish() {
        std::uint64_t h = hash_combine(0x6d646900ULL, static_cast<std::uint64_t>(kind));
        switch (kind) {
        case ExprKind::Constant:
            h = hash_combine(h, std::bit_cast<std::uint64_t>(value));
            break;
        case ExprKind::Var:
            h = hash_combine(h, var);
            min_var = max_var = var;
            break;
        case ExprKind::Power:
            h = hash_combine(h, static_cast<std::uint64_t>(exponent));
            break;
        default:
            break;
        }
        for (const Expr& k : kids) {
            h = hash_combine(h, k.hash());
            nodes += k.tree_size();
            std::uint32_t lo = k.min_var();
            if (lo != 0 && (min_var == 0 || lo < min_var)) min_var = lo;
            max_var = std::max(max_var, k.max_var());
        }
        hash = h;
    }

    static Expr make(ExprNode n) {
        n.finish();
        auto p = std::make_shared<const ExprNode>(std::move(n));
        return Expr(std::move(p));
    }
};

namespace {

const std::shared_ptr<const ExprNode>& zero_node() {
    static const std::shared_ptr<const ExprNode> z = [] {
        ExprNode n{ExprKind::Constant};
        n.finish();
        return std::make_shared<const ExprNode>(std::move(n));
    }();
    return z;
}

} // namespace
} // namespace detail

using detail::ExprNode;

Expr::Expr() : node_(detail::zero_node()) {}

Expr Expr::constant(double value) {
    ExprNode n{ExprKind::Constant};
    n.value = value == 0.0 ? 0.0 : value; // -0.0 folds to 0.0
    return ExprNode::make(std::move(n));
}

Expr Expr::var(std::uint32_t index) {
    ExprNode n{ExprKind::Var};
    n.var = index;
    return ExprNode::make(std::move(n));
}

Expr Expr::sum(std::vector<Expr> terms) {
    if (terms.empty()) return constant(0.0);
    if (terms.size() == 1) return std::move(terms[0]);
    ExprNode n{ExprKind::Sum};
    n.kids = std::move(terms);
    return ExprNode::make(std::move(n));
}

Expr Expr::product(std::vector<Expr> factors) {
    if (factors.empty()) return constant(1.0);
    if (factors.size() == 1) return std::move(factors[0]);
    ExprNode n{ExprKind::Product};
    n.kids = std::move(factors);
    return ExprNode::make(std::move(n));
}

Expr Expr::pow(Expr base, std::int64_t exponent) {
    if (exponent == 0) return constant(1.0);
    if (exponent == 1) return base;
    ExprNode n{ExprKind::Power};
    n.exponent = exponent;
    n.kids.push_back(std::move(base));
    return ExprNode::make(std::move(n));
}

Expr Expr::exp(Expr arg) {
    ExprNode n{ExprKind::Exp};
    n.kids.push_back(std::move(arg));
    return ExprNode::make(std::move(n));
}

Expr Expr::sin(Expr arg) {
    ExprNode n{ExprKind::Sin};
    n.kids.push_back(std::move(arg));
    return ExprNode::make(std::move(n));
}

Expr Expr::cos(Expr arg) {
    ExprNode n{ExprKind::Cos};
    n.kids.push_back(std::move(arg));
    return ExprNode::make(std::move(n));
}

ExprKind Expr::kind() const { return node_->kind; }
double Expr::constant_value() const { return node_->value; }
std::uint32_t Expr::var_index() const { return node_->var; }
std::int64_t Expr::exponent() const { return node_->exponent; }
std::span<const Expr> Expr::children() const { return node_->kids; }
const Expr& Expr::child(std::size_t i) const { return node_->kids[i]; }
std::uint64_t Expr::tree_size() const { return node_->nodes; }
std::uint64_t Expr::hash() const { return node_->hash; }
std::uint32_t Expr::min_var() const { return node_->min_var; }
std::uint32_t Expr::max_var() const { return node_->max_var; }

bool Expr::is_constant(double v) const {
    return node_->kind == ExprKind::Constant && node_->value == v;
}

bool Expr::depends_on(std::uint32_t index) const {
    const ExprNode* n = node_.get();
    if (index < n->min_var || index > n->max_var || n->min_var == 0) return false;
    if (n->kind == ExprKind::Var) return n->var == index;
    for (const Expr& k : n->kids)
        if (k.depends_on(index)) return true;
    return false;
}

namespace {

void collect_vars(const Expr& e, std::vector<std::uint32_t>& out) {
    if (!e.has_vars()) return;
    if (e.kind() == ExprKind::Var) {
        out.push_back(e.var_index());
        return;
    }
    for (const Expr& k : e.children()) collect_vars(k, out);
}

} // namespace

std::vector<std::uint32_t> Expr::free_vars() const {
    std::vector<std::uint32_t> out;
    collect_vars(*this, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    const ExprNode* x = a.node_.get();
    const ExprNode* y = b.node_.get();
    if (x->hash != y->hash || x->kind != y->kind || x->nodes != y->nodes) return false;
    switch (x->kind) {
    case ExprKind::Constant:
        return std::bit_cast<std::uint64_t>(x->value) == std::bit_cast<std::uint64_t>(y->value);
    case ExprKind::Var:
        return x->var == y->var;
    case ExprKind::Power:
        if (x->exponent != y->exponent) return false;
        break;
    default:
        break;
    }
    if (x->kids.size() != y->kids.size()) return false;
    for (std::size_t i = 0; i < x->kids.size(); ++i)
        if (!(x->kids[i] == y->kids[i])) return false;
    return true;
}

int Expr::compare(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return 0;
    auto rank = static_cast<int>(a.kind()) - static_cast<int>(b.kind());
    if (rank != 0) return rank < 0 ? -1 : 1;
    switch (a.kind()) {
    case ExprKind::Constant: {
        double x = a.constant_value(), y = b.constant_value();
        if (x < y) return -1;
        if (x > y) return 1;
        auto bx = std::bit_cast<std::uint64_t>(x), by = std::bit_cast<std::uint64_t>(y);
        return bx == by ? 0 : (bx < by ? -1 : 1);
    }
    case ExprKind::Var:
        return a.var_index() == b.var_index() ? 0 : (a.var_index() < b.var_index() ? -1 : 1);
    case ExprKind::Power: {
        int c = compare(a.child(), b.child());
        if (c != 0) return c;
        return a.exponent() == b.exponent() ? 0 : (a.exponent() < b.exponent() ? -1 : 1);
    }
    default: {
        auto ka = a.children(), kb = b.children();
        std::size_t n = std::min(ka.size(), kb.size());
        for (std::size_t i = 0; i < n; ++i) {
            int c = compare(ka[i], kb[i]);
            if (c != 0) return c;
        }
        return ka.size() == kb.size() ? 0 : (ka.size() < kb.size() ? -1 : 1);
    }
    }
}

double ipow(double base, std::int64_t exponent) {
    std::uint64_t e = exponent < 0 ? static_cast<std::uint64_t>(-(exponent + 1)) + 1
                                   : static_cast<std::uint64_t>(exponent);
    double acc = 1.0, b = base;
    while (e != 0) {
        if (e & 1) acc *= b;
        e >>= 1;
        if (e != 0) b *= b;
    }
    return exponent < 0 ? 1.0 / acc : acc;
}

static double eval_node(const Expr& e, std::span<const double> pt) {
    switch (e.kind()) {
    case ExprKind::Constant:
        return e.constant_value();
    case ExprKind::Var: {
        std::uint32_t v = e.var_index();
        if (v > pt.size())
            throw MissingCoordinate("point has " + std::to_string(pt.size()) +
                                    " coordinates, expression uses x" + std::to_string(v));
        return pt[v - 1];
    }
    case ExprKind::Power:
        return ipow(eval_node(e.child(), pt), e.exponent());
    case ExprKind::Exp:
        return std::exp(eval_node(e.child(), pt));
    case ExprKind::Sin:
        return std::sin(eval_node(e.child(), pt));
    case ExprKind::Cos:
        return std::cos(eval_node(e.child(), pt));
    case ExprKind::Product: {
        double acc = 1.0;
        for (const Expr& k : e.children()) acc *= eval_node(k, pt);
        return acc;
    }
    case ExprKind::Sum: {
        double acc = 0.0;
        for (const Expr& k : e.children()) acc += eval_node(k, pt);
        return acc;
    }
    }
    return 0.0;
}

double eval(const Expr& e, std::span<const double> point) {
    double v = eval_node(e, point);
    if (!std::isfinite(v)) throw NonFiniteResult("expression evaluated to a non-finite value");
    return v;
}

namespace {

// Splits a normalized term into (coefficient, monomial factor list). The
// monomial excludes constants; an empty list means the constant monomial 1.
struct TermParts {
    double coeff = 1.0;
    std::span<const Expr> factors; // view into the term's children when possible
    Expr single;                   // used when the term itself is one factor
    bool use_single = false;
};

TermParts term_parts(const Expr& t) {
    TermParts p;
    if (t.kind() == ExprKind::Constant) {
        p.coeff = t.constant_value();
    } else if (t.kind() == ExprKind::Product) {
        auto kids = t.children();
        std::size_t i = 0;
        if (!kids.empty() && kids[0].kind() == ExprKind::Constant) {
            p.coeff = kids[0].constant_value();
            i = 1;
        }
        p.factors = kids.subspan(i);
    } else {
        p.single = t;
        p.use_single = true;
    }
    return p;
}

Expr monomial_expr(const TermParts& p) {
    if (p.use_single) return p.single;
    if (p.factors.empty()) return Expr::constant(1.0);
    if (p.factors.size() == 1) return p.factors[0];
    return Expr::product(std::vector<Expr>(p.factors.begin(), p.factors.end()));
}

Expr rebuild_term(double coeff, const Expr& mono) {
    bool is_one = mono.is_constant(1.0);
    if (is_one) return Expr::constant(coeff);
    if (coeff == 1.0) return mono;
    std::vector<Expr> fs;
    fs.push_back(Expr::constant(coeff));
    if (mono.kind() == ExprKind::Product)
        fs.insert(fs.end(), mono.children().begin(), mono.children().end());
    else
        fs.push_back(mono);
    return Expr::product(std::move(fs));
}

struct ExprHashEq {
    std::size_t operator()(const Expr& e) const { return static_cast<std::size_t>(e.hash()); }
    bool operator()(const Expr& a, const Expr& b) const { return a == b; }
};

Expr normalize_sum(std::vector<Expr> kids) {
    // flatten
    std::vector<Expr> flat;
    flat.reserve(kids.size());
    for (Expr& k : kids) {
        if (k.kind() == ExprKind::Sum)
            flat.insert(flat.end(), k.children().begin(), k.children().end());
        else
            flat.push_back(std::move(k));
    }
    // collect like monomials in encounter order
    std::vector<std::pair<Expr, double>> terms; // (monomial, coeff)
    std::unordered_map<Expr, std::size_t, ExprHashEq, ExprHashEq> index;
    for (const Expr& t : flat) {
        TermParts p = term_parts(t);
        Expr mono = monomial_expr(p);
        auto [it, fresh] = index.try_emplace(mono, terms.size());
        if (fresh)
            terms.emplace_back(std::move(mono), p.coeff);
        else
            terms[it->second].second += p.coeff;
    }
    std::vector<Expr> out;
    out.reserve(terms.size());
    for (auto& [mono, coeff] : terms) {
        if (coeff == 0.0) continue;
        out.push_back(rebuild_term(coeff, mono));
    }
    if (out.empty()) return Expr::constant(0.0);
    std::sort(out.begin(), out.end(),
              [](const Expr& a, const Expr& b) { return Expr::compare(a, b) < 0; });
    return Expr::sum(std::move(out));
}

Expr normalize_product(std::vector<Expr> kids) {
    std::vector<Expr> flat;
    flat.reserve(kids.size());
    for (Expr& k : kids) {
        if (k.kind() == ExprKind::Product)
            flat.insert(flat.end(), k.children().begin(), k.children().end());
        else
            flat.push_back(std::move(k));
    }
    double c = 1.0;
    std::vector<std::pair<Expr, std::int64_t>> bases; // (base, exponent)
    std::unordered_map<Expr, std::size_t, ExprHashEq, ExprHashEq> index;
    for (const Expr& f : flat) {
        if (f.kind() == ExprKind::Constant) {
            c *= f.constant_value();
            continue;
        }
        Expr base = f;
        std::int64_t ex = 1;
        if (f.kind() == ExprKind::Power) {
            base = f.child();
            ex = f.exponent();
        }
        auto [it, fresh] = index.try_emplace(base, bases.size());
        if (fresh)
            bases.emplace_back(std::move(base), ex);
        else
            bases[it->second].second += ex;
    }
    if (c == 0.0) return Expr::constant(0.0);
    std::vector<Expr> out;
    out.reserve(bases.size() + 1);
    for (auto& [base, ex] : bases) {
        if (ex == 0) continue;
        out.push_back(Expr::pow(base, ex));
    }
    std::sort(out.begin(), out.end(),
              [](const Expr& a, const Expr& b) { return Expr::compare(a, b) < 0; });
    if (out.empty()) return Expr::constant(c);
    if (c != 1.0) out.insert(out.begin(), Expr::constant(c));
    return Expr::product(std::move(out));
}

} // namespace

Expr normalize(const Expr& e) {
    switch (e.kind()) {
    case ExprKind::Constant:
        return e.constant_value() == 0.0 ? Expr::constant(0.0) : e;
    case ExprKind::Var:
        return e;
    case ExprKind::Power: {
        Expr b = normalize(e.child());
        std::int64_t ex = e.exponent();
        if (b.kind() == ExprKind::Constant) {
            double folded = ipow(b.constant_value(), ex);
            if (std::isfinite(folded)) return Expr::constant(folded);
            return Expr::pow(std::move(b), ex);
        }
        if (b.kind() == ExprKind::Power) return normalize(Expr::pow(b.child(), b.exponent() * ex));
        if (b.kind() == ExprKind::Product) {
            // Distribute the exponent, renormalizing each factor so constant
            // bases fold and nested powers collapse before recollection.
            std::vector<Expr> fs;
            fs.reserve(b.children().size());
            for (const Expr& f : b.children()) fs.push_back(normalize(Expr::pow(f, ex)));
            return normalize_product(std::move(fs));
        }
        return Expr::pow(std::move(b), ex);
    }
    case ExprKind::Exp:
    case ExprKind::Sin:
    case ExprKind::Cos: {
        Expr a = normalize(e.child());
        if (a.kind() == ExprKind::Constant) {
            double x = a.constant_value();
            double folded = e.kind() == ExprKind::Exp   ? std::exp(x)
                            : e.kind() == ExprKind::Sin ? std::sin(x)
                                                        : std::cos(x);
            if (std::isfinite(folded)) return Expr::constant(folded);
        }
        if (a.same_node(e.child())) return e;
        ExprNode n{e.kind()};
        n.kids.push_back(std::move(a));
        return ExprNode::make(std::move(n));
    }
    case ExprKind::Product: {
        std::vector<Expr> kids;
        kids.reserve(e.children().size());
        for (const Expr& k : e.children()) kids.push_back(normalize(k));
        return normalize_product(std::move(kids));
    }
    case ExprKind::Sum: {
        std::vector<Expr> kids;
        kids.reserve(e.children().size());
        for (const Expr& k : e.children()) kids.push_back(normalize(k));
        return normalize_sum(std::move(kids));
    }
    }
    return e;
}

Expr substitute(const Expr& e, std::uint32_t index, double value) {
    if (!e.depends_on(index)) return e;
    switch (e.kind()) {
    case ExprKind::Var:
        return Expr::constant(value);
    case ExprKind::Power:
        return normalize(Expr::pow(substitute(e.child(), index, value), e.exponent()));
    case ExprKind::Exp:
        return normalize(Expr::exp(substitute(e.child(), index, value)));
    case ExprKind::Sin:
        return normalize(Expr::sin(substitute(e.child(), index, value)));
    case ExprKind::Cos:
        return normalize(Expr::cos(substitute(e.child(), index, value)));
    case ExprKind::Product: {
        std::vector<Expr> kids;
        kids.reserve(e.children().size());
        for (const Expr& k : e.children()) kids.push_back(substitute(k, index, value));
        return normalize_product(std::move(kids));
    }
    case ExprKind::Sum: {
        std::vector<Expr> kids;
        kids.reserve(e.children().size());
        for (const Expr& k : e.children()) kids.push_back(substitute(k, index, value));
        return normalize_sum(std::move(kids));
    }
    default:
        return e;
    }
}

Expr shift_vars_down(const Expr& e, std::uint32_t delta) {
    if (delta == 0 || !e.has_vars()) return e;
    switch (e.kind()) {
    case ExprKind::Var:
        return Expr::var(e.var_index() - delta);
    case ExprKind::Power:
        return Expr::pow(shift_vars_down(e.child(), delta), e.exponent());
    case ExprKind::Exp:
        return Expr::exp(shift_vars_down(e.child(), delta));
    case ExprKind::Sin:
        return Expr::sin(shift_vars_down(e.child(), delta));
    case ExprKind::Cos:
        return Expr::cos(shift_vars_down(e.child(), delta));
    default: {
        std::vector<Expr> kids;
        kids.reserve(e.children().size());
        for (const Expr& k : e.children()) kids.push_back(shift_vars_down(k, delta));
        return e.kind() == ExprKind::Product ? Expr::product(std::move(kids))
                                             : Expr::sum(std::move(kids));
    }
    }
}

} // namespace mdi
