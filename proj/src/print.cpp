#include "mdi/expr.hpp"

#include <charconv>
#include <cstdio>
#include <string>

namespace mdi {
namespace {

// precedence levels: sum < product < power < atom
enum Prec { kSum = 0, kProduct = 1, kPower = 2, kAtom = 3 };

void format_double(double v, std::string& out) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v); // shortest round-trip
    out.append(buf, p);
}

bool negative_constant(const Expr& e) {
    return e.kind() == ExprKind::Constant && e.constant_value() < 0.0;
}

// True when the term should be rendered after a '-' sign with the constant
// negated; used for Sum tails and for leading unary minus.
bool leading_minus(const Expr& t) {
    if (negative_constant(t)) return true;
    return t.kind() == ExprKind::Product && !t.children().empty() &&
           negative_constant(t.child(0));
}

Expr negate_leading(const Expr& t) {
    if (t.kind() == ExprKind::Constant) return Expr::constant(-t.constant_value());
    // Product with a leading negative constant
    double c = -t.child(0).constant_value();
    std::vector<Expr> fs;
    if (c != 1.0) fs.push_back(Expr::constant(c));
    fs.insert(fs.end(), t.children().begin() + 1, t.children().end());
    return Expr::product(std::move(fs));
}

void print(const Expr& e, int parent, std::string& out) {
    int prec = kAtom;
    switch (e.kind()) {
    case ExprKind::Sum:
        prec = kSum;
        break;
    case ExprKind::Product:
        prec = kProduct;
        break;
    case ExprKind::Power:
        prec = kPower;
        break;
    case ExprKind::Constant:
        if (e.constant_value() < 0.0) prec = kProduct; // needs parens under '^'
        break;
    default:
        break;
    }
    bool parens = prec < parent;
    if (parens) out.push_back('(');
    switch (e.kind()) {
    case ExprKind::Constant:
        format_double(e.constant_value(), out);
        break;
    case ExprKind::Var:
        out.push_back('x');
        out.append(std::to_string(e.var_index()));
        break;
    case ExprKind::Sum: {
        bool first = true;
        for (const Expr& t : e.children()) {
            if (!first && leading_minus(t)) {
                out.append(" - ");
                print(negate_leading(t), kSum + 1, out);
            } else {
                if (!first) out.append(" + ");
                print(t, first ? kSum : kSum + 1, out);
            }
            first = false;
        }
        break;
    }
    case ExprKind::Product: {
        bool first = true;
        for (const Expr& f : e.children()) {
            if (!first) out.push_back('*');
            print(f, kProduct, out);
            first = false;
        }
        break;
    }
    case ExprKind::Power:
        print(e.child(), kAtom, out);
        out.push_back('^');
        out.append(std::to_string(e.exponent()));
        break;
    case ExprKind::Exp:
    case ExprKind::Sin:
    case ExprKind::Cos:
        out.append(e.kind() == ExprKind::Exp ? "exp" : e.kind() == ExprKind::Sin ? "sin" : "cos");
        out.push_back('(');
        print(e.child(), kSum, out);
        out.push_back(')');
        break;
    }
    if (parens) out.push_back(')');
}

} // namespace

std::string to_string(const Expr& e) {
    std::string out;
    print(e, kSum, out);
    return out;
}

} // namespace mdi
