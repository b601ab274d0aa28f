#include "mdi/errors.hpp"
#include "mdi/expr.hpp"

#include <cctype>
#include <charconv>
#include <numbers>
#include <string>

namespace mdi {
namespace {

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Expr run() {
        Expr e = parse_sum();
        skip_ws();
        if (pos_ != src_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, pos_); }

    void skip_ws() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' ||
                                      src_[pos_] == '\n' || src_[pos_] == '\r'))
            ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const char* what) {
        if (!accept(c)) fail(std::string("expected '") + c + "' " + what);
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    Expr parse_sum() {
        std::vector<Expr> terms;
        terms.push_back(parse_term());
        for (;;) {
            if (accept('+')) {
                terms.push_back(parse_term());
            } else if (accept('-')) {
                terms.push_back(Expr::product({Expr::constant(-1.0), parse_term()}));
            } else {
                break;
            }
        }
        return Expr::sum(std::move(terms));
    }

    Expr parse_term() {
        std::vector<Expr> factors;
        factors.push_back(parse_unary());
        for (;;) {
            if (accept('*')) {
                factors.push_back(parse_unary());
            } else if (accept('/')) {
                factors.push_back(Expr::pow(parse_unary(), -1));
            } else {
                break;
            }
        }
        return Expr::product(std::move(factors));
    }

    Expr parse_unary() {
        if (accept('-')) return Expr::product({Expr::constant(-1.0), parse_unary()});
        if (accept('+')) return parse_unary();
        return parse_factor();
    }

    Expr parse_factor() {
        Expr base = parse_primary();
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == '^') {
            ++pos_;
            return Expr::pow(std::move(base), parse_exponent());
        }
        return base;
    }

    // Integer literal, optionally signed or parenthesized; a further '^'
    // builds the exponent tower right-associatively in integer arithmetic.
    std::int64_t parse_exponent() {
        skip_ws();
        std::size_t at = pos_;
        if (accept('(')) {
            std::int64_t v = parse_exponent();
            expect(')', "after exponent");
            return maybe_tower(v, at);
        }
        bool neg = false;
        if (accept('-'))
            neg = true;
        else
            accept('+');
        skip_ws();
        at = pos_;
        if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
            throw NonIntegerExponent("exponent must be an integer literal", pos_);
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), v);
        pos_ = static_cast<std::size_t>(p - src_.data());
        if (ec != std::errc()) fail("exponent out of range");
        if (pos_ < src_.size() && (src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E'))
            throw NonIntegerExponent("exponent must be an integer literal", at);
        return maybe_tower(neg ? -v : v, at);
    }

    std::int64_t maybe_tower(std::int64_t base, std::size_t at) {
        skip_ws();
        if (pos_ >= src_.size() || src_[pos_] != '^') return base;
        ++pos_;
        std::int64_t ex = parse_exponent();
        if (ex < 0)
            throw NonIntegerExponent("negative exponent in integer exponent tower", at);
        std::int64_t acc = 1;
        for (std::int64_t i = 0; i < ex; ++i) {
            if (acc != 0 && (acc > (1LL << 40) || acc < -(1LL << 40))) fail("exponent out of range");
            acc *= base;
        }
        return acc;
    }

    Expr parse_primary() {
        skip_ws();
        if (pos_ >= src_.size()) fail("unexpected end of input");
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = parse_sum();
            expect(')', "to close group");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
        fail(std::string("unexpected character '") + c + "'");
    }

    Expr parse_number() {
        double v = 0.0;
        auto [p, ec] = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), v);
        if (ec != std::errc() || p == src_.data() + pos_) fail("malformed number");
        pos_ = static_cast<std::size_t>(p - src_.data());
        return Expr::constant(v);
    }

    Expr parse_ident() {
        std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                      src_[pos_] == '_'))
            ++pos_;
        std::string_view name = src_.substr(start, pos_ - start);
        if (name == "pi") return Expr::constant(std::numbers::pi);
        if (name == "exp" || name == "sin" || name == "cos") {
            expect('(', "after function name");
            Expr arg = parse_sum();
            expect(')', "to close function argument");
            if (name == "exp") return Expr::exp(std::move(arg));
            if (name == "sin") return Expr::sin(std::move(arg));
            return Expr::cos(std::move(arg));
        }
        if (name.size() >= 2 && name[0] == 'x') {
            std::uint32_t idx = 0;
            auto [p, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), idx);
            if (ec == std::errc() && p == name.data() + name.size() && idx >= 1)
                return Expr::var(idx);
        }
        throw UnknownIdentifier("unknown identifier '" + std::string(name) + "'", start);
    }
};

} // namespace

Expr parse_expr(std::string_view src) {
    Parser p(src);
    return normalize(p.run());
}

} // namespace mdi
