#include "starq/poly.hpp"

#include <cctype>

namespace starq {

std::string Poly::to_string() const
{
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const MultiIndex& e = it->first;
        Rational q = it->second;
        if (first) {
            if (q < 0) { s += "-"; q = -q; }
        } else {
            s += q < 0 ? " - " : " + ";
            if (q < 0) q = -q;
        }
        first = false;

        std::string vars;
        for (int i = 0; i < n_; ++i) {
            if (e[i] == 0) continue;
            if (!vars.empty()) vars += "*";
            vars += "x" + std::to_string(i + 1);
            if (e[i] > 1) vars += "^" + std::to_string(e[i]);
        }
        if (vars.empty()) {
            s += rational_to_string(q);
        } else {
            if (q != 1) s += rational_to_string(q) + "*";
            s += vars;
        }
    }
    return s;
}

namespace {

class Parser {
public:
    Parser(const std::string& text, int n) : s_(text), n_(n) {}

    Poly run()
    {
        Poly f = expression();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return f;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    char peek()
    {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    bool accept(char c)
    {
        if (peek() == c) { ++pos_; return true; }
        return false;
    }

    Poly expression()
    {
        bool neg = false;
        if (accept('-')) neg = true;
        else accept('+');
        Poly f = term();
        if (neg) f = -f;
        for (;;) {
            if (accept('+')) f += term();
            else if (accept('-')) f -= term();
            else return f;
        }
    }

    Poly term()
    {
        Poly f = factor();
        while (accept('*')) f = f * factor();
        return f;
    }

    Poly factor()
    {
        Poly f = primary();
        if (accept('^')) {
            long e = natural("exponent");
            Poly r = Poly::constant(n_, 1);
            for (long i = 0; i < e; ++i) r = r * f;
            return r;
        }
        return f;
    }

    Poly primary()
    {
        char c = peek();
        if (c == '(') {
            ++pos_;
            Poly f = expression();
            if (!accept(')')) fail("expected ')'");
            return f;
        }
        if (c == 'x') {
            ++pos_;
            long i = natural("variable index");
            if (i < 1 || i > n_)
                throw ParseError("variable x" + std::to_string(i) + " out of range [x1..x" +
                                     std::to_string(n_) + "]",
                                 pos_);
            return Poly::variable(n_, static_cast<int>(i - 1));
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            long p = natural("number");
            if (accept('/')) {
                long q = natural("denominator");
                if (q == 0) fail("zero denominator");
                Rational r(p, q);
                r.canonicalize();
                return Poly::constant(n_, r);
            }
            return Poly::constant(n_, p);
        }
        fail("expected number, variable or '('");
    }

    long natural(const std::string& what)
    {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected " + what);
        if (pos_ - start > 9) fail(what + " too large");
        return std::stol(s_.substr(start, pos_ - start));
    }

    const std::string& s_;
    int n_;
    std::size_t pos_ = 0;
};

} // namespace

Poly parse_poly(const std::string& text, int n)
{
    if (n < 1) throw std::invalid_argument("parse_poly: dimension must be >= 1");
    return Parser(text, n).run();
}

} // namespace starq
