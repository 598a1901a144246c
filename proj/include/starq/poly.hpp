#pragma once

#include <map>
#include <string>
#include <vector>

#include "starq/multiindex.hpp"
#include "starq/rational.hpp"

namespace starq {

/// Exact multivariate polynomial over the rationals.  Terms are kept in
/// graded-lex order with no zero coefficients, so equal polynomials compare
/// equal structurally and print identically.
class Poly {
public:
    using TermMap = std::map<MultiIndex, Rational, GrLexLess>;

    Poly() = default;
    explicit Poly(int n) : n_(n) {}

    static Poly zero(int n) { return Poly(n); }

    static Poly constant(int n, const Rational& q)
    {
        Poly f(n);
        f.add_term(MultiIndex::zero(n), q);
        return f;
    }

    /// The coordinate x_i (0-based i).
    static Poly variable(int n, int i)
    {
        Poly f(n);
        f.add_term(MultiIndex::unit(n, i), 1);
        return f;
    }

    static Poly monomial(MultiIndex exp, const Rational& q)
    {
        Poly f(exp.dim());
        f.add_term(std::move(exp), q);
        return f;
    }

    int dim() const { return n_; }
    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }

    /// Coefficient of x^a (zero if absent).
    Rational coeff(const MultiIndex& a) const
    {
        auto it = terms_.find(a);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    int total_degree() const
    {
        return terms_.empty() ? 0 : terms_.rbegin()->first.order();
    }

    void add_term(MultiIndex exp, const Rational& q)
    {
        if (exp.dim() != n_) throw std::invalid_argument("poly term dimension mismatch");
        if (q == 0) return;
        auto [it, inserted] = terms_.emplace(std::move(exp), q);
        if (!inserted) {
            it->second += q;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Poly& operator+=(const Poly& g)
    {
        check_dim(g);
        for (const auto& [e, q] : g.terms_) add_term(e, q);
        return *this;
    }

    Poly& operator-=(const Poly& g)
    {
        check_dim(g);
        for (const auto& [e, q] : g.terms_) add_term(e, -q);
        return *this;
    }

    friend Poly operator+(Poly f, const Poly& g) { f += g; return f; }
    friend Poly operator-(Poly f, const Poly& g) { f -= g; return f; }

    friend Poly operator*(const Poly& f, const Poly& g)
    {
        f.check_dim(g);
        Poly r(f.n_);
        for (const auto& [ea, qa] : f.terms_)
            for (const auto& [eb, qb] : g.terms_)
                r.add_term(ea + eb, qa * qb);
        return r;
    }

    Poly operator-() const { return *this * Rational(-1); }

    friend Poly operator*(Poly f, const Rational& q)
    {
        if (q == 0) return Poly(f.n_);
        for (auto& [e, c] : f.terms_) c *= q;
        return f;
    }
    friend Poly operator*(const Rational& q, Poly f) { return std::move(f) * q; }

    bool operator==(const Poly& g) const { return n_ == g.n_ && terms_ == g.terms_; }

    /// Normalized derivative X^a f = (1/a!) d^a f.  On a monomial x^b this is
    /// prod_i C(b^i, a^i) x^{b-a}, zero unless a <= b componentwise.
    Poly xderiv(const MultiIndex& a) const
    {
        if (a.dim() != n_) throw std::invalid_argument("xderiv dimension mismatch");
        Poly r(n_);
        for (const auto& [b, q] : terms_) {
            if (!a.leq(b)) continue;
            Integer c = 1;
            for (int i = 0; i < n_; ++i)
                c *= binomial(static_cast<unsigned>(b[i]), static_cast<unsigned>(a[i]));
            r.add_term(b - a, q * Rational(c));
        }
        return r;
    }

    /// Canonical text form, highest graded-lex term first; parseable by
    /// parse_poly.  The zero polynomial prints as "0".
    std::string to_string() const;

private:
    void check_dim(const Poly& g) const
    {
        if (n_ != g.n_) throw std::invalid_argument("poly dimension mismatch");
    }

    int n_ = 0;
    TermMap terms_;
};

inline Poly xderiv(const Poly& f, const MultiIndex& a) { return f.xderiv(a); }

/// Syntax error with 0-based character position.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"), pos_(pos)
    {
    }
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

/// Parse an expression over variables x1..xn with rational literals `p/q`,
/// operators + - * ^ (nonnegative integer exponents) and parentheses.
/// Whitespace is ignored.  Right inverse of Poly::to_string.
Poly parse_poly(const std::string& text, int n);

} // namespace starq
