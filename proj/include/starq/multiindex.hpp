#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "starq/rational.hpp"

namespace starq {

/// Exponent vector a = (a^1,...,a^n), all components >= 0.  Indexes both
/// monomials x^a and normalized derivatives X^a = (1/a!) d^a.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(int n) : c_(n, 0) {}
    explicit MultiIndex(std::vector<int> comps) : c_(std::move(comps))
    {
        for (int v : c_)
            if (v < 0) throw std::invalid_argument("negative multi-index component");
    }

    static MultiIndex zero(int n) { return MultiIndex(n); }

    /// Unit vector e_i, 0-based i.
    static MultiIndex unit(int n, int i)
    {
        MultiIndex a(n);
        a.c_.at(i) = 1;
        return a;
    }

    int dim() const { return static_cast<int>(c_.size()); }
    int operator[](int i) const { return c_[i]; }
    int& operator[](int i) { return c_[i]; }
    const std::vector<int>& components() const { return c_; }

    /// |a| = a^1 + ... + a^n, computed on demand.
    int order() const
    {
        int s = 0;
        for (int v : c_) s += v;
        return s;
    }

    bool is_zero() const
    {
        for (int v : c_)
            if (v != 0) return false;
        return true;
    }

    /// Componentwise a <= b.
    bool leq(const MultiIndex& b) const
    {
        check_dim(b);
        for (int i = 0; i < dim(); ++i)
            if (c_[i] > b.c_[i]) return false;
        return true;
    }

    MultiIndex operator+(const MultiIndex& b) const
    {
        check_dim(b);
        MultiIndex r = *this;
        for (int i = 0; i < dim(); ++i) r.c_[i] += b.c_[i];
        return r;
    }

    /// Componentwise difference; requires b <= a.
    MultiIndex operator-(const MultiIndex& b) const
    {
        check_dim(b);
        MultiIndex r = *this;
        for (int i = 0; i < dim(); ++i) {
            r.c_[i] -= b.c_[i];
            if (r.c_[i] < 0) throw std::invalid_argument("multi-index difference is negative");
        }
        return r;
    }

    bool operator==(const MultiIndex& b) const = default;

    /// Lexicographic order on the component list.
    auto operator<=>(const MultiIndex& b) const = default;

    std::string to_string() const
    {
        std::string s = "(";
        for (int i = 0; i < dim(); ++i) {
            if (i) s += ",";
            s += std::to_string(c_[i]);
        }
        return s + ")";
    }

private:
    void check_dim(const MultiIndex& b) const
    {
        if (dim() != b.dim()) throw std::invalid_argument("multi-index dimension mismatch");
    }

    std::vector<int> c_;
};

/// Graded lexicographic: compare |a| first, then lex.  Canonical monomial
/// order for polynomial storage and printing.
struct GrLexLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const
    {
        int oa = a.order(), ob = b.order();
        if (oa != ob) return oa < ob;
        return a < b;
    }
};

/// Number of splittings a = (a-s) + s with s != 0 and s != a:
/// prod_i (a^i + 1) - 2.  Returns -1 for a = 0; callers must guard.
inline long proper_splitting_count(const MultiIndex& a)
{
    long r = 1;
    for (int i = 0; i < a.dim(); ++i) r *= a[i] + 1;
    return r - 2;
}

/// Composition factor of normalized derivatives:
/// X^v(X^c f) = compose_factor(v,c) * X^{v+c} f, i.e. prod_i C(v^i+c^i, c^i).
inline Integer compose_factor(const MultiIndex& v, const MultiIndex& c)
{
    if (v.dim() != c.dim()) throw std::invalid_argument("multi-index dimension mismatch");
    Integer r = 1;
    for (int i = 0; i < v.dim(); ++i)
        r *= binomial(static_cast<unsigned>(v[i] + c[i]), static_cast<unsigned>(c[i]));
    return r;
}

/// All p-tuples (a_1,...,a_p) with a_1+...+a_p = l, in lexicographic order on
/// the concatenated component lists.  With nonzero_parts, every a_i != 0.
/// The order is a stable contract: every block matrix is written in it.
std::vector<std::vector<MultiIndex>> compositions(const MultiIndex& l, int p, bool nonzero_parts);

} // namespace starq
