#pragma once

#include <map>
#include <utility>
#include <vector>

#include "starq/poly.hpp"

namespace starq {

/// Key of a differential p-cochain: the tuple (a_1,...,a_p) indexing the
/// basis operator X^{a_1} (x) ... (x) X^{a_p}.
using CochainKey = std::vector<MultiIndex>;

inline bool has_zero_slot(const CochainKey& key)
{
    for (const auto& a : key)
        if (a.is_zero()) return true;
    return false;
}

inline MultiIndex key_degree(const CochainKey& key)
{
    MultiIndex l = MultiIndex::zero(key.front().dim());
    for (const auto& a : key) l = l + a;
    return l;
}

/// Differential p-cochain with polynomial coefficients,
/// Phi(f_1,...,f_p) = sum_key Phi_key X^{key_1}f_1 ... X^{key_p}f_p.
/// Keys are kept in lexicographic order on the concatenated components.
/// A tilde cochain stores no key with a zero slot.
class Cochain {
public:
    using TermMap = std::map<CochainKey, Poly>;

    Cochain() = default;
    Cochain(int arity, int n, bool tilde = false) : p_(arity), n_(n), tilde_(tilde)
    {
        if (arity < 1) throw std::invalid_argument("cochain arity must be >= 1");
    }

    int arity() const { return p_; }
    int dim() const { return n_; }
    bool tilde() const { return tilde_; }
    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }

    Poly coeff(const CochainKey& key) const
    {
        auto it = terms_.find(key);
        return it == terms_.end() ? Poly::zero(n_) : it->second;
    }

    void add_term(const CochainKey& key, const Poly& value);

    Cochain& operator+=(const Cochain& g);
    Cochain& operator-=(const Cochain& g) { return *this += g * Rational(-1); }
    friend Cochain operator+(Cochain f, const Cochain& g) { f += g; return f; }
    friend Cochain operator-(Cochain f, const Cochain& g) { f -= g; return f; }
    friend Cochain operator*(Cochain f, const Rational& q);
    friend Cochain operator*(const Rational& q, Cochain f) { return std::move(f) * q; }

    bool operator==(const Cochain& g) const
    {
        return p_ == g.p_ && n_ == g.n_ && terms_ == g.terms_;
    }

private:
    int p_ = 1;
    int n_ = 0;
    bool tilde_ = false;
    TermMap terms_;
};

/// Phi(f_1,...,f_p).
Poly apply(const Cochain& phi, const std::vector<Poly>& fs);

/// Hochschild coboundary, arity p -> p+1.  Acts on basis operators only;
/// coefficient polynomials are never differentiated.
Cochain coboundary(const Cochain& phi);

/// Transpose of the coboundary with respect to the fiberwise inner product,
/// arity p+1 -> p.
Cochain coboundary_transpose(const Cochain& psi);

/// Fiberwise inner product: sum over shared keys of the coefficient products.
Poly inner(const Cochain& phi, const Cochain& psi);

/// Partition by degree l = a_1 + ... + a_p; the parts sum back to phi.
std::map<MultiIndex, Cochain> degree_split(const Cochain& phi);

/// Split into flip-symmetric and flip-antisymmetric parts, where flip
/// reverses the slot order ((a,b) -> (b,a), (a,b,c) -> (c,b,a)).
std::pair<Cochain, Cochain> flip_split(const Cochain& phi);

} // namespace starq
