#include "starq/cochain.hpp"

namespace starq {

namespace {

void check_key(const CochainKey& key, int p, int n, bool tilde)
{
    if (static_cast<int>(key.size()) != p)
        throw std::invalid_argument("cochain key has wrong arity");
    for (const auto& a : key)
        if (a.dim() != n) throw std::invalid_argument("cochain key dimension mismatch");
    if (tilde && has_zero_slot(key))
        throw std::invalid_argument("zero slot in tilde cochain key");
}

// Slot expansion of the coboundary: delta X^a = sum_{b+c=a} Q^a_{bc} X^b (x) X^c
// with Q^a_{bc} = -1 for b,c != 0, 0 when exactly one vanishes, +1 for a = 0.
std::vector<std::pair<std::pair<MultiIndex, MultiIndex>, int>> slot_split(const MultiIndex& a)
{
    std::vector<std::pair<std::pair<MultiIndex, MultiIndex>, int>> out;
    if (a.is_zero()) {
        out.push_back({{a, a}, +1});
        return out;
    }
    for (const auto& bc : compositions(a, 2, false)) {
        const MultiIndex& b = bc[0];
        const MultiIndex& c = bc[1];
        if (b.is_zero() || c.is_zero()) continue;
        out.push_back({{b, c}, -1});
    }
    return out;
}

} // namespace

void Cochain::add_term(const CochainKey& key, const Poly& value)
{
    check_key(key, p_, n_, tilde_);
    if (value.dim() != n_) throw std::invalid_argument("cochain coefficient dimension mismatch");
    if (value.is_zero()) return;
    auto [it, inserted] = terms_.emplace(key, value);
    if (!inserted) {
        it->second += value;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Cochain& Cochain::operator+=(const Cochain& g)
{
    if (p_ != g.p_ || n_ != g.n_)
        throw std::invalid_argument("cochain shape mismatch in addition");
    for (const auto& [key, val] : g.terms_) add_term(key, val);
    return *this;
}

Cochain operator*(Cochain f, const Rational& q)
{
    if (q == 0) return Cochain(f.p_, f.n_, f.tilde_);
    for (auto& [key, val] : f.terms_) val = val * q;
    return f;
}

Poly apply(const Cochain& phi, const std::vector<Poly>& fs)
{
    if (static_cast<int>(fs.size()) != phi.arity())
        throw std::invalid_argument("apply: arity mismatch");
    for (const auto& f : fs)
        if (f.dim() != phi.dim()) throw std::invalid_argument("apply: dimension mismatch");
    Poly r(phi.dim());
    for (const auto& [key, val] : phi.terms()) {
        Poly term = val;
        for (int i = 0; i < phi.arity() && !term.is_zero(); ++i)
            term = term * fs[i].xderiv(key[i]);
        r += term;
    }
    return r;
}

Cochain coboundary(const Cochain& phi)
{
    Cochain out(phi.arity() + 1, phi.dim(), phi.tilde());
    for (const auto& [key, val] : phi.terms()) {
        for (int k = 0; k < phi.arity(); ++k) {
            int sign = (k % 2 == 0) ? +1 : -1; // (-1)^{k+1}, 1-based k
            for (const auto& [bc, q] : slot_split(key[k])) {
                CochainKey nk;
                nk.reserve(key.size() + 1);
                nk.insert(nk.end(), key.begin(), key.begin() + k);
                nk.push_back(bc.first);
                nk.push_back(bc.second);
                nk.insert(nk.end(), key.begin() + k + 1, key.end());
                out.add_term(nk, val * Rational(sign * q));
            }
        }
    }
    return out;
}

Cochain coboundary_transpose(const Cochain& psi)
{
    if (psi.arity() < 2)
        throw std::invalid_argument("coboundary_transpose: arity must be >= 2");
    Cochain out(psi.arity() - 1, psi.dim(), psi.tilde());
    for (const auto& [key, val] : psi.terms()) {
        for (int k = 0; k + 1 < psi.arity(); ++k) {
            int sign = (k % 2 == 0) ? +1 : -1;
            const MultiIndex& a = key[k];
            const MultiIndex& b = key[k + 1];
            // delta^T(X^a (x) X^b) = -X^{a+b} + [a=0] X^b + [b=0] X^a
            std::vector<std::pair<MultiIndex, int>> merged;
            merged.push_back({a + b, -1});
            if (a.is_zero()) merged.push_back({b, +1});
            if (b.is_zero()) merged.push_back({a, +1});
            for (const auto& [m, q] : merged) {
                CochainKey nk;
                nk.reserve(key.size() - 1);
                nk.insert(nk.end(), key.begin(), key.begin() + k);
                nk.push_back(m);
                nk.insert(nk.end(), key.begin() + k + 2, key.end());
                out.add_term(nk, val * Rational(sign * q));
            }
        }
    }
    return out;
}

Poly inner(const Cochain& phi, const Cochain& psi)
{
    if (phi.arity() != psi.arity())
        throw std::invalid_argument("inner: arity mismatch");
    if (phi.dim() != psi.dim())
        throw std::invalid_argument("inner: dimension mismatch");
    Poly r(phi.dim());
    for (const auto& [key, val] : phi.terms()) {
        auto it = psi.terms().find(key);
        if (it != psi.terms().end()) r += val * it->second;
    }
    return r;
}

std::map<MultiIndex, Cochain> degree_split(const Cochain& phi)
{
    std::map<MultiIndex, Cochain> out;
    for (const auto& [key, val] : phi.terms()) {
        MultiIndex l = key_degree(key);
        auto it = out.find(l);
        if (it == out.end())
            it = out.emplace(l, Cochain(phi.arity(), phi.dim(), phi.tilde())).first;
        it->second.add_term(key, val);
    }
    return out;
}

std::pair<Cochain, Cochain> flip_split(const Cochain& phi)
{
    if (phi.arity() != 2 && phi.arity() != 3)
        throw std::invalid_argument("flip_split: arity must be 2 or 3");
    Cochain flipped(phi.arity(), phi.dim(), phi.tilde());
    for (const auto& [key, val] : phi.terms()) {
        CochainKey rk(key.rbegin(), key.rend());
        flipped.add_term(rk, val);
    }
    Rational half(1, 2);
    return {(phi + flipped) * half, (phi - flipped) * half};
}

} // namespace starq
