#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "starq/blocksolve.hpp"
#include "starq/cochain.hpp"

namespace starq {

/// Polynomial Poisson structure on R^n.  Stores the strictly upper part
/// omega_ij, i < j; the accessor fills in antisymmetry.  Validity (Jacobi)
/// is checked by jacobi_residual, never assumed.
struct PoissonStructure {
    int n = 0;
    std::map<std::pair<int, int>, Poly> upper;

    PoissonStructure() = default;
    explicit PoissonStructure(int dim) : n(dim) {}

    /// Set omega_ij for 0-based i < j.
    void set(int i, int j, Poly w)
    {
        if (i < 0 || j <= i || j >= n)
            throw std::invalid_argument("poisson entry requires 0 <= i < j < n");
        if (w.dim() != n) throw std::invalid_argument("poisson entry dimension mismatch");
        if (w.is_zero())
            upper.erase({i, j});
        else
            upper[{i, j}] = std::move(w);
    }

    /// omega_ij with omega_ji = -omega_ij and omega_ii = 0.
    Poly omega(int i, int j) const
    {
        if (i < 0 || j < 0 || i >= n || j >= n)
            throw std::out_of_range("poisson index out of range");
        if (i == j) return Poly::zero(n);
        auto it = upper.find({std::min(i, j), std::max(i, j)});
        if (it == upper.end()) return Poly::zero(n);
        return i < j ? it->second : -it->second;
    }

    bool operator==(const PoissonStructure&) const = default;
};

/// Truncated star product f*g = fg + sum_{k=1..order} t^k Pi^k(f,g).
/// pis[k-1] holds Pi^k, a tilde 2-cochain supported on degrees 2 <= |l| <= 2k.
struct StarProduct {
    PoissonStructure structure;
    int order = 0;
    std::vector<Cochain> pis;
    std::string gauge = "zero";
};

/// Per-order cocycle choice Gamma^k for the homogeneous part of the solve;
/// missing orders mean Gamma^k = 0 (minimal-norm solution).
using GaugeChoice = std::map<int, Cochain>;

/// Jacobi residuals sum_m (d^m w_ik w_mj + d^m w_kj w_mi + d^m w_ji w_mk)
/// keyed by 0-based triples i < j < k; only nonzero residuals are returned,
/// so an empty map means the structure is Poisson.
std::map<std::array<int, 3>, Poly> jacobi_residual(const PoissonStructure& ps);

/// Rejected Poisson input: carries the nonzero Jacobi residuals per triple.
class InvalidPoissonError : public std::runtime_error {
public:
    explicit InvalidPoissonError(std::map<std::array<int, 3>, Poly> residual);

    const std::map<std::array<int, 3>, Poly>& residual() const { return residual_; }

private:
    std::map<std::array<int, 3>, Poly> residual_;
};

/// Pi^1(f,g) = 1/2 X^{e_i}f w_ij X^{e_j}g: keys (e_i,e_j) with
/// coefficient w_ij/2 for all i != j.
Cochain pi1(const PoissonStructure& ps);

/// Insertion of a 2-cochain into the first slot of another:
/// apply(insert_left(Phi,Psi),(f,g,h)) = apply(Phi,(apply(Psi,(f,g)),h)).
/// For outer key (a,b) and inner key (c,d), every splitting u+v+w = a
/// contributes outer_ab * X^u(inner_cd) * compose(v,c) * compose(w,d) at the
/// 3-key (v+c, w+d, b).
Cochain insert_left(const Cochain& outer, const Cochain& inner);

/// Insertion into the second slot:
/// apply(insert_right(Phi,Psi),(f,g,h)) = apply(Phi,(f,apply(Psi,(g,h)))).
/// Splittings u+v+w = b contribute at (a, v+c, w+d).
Cochain insert_right(const Cochain& outer, const Cochain& inner);

/// Associativity right-hand side at order k = pis.size() + 1:
/// Omega^k = sum_{m=1}^{k-1} [insert_left(Pi^{k-m}, Pi^m)
///                            - insert_right(Pi^m, Pi^{k-m})].
/// The order-k equation is delta Pi^k = Omega^k.
Cochain omega_k(const std::vector<Cochain>& pis);

/// Solve delta Pi^k = Omega^k block by block; state must hold Pi^1..Pi^{k-1}.
/// With gamma absent the result is the minimal-norm solution (each degree
/// block orthogonal to Ker Delta_l); otherwise the kernel projection of
/// gamma's matching block is added.  Throws ObstructionError when some block
/// of Omega^k is not in the image of the coboundary.  jobs > 1 solves
/// distinct blocks concurrently with deterministic assembly.
Cochain solve_order(const StarProduct& state, int k, const Cochain* gamma = nullptr,
                    int jobs = 1);

/// Full driver: Jacobi gate, Pi^1, then solve_order for k = 2..K.
StarProduct build(const PoissonStructure& ps, int K, const GaugeChoice& gauge = {},
                  int jobs = 1);

/// Per-order coefficients [fg, Pi^1(f,g), ..., Pi^K(f,g)] of f*g.
std::vector<Poly> star_eval(const StarProduct& s, const Poly& f, const Poly& g);

/// Per-order coefficients of (f*g)*h - f*(g*h), truncated at t^K.
/// All-zero for a valid star product.
std::vector<Poly> associator(const StarProduct& s, const Poly& f, const Poly& g,
                             const Poly& h);

} // namespace starq
