#pragma once

#include <string>

#include "starq/blocksolve.hpp"
#include "starq/starprod.hpp"

namespace starq {

/// Result of an oracle run.  A failed report carries enough detail to
/// reproduce the counterexample.
struct OracleReport {
    std::string name;
    bool passed = false;
    std::string details;
};

/// Moore-Penrose pseudoinverse by Greville's column-recursive method, a
/// route with no code in common with pinv(); must agree entrywise.
BlockMatrix pinv_oracle(const BlockMatrix& m);

/// Order-k Moyal cochain for a constant structure, in the normalized X^a
/// basis: coefficient at (alpha,beta) is alpha! beta! / (k! 2^k) times the
/// [u^alpha v^beta] coefficient of (sum_ij w_ij u_i v_j)^k.  k = 0 gives the
/// multiplication cochain; k = 1 coincides with pi1.  Requires constant ps.
Cochain moyal_pi(int k, const PoissonStructure& ps);

/// Decide empirically which sign in the scalar rule
/// delta(1)+ = +-(1/nu(l)) delta(1)^T satisfies the four Moore-Penrose
/// axioms on each degree block, and whether one sign wins everywhere.
/// details is a JSON document with the per-degree table.
OracleReport check_u_formula(int n, const std::vector<MultiIndex>& degrees);

/// Closed-form degree-(e_i+e_j+e_k) blocks of Pi^2 (distinct i,j,k, zero
/// gauge): sum over triples of phi_ijk + phi_jki + phi_kij with
/// phi_ijk = 1/24 (d^l w_ij w_lk + d^l w_ik w_lj)(X^i f X^{jk} g + X^{jk} f X^i g).
Cochain paper_pi2_block(const PoissonStructure& ps);

} // namespace starq
