#include "starq/verify.hpp"

#include <json.hpp>

namespace starq {

namespace {

using Column = std::vector<Rational>;

Rational dot(const Column& a, const Column& b)
{
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

bool is_zero(const Column& a)
{
    for (const auto& q : a)
        if (q != 0) return false;
    return true;
}

} // namespace

// Greville: append columns one at a time, updating the pseudoinverse.
BlockMatrix pinv_oracle(const BlockMatrix& m)
{
    int rows = m.rows(), cols = m.cols();
    std::vector<Column> col(cols, Column(rows, Rational(0)));
    for (const auto& [rc, q] : m.entries()) col[rc.second][rc.first] = q;

    // pinv rows indexed by the columns consumed so far; each row has `rows` entries.
    std::vector<Column> pinv_rows;
    for (int k = 0; k < cols; ++k) {
        const Column& a = col[k];
        if (k == 0) {
            Rational g = dot(a, a);
            Column row(rows, Rational(0));
            if (g != 0)
                for (int i = 0; i < rows; ++i) row[i] = a[i] / g;
            pinv_rows.push_back(std::move(row));
            continue;
        }
        // d = A_{k-1}^+ a, c = a - A_{k-1} d
        Column d(k, Rational(0));
        for (int i = 0; i < k; ++i) d[i] = dot(pinv_rows[i], a);
        Column c = a;
        for (int i = 0; i < k; ++i) {
            if (d[i] == 0) continue;
            for (int r = 0; r < rows; ++r) c[r] -= col[i][r] * d[i];
        }
        Column b(rows, Rational(0));
        if (!is_zero(c)) {
            Rational g = dot(c, c);
            for (int r = 0; r < rows; ++r) b[r] = c[r] / g;
        } else {
            Rational g = 1 + dot(d, d);
            for (int i = 0; i < k; ++i) {
                if (d[i] == 0) continue;
                for (int r = 0; r < rows; ++r) b[r] += d[i] * pinv_rows[i][r] / g;
            }
        }
        for (int i = 0; i < k; ++i) {
            if (d[i] == 0) continue;
            for (int r = 0; r < rows; ++r) pinv_rows[i][r] -= d[i] * b[r];
        }
        pinv_rows.push_back(std::move(b));
    }

    BlockMatrix out(cols, rows);
    for (int i = 0; i < cols; ++i)
        for (int r = 0; r < rows; ++r)
            if (pinv_rows[i][r] != 0) out.set(i, r, pinv_rows[i][r]);
    out.row_basis = m.col_basis;
    out.col_basis = m.row_basis;
    return out;
}

Cochain moyal_pi(int k, const PoissonStructure& ps)
{
    if (k < 0) throw std::invalid_argument("moyal_pi: negative order");
    int n = ps.n;
    for (const auto& [ij, w] : ps.upper)
        if (w.total_degree() > 0)
            throw std::invalid_argument("moyal_pi requires a constant structure");

    // Expand (sum_{i != j} w_ij u_i v_j)^k in 2n variables u_1..u_n, v_1..v_n.
    Poly bilinear(2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            Rational w = ps.omega(i, j).coeff(MultiIndex::zero(n));
            if (w == 0) continue;
            MultiIndex e(2 * n);
            e[i] = 1;
            e[n + j] = 1;
            bilinear.add_term(std::move(e), w);
        }
    Poly power = Poly::constant(2 * n, 1);
    for (int s = 0; s < k; ++s) power = power * bilinear;

    Cochain out(2, n, k >= 1);
    Integer denom = factorial(static_cast<unsigned>(k));
    denom <<= k; // k! 2^k
    Rational scale = Rational(1) / Rational(denom);
    for (const auto& [e, q] : power.terms()) {
        std::vector<int> ac(e.components().begin(), e.components().begin() + n);
        std::vector<int> bc(e.components().begin() + n, e.components().end());
        MultiIndex alpha{std::move(ac)}, beta{std::move(bc)};
        Integer fact = 1;
        for (int i = 0; i < n; ++i)
            fact *= factorial(static_cast<unsigned>(alpha[i])) *
                    factorial(static_cast<unsigned>(beta[i]));
        out.add_term({alpha, beta}, Poly::constant(n, q * Rational(fact) * scale));
    }
    return out;
}

namespace {

bool mp_axioms_hold(const BlockMatrix& a, const BlockMatrix& x)
{
    BlockMatrix ax = a * x;
    BlockMatrix xa = x * a;
    return ax * a == a && xa * x == x && ax.transpose() == ax && xa.transpose() == xa;
}

} // namespace

OracleReport check_u_formula(int n, const std::vector<MultiIndex>& degrees)
{
    nlohmann::ordered_json doc;
    doc["name"] = "u_formula";
    doc["rule"] = "delta(1)+ = u * delta(1)^T with u = sign/nu(l) on the block C~1_l";
    doc["degrees"] = nlohmann::ordered_json::array();

    bool plus_all = true, minus_all = true;
    int adjudicated = 0;
    for (const auto& l : degrees) {
        if (l.dim() != n) throw std::invalid_argument("check_u_formula dimension mismatch");
        BlockMatrix delta = coboundary_matrix(1, l, true);
        long nu = proper_splitting_count(l);

        nlohmann::ordered_json row;
        row["l"] = l.components();
        row["nu"] = nu;
        if (nu == 0) {
            // |l| = 1: delta vanishes, both candidates are the zero map.
            row["degenerate"] = true;
            row["plus_mp"] = true;
            row["minus_mp"] = true;
            doc["degrees"].push_back(row);
            continue;
        }
        BlockMatrix reference = pinv(delta);
        bool plus_ok = false, minus_ok = false;
        for (int sign : {+1, -1}) {
            BlockMatrix cand = delta.transpose();
            BlockMatrix scaled(cand.rows(), cand.cols());
            for (const auto& [rc, q] : cand.entries())
                scaled.set(rc.first, rc.second, q * Rational(sign) / Rational(nu));
            bool ok = mp_axioms_hold(delta, scaled);
            if (sign > 0)
                plus_ok = ok;
            else
                minus_ok = ok;
            if (ok) row[sign > 0 ? "plus_matches_pinv" : "minus_matches_pinv"] =
                        (scaled == reference);
        }
        row["plus_mp"] = plus_ok;
        row["minus_mp"] = minus_ok;
        doc["degrees"].push_back(row);
        plus_all = plus_all && plus_ok;
        minus_all = minus_all && minus_ok;
        ++adjudicated;
    }

    OracleReport report;
    report.name = "u_formula";
    bool decided = adjudicated > 0 && (plus_all != minus_all);
    doc["adjudicated_blocks"] = adjudicated;
    doc["winner"] = !decided ? "undecided" : (plus_all ? "+1/nu" : "-1/nu");
    doc["consistent"] = decided;
    report.passed = decided;
    report.details = doc.dump(2) + "\n";
    return report;
}

Cochain paper_pi2_block(const PoissonStructure& ps)
{
    int n = ps.n;
    Cochain out(2, n, true);
    Rational c24(1, 24);
    auto phi = [&](int i, int j, int k) {
        Poly coeff(n);
        for (int l = 0; l < n; ++l) {
            MultiIndex el = MultiIndex::unit(n, l);
            coeff += xderiv(ps.omega(i, j), el) * ps.omega(l, k);
            coeff += xderiv(ps.omega(i, k), el) * ps.omega(l, j);
        }
        coeff = coeff * c24;
        if (coeff.is_zero()) return;
        MultiIndex ei = MultiIndex::unit(n, i);
        MultiIndex ejk = MultiIndex::unit(n, j) + MultiIndex::unit(n, k);
        out.add_term({ei, ejk}, coeff);
        out.add_term({ejk, ei}, coeff);
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                phi(i, j, k);
                phi(j, k, i);
                phi(k, i, j);
            }
    return out;
}

} // namespace starq
