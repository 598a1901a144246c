#include "starq/blocksolve.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <mutex>
#include <sstream>

namespace starq {

namespace {

// Dense rational matrix, row-major; internal to the elimination routines.
struct Dense {
    int rows = 0;
    int cols = 0;
    std::vector<Rational> a;

    Dense(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}
    Rational& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    const Rational& at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

Dense to_dense(const BlockMatrix& m)
{
    Dense d(m.rows(), m.cols());
    for (const auto& [rc, q] : m.entries()) d.at(rc.first, rc.second) = q;
    return d;
}

BlockMatrix from_dense(const Dense& d)
{
    BlockMatrix m(d.rows, d.cols);
    for (int r = 0; r < d.rows; ++r)
        for (int c = 0; c < d.cols; ++c)
            if (d.at(r, c) != 0) m.set(r, c, d.at(r, c));
    return m;
}

Dense mul(const Dense& a, const Dense& b)
{
    Dense r(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            const Rational& aik = a.at(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < b.cols; ++j) {
                const Rational& bkj = b.at(k, j);
                if (bkj != 0) r.at(i, j) += aik * bkj;
            }
        }
    return r;
}

Dense transpose(const Dense& a)
{
    Dense t(a.cols, a.rows);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) t.at(j, i) = a.at(i, j);
    return t;
}

// In-place reduced row echelon form; returns the pivot column indices.
std::vector<int> rref(Dense& m)
{
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
        int pr = -1;
        for (int i = r; i < m.rows; ++i)
            if (m.at(i, c) != 0) { pr = i; break; }
        if (pr < 0) continue;
        if (pr != r)
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(pr, j), m.at(r, j));
        Rational inv = 1 / m.at(r, c);
        for (int j = c; j < m.cols; ++j) m.at(r, j) *= inv;
        for (int i = 0; i < m.rows; ++i) {
            if (i == r || m.at(i, c) == 0) continue;
            Rational f = m.at(i, c);
            for (int j = c; j < m.cols; ++j) m.at(i, j) -= f * m.at(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

// Inverse of a square nonsingular matrix by Gauss-Jordan.
Dense invert(const Dense& m)
{
    int n = m.rows;
    Dense aug(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, n + i) = 1;
    }
    auto pivots = rref(aug);
    if (static_cast<int>(pivots.size()) != n)
        throw std::logic_error("invert: singular matrix");
    Dense inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv.at(i, j) = aug.at(i, n + j);
    return inv;
}

Eigen::MatrixXd to_eigen(const BlockMatrix& m)
{
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(m.rows(), m.cols());
    for (const auto& [rc, q] : m.entries()) e(rc.first, rc.second) = q.get_d();
    return e;
}

// Q^a_{bc} = -[b+c=a] + [b=0][c=a] + [c=0][b=a].
int q_sign(const MultiIndex& a, const MultiIndex& b, const MultiIndex& c)
{
    int v = 0;
    if (b + c == a) v -= 1;
    if (b.is_zero() && c == a) v += 1;
    if (c.is_zero() && b == a) v += 1;
    return v;
}

} // namespace

std::shared_ptr<const BlockBasis> BlockBasis::make(int p, const MultiIndex& l, bool tilde)
{
    auto basis = std::make_shared<BlockBasis>();
    basis->p = p;
    basis->l = l;
    basis->tilde = tilde;
    basis->tuples = compositions(l, p, tilde);
    for (int i = 0; i < basis->size(); ++i) basis->index[basis->tuples[i]] = i;
    return basis;
}

BlockMatrix operator*(const BlockMatrix& a, const BlockMatrix& b)
{
    if (a.cols() != b.rows())
        throw std::invalid_argument("block matrix product shape mismatch");
    // Group b's entries by row for the sparse product.
    std::vector<std::vector<std::pair<int, const Rational*>>> brows(b.rows());
    for (const auto& [rc, q] : b.entries()) brows[rc.first].push_back({rc.second, &q});
    BlockMatrix r(a.rows(), b.cols());
    for (const auto& [rc, q] : a.entries())
        for (const auto& [j, bq] : brows[rc.second]) r.add_at(rc.first, j, q * (*bq));
    r.row_basis = a.row_basis;
    r.col_basis = b.col_basis;
    return r;
}

BlockMatrix operator+(const BlockMatrix& a, const BlockMatrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("block matrix sum shape mismatch");
    BlockMatrix r = a;
    for (const auto& [rc, q] : b.entries()) r.add_at(rc.first, rc.second, q);
    return r;
}

BlockMatrix operator-(const BlockMatrix& a, const BlockMatrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("block matrix difference shape mismatch");
    BlockMatrix r = a;
    for (const auto& [rc, q] : b.entries()) r.add_at(rc.first, rc.second, -q);
    return r;
}

std::vector<Poly> apply_matrix(const BlockMatrix& m, const std::vector<Poly>& v)
{
    if (static_cast<int>(v.size()) != m.cols())
        throw std::invalid_argument("apply_matrix: vector length mismatch");
    int n = 0;
    for (const auto& f : v)
        if (f.dim() > 0) { n = f.dim(); break; }
    std::vector<Poly> r(m.rows(), Poly::zero(n));
    for (const auto& [rc, q] : m.entries()) r[rc.first] += v[rc.second] * q;
    return r;
}

MatrixD to_double(const BlockMatrix& m)
{
    MatrixD d(m.rows(), m.cols());
    for (const auto& [rc, q] : m.entries()) d.at(rc.first, rc.second) = q.get_d();
    return d;
}

double max_abs_diff(const MatrixD& a, const MatrixD& b)
{
    if (a.rows != b.rows || a.cols != b.cols)
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.a.size(); ++i) m = std::max(m, std::abs(a.a[i] - b.a[i]));
    return m;
}

BlockMatrix coboundary_matrix(int p, const MultiIndex& l, bool tilde)
{
    if (p < 1) throw std::invalid_argument("coboundary_matrix: p must be >= 1");
    auto src = BlockBasis::make(p, l, tilde);
    auto dst = BlockBasis::make(p + 1, l, tilde);
    BlockMatrix m(dst->size(), src->size());
    m.row_basis = dst;
    m.col_basis = src;
    for (int j = 0; j < src->size(); ++j) {
        const CochainKey& a = src->tuples[j];
        for (int i = 0; i < dst->size(); ++i) {
            const CochainKey& b = dst->tuples[i];
            long e = 0;
            for (int k = 0; k < p; ++k) {
                bool match = true;
                for (int t = 0; t < k && match; ++t) match = (a[t] == b[t]);
                for (int t = k + 1; t < p && match; ++t) match = (a[t] == b[t + 1]);
                if (!match) continue;
                int q = q_sign(a[k], b[k], b[k + 1]);
                e += (k % 2 == 0) ? q : -q;
            }
            if (e != 0) m.set(i, j, e);
        }
    }
    return m;
}

BlockMatrix pinv(const BlockMatrix& m)
{
    Dense d = to_dense(m);
    Dense r = d;
    std::vector<int> pivots = rref(r);
    int k = static_cast<int>(pivots.size());

    BlockMatrix out;
    if (k == 0) {
        out = BlockMatrix(m.cols(), m.rows());
    } else {
        Dense g(k, m.cols());
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < m.cols(); ++j) g.at(i, j) = r.at(i, j);
        Dense f(m.rows(), k);
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < k; ++j) f.at(i, j) = d.at(i, pivots[j]);

        Dense gt = transpose(g);
        Dense ft = transpose(f);
        Dense ggt_inv = invert(mul(g, gt));
        Dense ftf_inv = invert(mul(ft, f));
        out = from_dense(mul(mul(gt, ggt_inv), mul(ftf_inv, ft)));
    }
    out.row_basis = m.col_basis;
    out.col_basis = m.row_basis;
    return out;
}

MatrixD pinv_tikhonov(const BlockMatrix& m, double alpha)
{
    if (!(alpha > 0)) throw std::invalid_argument("pinv_tikhonov: alpha must be positive");
    Eigen::MatrixXd md = to_eigen(m);
    Eigen::MatrixXd gram = alpha * alpha * Eigen::MatrixXd::Identity(m.cols(), m.cols()) +
                           md.transpose() * md;
    Eigen::MatrixXd x = gram.ldlt().solve(md.transpose());
    MatrixD out(m.cols(), m.rows());
    for (int i = 0; i < out.rows; ++i)
        for (int j = 0; j < out.cols; ++j) out.at(i, j) = x(i, j);
    return out;
}

int rank(const BlockMatrix& m)
{
    Dense d = to_dense(m);
    return static_cast<int>(rref(d).size());
}

Projectors projectors(int p, const MultiIndex& l, bool tilde)
{
    auto out_block = cached_block(p, l, tilde);
    int dim = out_block->source->size();

    Projectors pr;
    pr.ker_perp = out_block->delta_pinv * out_block->delta;
    pr.ker = BlockMatrix::identity(dim) - pr.ker_perp;
    if (p >= 2) {
        auto in_block = cached_block(p - 1, l, tilde);
        pr.im = in_block->delta * in_block->delta_pinv;
    } else {
        // The coboundary vanishes on 0-cochains, so nothing maps onto C^1.
        pr.im = BlockMatrix(dim, dim);
    }
    pr.harmonic = pr.ker - pr.im;
    return pr;
}

int cohomology_dim(int p, const MultiIndex& l, bool tilde)
{
    return rank(projectors(p, l, tilde).harmonic);
}

ObstructionError::ObstructionError(MultiIndex degree, std::vector<Poly> residual, int order)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "no solution on degree block l=" << degree.to_string();
          if (order > 0) os << " at order " << order;
          os << ": the right-hand side is not in the image of the coboundary;"
             << " a different lower-order cocycle choice may be required";
          return os.str();
      }()),
      degree_(std::move(degree)), residual_(std::move(residual)), order_(order)
{
}

std::vector<Poly> solve_block(int p, const MultiIndex& l, bool tilde,
                              const std::vector<Poly>& psi)
{
    auto block = cached_block(p, l, tilde);
    if (static_cast<int>(psi.size()) != block->target->size())
        throw std::invalid_argument("solve_block: rhs length does not match the (p+1)-basis");
    std::vector<Poly> phi = apply_matrix(block->delta_pinv, psi);
    std::vector<Poly> back = apply_matrix(block->delta, phi);
    std::vector<Poly> residual;
    bool consistent = true;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        Poly r = psi[i] - back[i];
        if (!r.is_zero()) consistent = false;
        residual.push_back(std::move(r));
    }
    if (!consistent) throw ObstructionError(l, std::move(residual));
    return phi;
}

std::shared_ptr<const BlockData> cached_block(int p, const MultiIndex& l, bool tilde)
{
    using CacheKey = std::tuple<int, std::vector<int>, bool>;
    static std::map<CacheKey, std::shared_ptr<const BlockData>> cache;
    static std::mutex mutex;

    CacheKey key{p, l.components(), tilde};
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }

    auto data = std::make_shared<BlockData>();
    data->delta = coboundary_matrix(p, l, tilde);
    data->source = data->delta.col_basis;
    data->target = data->delta.row_basis;
    data->delta_pinv = pinv(data->delta);

    std::lock_guard<std::mutex> lock(mutex);
    auto [it, inserted] = cache.emplace(key, std::move(data));
    return it->second; // first insertion wins; identical values either way
}

} // namespace starq
