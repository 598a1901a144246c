#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "starq/cochain.hpp"

namespace starq {

/// Ordered fiber basis of C^p_l (tilde: no zero slot), tuples in the
/// canonical lexicographic order from compositions().
struct BlockBasis {
    int p = 1;
    MultiIndex l;
    bool tilde = false;
    std::vector<CochainKey> tuples;
    std::map<CochainKey, int> index;

    static std::shared_ptr<const BlockBasis> make(int p, const MultiIndex& l, bool tilde);

    int size() const { return static_cast<int>(tuples.size()); }

    int index_of(const CochainKey& key) const
    {
        auto it = index.find(key);
        return it == index.end() ? -1 : it->second;
    }
};

/// Sparse exact rational matrix over a pair of block bases.  Row/column
/// basis references are optional; derived matrices (products, projectors)
/// may leave them empty.
class BlockMatrix {
public:
    using EntryMap = std::map<std::pair<int, int>, Rational>;

    BlockMatrix() = default;
    BlockMatrix(int rows, int cols) : rows_(rows), cols_(cols) {}

    static BlockMatrix identity(int n)
    {
        BlockMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.set(i, i, 1);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const EntryMap& entries() const { return entries_; }
    bool is_zero() const { return entries_.empty(); }

    Rational at(int r, int c) const
    {
        auto it = entries_.find({r, c});
        return it == entries_.end() ? Rational(0) : it->second;
    }

    void set(int r, int c, const Rational& q)
    {
        check_pos(r, c);
        if (q == 0)
            entries_.erase({r, c});
        else
            entries_[{r, c}] = q;
    }

    void add_at(int r, int c, const Rational& q)
    {
        check_pos(r, c);
        auto [it, inserted] = entries_.emplace(std::pair{r, c}, q);
        if (!inserted) {
            it->second += q;
            if (it->second == 0) entries_.erase(it);
        }
    }

    BlockMatrix transpose() const
    {
        BlockMatrix t(cols_, rows_);
        for (const auto& [rc, q] : entries_) t.entries_[{rc.second, rc.first}] = q;
        t.row_basis = col_basis;
        t.col_basis = row_basis;
        return t;
    }

    friend BlockMatrix operator*(const BlockMatrix& a, const BlockMatrix& b);
    friend BlockMatrix operator+(const BlockMatrix& a, const BlockMatrix& b);
    friend BlockMatrix operator-(const BlockMatrix& a, const BlockMatrix& b);

    bool operator==(const BlockMatrix& b) const
    {
        return rows_ == b.rows_ && cols_ == b.cols_ && entries_ == b.entries_;
    }

    std::shared_ptr<const BlockBasis> row_basis;
    std::shared_ptr<const BlockBasis> col_basis;

private:
    void check_pos(int r, int c) const
    {
        if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
            throw std::out_of_range("block matrix index out of range");
    }

    int rows_ = 0;
    int cols_ = 0;
    EntryMap entries_;
};

/// Matrix-vector product over the polynomial ring, entry-wise exact.
std::vector<Poly> apply_matrix(const BlockMatrix& m, const std::vector<Poly>& v);

/// Dense double matrix, row-major; used only by the floating cross-checks.
struct MatrixD {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    MatrixD() = default;
    MatrixD(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}
    double& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

MatrixD to_double(const BlockMatrix& m);
double max_abs_diff(const MatrixD& a, const MatrixD& b);

/// Matrix of the coboundary C^p_l -> C^{p+1}_l in the canonical bases.
/// Columns are indexed by the source p-tuples, rows by the target
/// (p+1)-tuples; entries come from the slot-replacement sign rule.
BlockMatrix coboundary_matrix(int p, const MultiIndex& l, bool tilde);

/// Exact Moore-Penrose pseudoinverse via full-rank factorization
/// M = F G, M+ = G^T (G G^T)^{-1} (F^T F)^{-1} F^T.
BlockMatrix pinv(const BlockMatrix& m);

/// Tikhonov-regularized approximation (alpha^2 I + M^T M)^{-1} M^T in
/// floating point; converges to pinv(m) entrywise as alpha -> 0.
MatrixD pinv_tikhonov(const BlockMatrix& m, double alpha);

/// Exact rank over the rationals.
int rank(const BlockMatrix& m);

/// Orthogonal projectors on C^p_l: onto Ker delta, (Ker delta)^perp,
/// Im delta, and the cohomology H^p_l = Ker/Im complement.
struct Projectors {
    BlockMatrix ker;
    BlockMatrix ker_perp;
    BlockMatrix im;
    BlockMatrix harmonic;
};

Projectors projectors(int p, const MultiIndex& l, bool tilde);

/// dim H^p_l = rank of the harmonic projector.
int cohomology_dim(int p, const MultiIndex& l, bool tilde);

/// Raised when a right-hand side is not in the image of the coboundary on
/// its degree block; carries the block degree and the exact residual.
class ObstructionError : public std::runtime_error {
public:
    ObstructionError(MultiIndex degree, std::vector<Poly> residual, int order = -1);

    const MultiIndex& degree() const { return degree_; }
    const std::vector<Poly>& residual() const { return residual_; }
    int order() const { return order_; }

private:
    MultiIndex degree_;
    std::vector<Poly> residual_;
    int order_;
};

/// Minimal-norm solution of delta Phi = Psi on the degree block (p, l):
/// returns Delta+ Psi over the p-basis after verifying exactly that
/// Delta (Delta+ Psi) = Psi.  Psi is indexed by the canonical (p+1)-basis.
std::vector<Poly> solve_block(int p, const MultiIndex& l, bool tilde,
                              const std::vector<Poly>& psi);

/// Cached coboundary matrix and pseudoinverse for one degree block.
/// Blocks are reused across orders and safe to request concurrently.
struct BlockData {
    std::shared_ptr<const BlockBasis> source;
    std::shared_ptr<const BlockBasis> target;
    BlockMatrix delta;
    BlockMatrix delta_pinv;
};

std::shared_ptr<const BlockData> cached_block(int p, const MultiIndex& l, bool tilde);

} // namespace starq
