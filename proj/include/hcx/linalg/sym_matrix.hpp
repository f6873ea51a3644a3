#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "hcx/linalg/dense.hpp"

namespace hcx {

/// Problems up to this dimension are stored and factored densely.
inline constexpr std::size_t kDenseLimit = 512;

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

enum class Layout { Automatic, Dense, Sparse };

/// Real symmetric matrix, dense for small n and CSR (full pattern) otherwise.
///
/// Construction enforces symmetry by mirroring the upper triangle, so the
/// stored matrix is exactly symmetric. Non-finite entries are rejected.
class SymMatrix {
public:
    SymMatrix() = default;

    static SymMatrix zeros(std::size_t n, Layout layout = Layout::Automatic) {
        return from_triplets(n, {}, layout);
    }

    static SymMatrix identity(std::size_t n, Layout layout = Layout::Automatic) {
        std::vector<Triplet> t;
        t.reserve(n);
        for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, 1.0});
        return from_triplets(n, t, layout);
    }

    static SymMatrix from_dense(const DenseMatrix& m, Layout layout = Layout::Automatic) {
        require(m.rows() == m.cols(), ErrorCode::InvalidDimensions, "SymMatrix needs a square matrix");
        const std::size_t n = m.rows();
        if (resolve(layout, n) == Layout::Dense) {
            SymMatrix s;
            s.n_ = n;
            s.dense_ = DenseMatrix(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i; j < n; ++j) {
                    const double v = m(i, j);
                    require(std::isfinite(v), ErrorCode::NonFinite, "SymMatrix entry");
                    s.dense_(i, j) = v;
                    s.dense_(j, i) = v;
                }
            s.layout_ = Layout::Dense;
            return s;
        }
        std::vector<Triplet> t;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j)
                if (m(i, j) != 0.0) t.push_back({i, j, m(i, j)});
        return from_upper(n, t, Layout::Sparse);
    }

    /// Sums duplicate triplets; lower-triangle triplets are folded onto the
    /// upper triangle only when no upper counterpart exists (assembly passes
    /// both triangles, which then agree).
    static SymMatrix from_triplets(std::size_t n, const std::vector<Triplet>& triplets,
                                   Layout layout = Layout::Automatic) {
        std::map<std::pair<std::size_t, std::size_t>, double> upper, lower;
        for (const auto& t : triplets) {
            require(t.row < n && t.col < n, ErrorCode::InvalidDimensions, "triplet index out of range");
            if (t.row <= t.col)
                upper[{t.row, t.col}] += t.value;
            else
                lower[{t.col, t.row}] += t.value;
        }
        for (const auto& [key, v] : lower)
            if (!upper.contains(key)) upper[key] = v;
        std::vector<Triplet> ut;
        ut.reserve(upper.size());
        for (const auto& [key, v] : upper) ut.push_back({key.first, key.second, v});
        return from_upper(n, ut, layout);
    }

    std::size_t size() const noexcept { return n_; }
    bool is_dense() const noexcept { return layout_ == Layout::Dense; }
    Layout layout() const noexcept { return layout_; }

    void apply(ConstVec x, MutVec y) const {
        require(x.size() == n_ && y.size() == n_, ErrorCode::DimensionMismatch, "SymMatrix::apply");
        if (is_dense()) {
            for (std::size_t i = 0; i < n_; ++i) {
                const ConstVec r = dense_.row(i);
                double s = 0.0;
                for (std::size_t j = 0; j < n_; ++j) s += r[j] * x[j];
                y[i] = s;
            }
            return;
        }
        for (std::size_t i = 0; i < n_; ++i) {
            double s = 0.0;
            for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) s += values_[p] * x[col_idx_[p]];
            y[i] = s;
        }
    }

    Vector apply(ConstVec x) const {
        Vector y(n_);
        apply(x, y);
        return y;
    }

    double operator()(std::size_t i, std::size_t j) const {
        if (is_dense()) return dense_(i, j);
        const auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
        const auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
        const auto it = std::lower_bound(first, last, j);
        if (it == last || *it != j) return 0.0;
        return values_[static_cast<std::size_t>(it - col_idx_.begin())];
    }

    DenseMatrix to_dense() const {
        if (is_dense()) return dense_;
        DenseMatrix d(n_, n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) d(i, col_idx_[p]) = values_[p];
        return d;
    }

    /// Upper-triangle entries (i <= j), row-major order.
    std::vector<Triplet> upper_triplets() const {
        std::vector<Triplet> t;
        for (std::size_t i = 0; i < n_; ++i) {
            if (is_dense()) {
                for (std::size_t j = i; j < n_; ++j)
                    if (dense_(i, j) != 0.0) t.push_back({i, j, dense_(i, j)});
            } else {
                for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
                    if (col_idx_[p] >= i && values_[p] != 0.0) t.push_back({i, col_idx_[p], values_[p]});
            }
        }
        return t;
    }

    Vector diagonal() const {
        Vector d(n_);
        for (std::size_t i = 0; i < n_; ++i) d[i] = (*this)(i, i);
        return d;
    }

    double max_abs() const {
        if (is_dense()) return dense_.max_abs();
        double m = 0.0;
        for (double v : values_) m = std::max(m, std::abs(v));
        return m;
    }

    double frobenius() const { return is_dense() ? dense_.frobenius() : norm2(values_); }

    std::size_t nonzeros() const {
        if (!is_dense()) return values_.size();
        return static_cast<std::size_t>(
            std::count_if(dense_.data().begin(), dense_.data().end(), [](double v) { return v != 0.0; }));
    }

    /// a*A + b*B; the result is dense only if both operands are.
    static SymMatrix combine(double a, const SymMatrix& A, double b, const SymMatrix& B) {
        require(A.n_ == B.n_, ErrorCode::DimensionMismatch, "SymMatrix::combine");
        if (A.is_dense() && B.is_dense()) {
            SymMatrix s;
            s.n_ = A.n_;
            s.layout_ = Layout::Dense;
            s.dense_ = a * A.dense_ + b * B.dense_;
            return s;
        }
        std::vector<Triplet> t;
        for (auto e : A.upper_triplets()) t.push_back({e.row, e.col, a * e.value});
        for (auto e : B.upper_triplets()) t.push_back({e.row, e.col, b * e.value});
        return from_triplets(A.n_, t, Layout::Sparse);
    }

    SymMatrix scaled(double c) const {
        SymMatrix s = *this;
        if (is_dense())
            s.dense_ = c * s.dense_;
        else
            for (double& v : s.values_) v *= c;
        return s;
    }

    /// Principal submatrix on `index` (in the given order).
    SymMatrix principal_submatrix(const std::vector<std::size_t>& index,
                                  Layout layout = Layout::Automatic) const {
        std::vector<std::ptrdiff_t> where(n_, -1);
        for (std::size_t k = 0; k < index.size(); ++k) {
            require(index[k] < n_, ErrorCode::InvalidDimensions, "submatrix index");
            where[index[k]] = static_cast<std::ptrdiff_t>(k);
        }
        std::vector<Triplet> t;
        for (auto e : upper_triplets()) {
            const auto a = where[e.row], b = where[e.col];
            if (a < 0 || b < 0) continue;
            t.push_back({static_cast<std::size_t>(std::min(a, b)), static_cast<std::size_t>(std::max(a, b)), e.value});
        }
        return from_upper(index.size(), t, layout);
    }

private:
    static Layout resolve(Layout layout, std::size_t n) {
        if (layout != Layout::Automatic) return layout;
        return n <= kDenseLimit ? Layout::Dense : Layout::Sparse;
    }

    // triplets must satisfy row <= col and be free of duplicates
    static SymMatrix from_upper(std::size_t n, const std::vector<Triplet>& upper, Layout layout) {
        SymMatrix s;
        s.n_ = n;
        s.layout_ = resolve(layout, n);
        for (const auto& t : upper) require(std::isfinite(t.value), ErrorCode::NonFinite, "SymMatrix entry");
        if (s.layout_ == Layout::Dense) {
            s.dense_ = DenseMatrix(n, n);
            for (const auto& t : upper) {
                s.dense_(t.row, t.col) += t.value;
                if (t.row != t.col) s.dense_(t.col, t.row) += t.value;
            }
            return s;
        }
        std::vector<std::vector<std::pair<std::size_t, double>>> rows(n);
        for (const auto& t : upper) {
            rows[t.row].push_back({t.col, t.value});
            if (t.row != t.col) rows[t.col].push_back({t.row, t.value});
        }
        s.row_ptr_.assign(n + 1, 0);
        for (std::size_t i = 0; i < n; ++i) {
            auto& r = rows[i];
            std::sort(r.begin(), r.end());
            for (const auto& [j, v] : r) {
                if (!s.col_idx_.empty() && s.col_idx_.size() > s.row_ptr_[i] && s.col_idx_.back() == j) {
                    s.values_.back() += v;
                } else {
                    s.col_idx_.push_back(j);
                    s.values_.push_back(v);
                }
            }
            s.row_ptr_[i + 1] = s.col_idx_.size();
        }
        return s;
    }

    std::size_t n_ = 0;
    Layout layout_ = Layout::Dense;
    DenseMatrix dense_;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<std::size_t> col_idx_;
    std::vector<double> values_;
};

}  // namespace hcx
