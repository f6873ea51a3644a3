#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "hcx/linalg/dense.hpp"

namespace hcx {

/// Orthonormal basis of an m-dimensional subspace of R^n, stored as the
/// columns of an n x m matrix. Coordinate bases (subsets of the identity)
/// remember their indices so callers can work on submatrices directly.
class Basis {
public:
    Basis() = default;

    static Basis empty(std::size_t n) {
        Basis b;
        b.columns_ = DenseMatrix(n, 0);
        b.coordinate_ = std::vector<std::size_t>{};
        return b;
    }

    /// Throws NotOrthonormal unless B^T B = I to 1e-12.
    static Basis from_columns(DenseMatrix columns, double tol = 1e-12) {
        const std::size_t m = columns.cols();
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i; j < m; ++j) {
                double s = 0.0;
                for (std::size_t r = 0; r < columns.rows(); ++r) s += columns(r, i) * columns(r, j);
                const double target = i == j ? 1.0 : 0.0;
                if (std::abs(s - target) > tol)
                    throw Error(ErrorCode::NotOrthonormal,
                                "column pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
            }
        Basis b;
        b.columns_ = std::move(columns);
        return b;
    }

    static Basis coordinate(std::size_t n, std::vector<std::size_t> indices) {
        std::sort(indices.begin(), indices.end());
        require(std::adjacent_find(indices.begin(), indices.end()) == indices.end(), ErrorCode::InvalidArgument,
                "duplicate coordinate index");
        Basis b;
        b.columns_ = DenseMatrix(n, indices.size());
        for (std::size_t k = 0; k < indices.size(); ++k) {
            require(indices[k] < n, ErrorCode::InvalidDimensions, "coordinate index out of range");
            b.columns_(indices[k], k) = 1.0;
        }
        b.coordinate_ = std::move(indices);
        return b;
    }

    std::size_t ambient_dim() const noexcept { return columns_.rows(); }
    std::size_t dim() const noexcept { return columns_.cols(); }
    const DenseMatrix& columns() const noexcept { return columns_; }
    Vector column(std::size_t j) const { return columns_.column(j); }

    bool is_coordinate() const noexcept { return coordinate_.has_value(); }
    const std::vector<std::size_t>& indices() const { return *coordinate_; }

    /// B^T x
    Vector coefficients(ConstVec x) const {
        require(x.size() == ambient_dim(), ErrorCode::DimensionMismatch, "Basis::coefficients");
        if (coordinate_) {
            Vector y(dim());
            for (std::size_t k = 0; k < dim(); ++k) y[k] = x[(*coordinate_)[k]];
            return y;
        }
        return columns_.apply_transpose(x);
    }

    /// B y
    Vector expand(ConstVec y) const {
        require(y.size() == dim(), ErrorCode::DimensionMismatch, "Basis::expand");
        if (coordinate_) {
            Vector x(ambient_dim(), 0.0);
            for (std::size_t k = 0; k < dim(); ++k) x[(*coordinate_)[k]] = y[k];
            return x;
        }
        return columns_.apply(y);
    }

    /// P1 x = B B^T x
    Vector project(ConstVec x) const { return expand(coefficients(x)); }

    /// (I - B B^T) x
    Vector project_out(ConstVec x) const { return subtract(x, project(x)); }

private:
    DenseMatrix columns_;
    std::optional<std::vector<std::size_t>> coordinate_;
};

/// Orthonormal basis of the orthogonal complement of span(B).
///
/// Coordinate bases map to the complementary coordinates. Otherwise a
/// pivoted Gram-Schmidt runs over the columns of I - B B^T, always taking the
/// candidate with the largest remaining norm, with two orthogonalization passes.
inline Basis orthonormal_complement(const Basis& b) {
    const std::size_t n = b.ambient_dim(), m = b.dim();
    if (b.is_coordinate()) {
        std::vector<bool> taken(n, false);
        for (auto i : b.indices()) taken[i] = true;
        std::vector<std::size_t> rest;
        for (std::size_t i = 0; i < n; ++i)
            if (!taken[i]) rest.push_back(i);
        return Basis::coordinate(n, rest);
    }

    std::vector<Vector> accepted;
    for (std::size_t j = 0; j < m; ++j) accepted.push_back(b.column(j));

    // candidate residuals r_i = (I - B B^T) e_i
    std::vector<Vector> cand(n);
    for (std::size_t i = 0; i < n; ++i) {
        Vector e(n, 0.0);
        e[i] = 1.0;
        cand[i] = b.project_out(e);
    }
    std::vector<bool> used(n, false);
    DenseMatrix q(n, n - m);
    for (std::size_t k = 0; k < n - m; ++k) {
        std::size_t best = n;
        double best_norm = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (used[i]) continue;
            const double nr = norm2(cand[i]);
            if (nr > best_norm) {
                best_norm = nr;
                best = i;
            }
        }
        used[best] = true;
        Vector u = cand[best];
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& a : accepted) axpy(-dot(u, a), a, u);
        scale(1.0 / norm2(u), u);
        for (std::size_t i = 0; i < n; ++i)
            if (!used[i]) axpy(-dot(u, cand[i]), u, cand[i]);
        q.set_column(k, u);
        accepted.push_back(std::move(u));
    }
    return Basis::from_columns(std::move(q), 1e-10);
}

}  // namespace hcx
