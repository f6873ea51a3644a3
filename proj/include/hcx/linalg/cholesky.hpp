#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "hcx/linalg/sym_matrix.hpp"

namespace hcx {

/// Dense lower-triangular Cholesky factor, M = L L^T.
class CholeskyFactor {
public:
    CholeskyFactor() = default;

    /// Throws NotPositiveDefinite when a pivot drops to n * 1e-14 * max diag.
    static CholeskyFactor factor(const DenseMatrix& m) {
        require(m.rows() == m.cols(), ErrorCode::InvalidDimensions, "cholesky needs a square matrix");
        const std::size_t n = m.rows();
        double max_diag = 0.0;
        for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(m(i, i)));
        const double floor = static_cast<double>(n) * 1e-14 * max_diag;

        CholeskyFactor f;
        f.lower_ = DenseMatrix(n, n);
        DenseMatrix& L = f.lower_;
        for (std::size_t j = 0; j < n; ++j) {
            double d = m(j, j);
            for (std::size_t k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
            if (!(d > floor))
                throw Error(ErrorCode::NotPositiveDefinite,
                            "pivot " + std::to_string(j) + " = " + std::to_string(d));
            const double ljj = std::sqrt(d);
            L(j, j) = ljj;
            for (std::size_t i = j + 1; i < n; ++i) {
                double s = m(i, j);
                const ConstVec ri = L.row(i), rj = L.row(j);
                for (std::size_t k = 0; k < j; ++k) s -= ri[k] * rj[k];
                L(i, j) = s / ljj;
            }
        }
        return f;
    }

    static CholeskyFactor factor(const SymMatrix& m) { return factor(m.to_dense()); }

    std::size_t size() const noexcept { return lower_.rows(); }
    const DenseMatrix& lower() const noexcept { return lower_; }

    /// Solves L L^T x = b in place.
    void solve_in_place(MutVec b) const {
        const std::size_t n = size();
        require(b.size() == n, ErrorCode::DimensionMismatch, "CholeskyFactor::solve");
        for (std::size_t i = 0; i < n; ++i) {
            double s = b[i];
            const ConstVec r = lower_.row(i);
            for (std::size_t k = 0; k < i; ++k) s -= r[k] * b[k];
            b[i] = s / r[i];
        }
        for (std::size_t i = n; i-- > 0;) {
            double s = b[i];
            for (std::size_t k = i + 1; k < n; ++k) s -= lower_(k, i) * b[k];
            b[i] = s / lower_(i, i);
        }
    }

    Vector solve(ConstVec b) const {
        Vector x(b.begin(), b.end());
        solve_in_place(x);
        return x;
    }

    DenseMatrix reconstruct() const { return lower_ * lower_.transpose(); }

private:
    DenseMatrix lower_;
};

inline CholeskyFactor cholesky(const SymMatrix& m) { return CholeskyFactor::factor(m); }

}  // namespace hcx
