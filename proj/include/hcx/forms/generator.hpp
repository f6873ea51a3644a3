#pragma once

#include <cstdint>

#include "hcx/forms/form_pair.hpp"
#include "hcx/linalg/rng.hpp"

namespace hcx {

/// Orthonormalizes the columns of a square matrix (modified Gram-Schmidt, two passes).
inline DenseMatrix orthonormalize_columns(const DenseMatrix& a) {
    const std::size_t n = a.rows(), k = a.cols();
    DenseMatrix q(n, k);
    std::vector<Vector> done;
    for (std::size_t j = 0; j < k; ++j) {
        Vector v = a.column(j);
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& u : done) axpy(-dot(v, u), u, v);
        const double nv = norm2(v);
        require(nv > 1e-8, ErrorCode::InvalidArgument, "columns are numerically dependent");
        scale(1.0 / nv, v);
        q.set_column(j, v);
        done.push_back(std::move(v));
    }
    return q;
}

/// Random form pair satisfying every assumption by construction:
/// [B | Q] random orthonormal, S1 = Q D Q^T with D ~ U[0.5, 2],
/// S2 = G^T G + 0.1 I with G ~ U[-1, 1].
inline FormPair random_form_pair(std::size_t n, std::size_t m, std::uint64_t seed) {
    if (m < 1 || m >= n)
        throw Error(ErrorCode::InvalidDimensions,
                    "random_form_pair needs 1 <= m < n, got n=" + std::to_string(n) + " m=" + std::to_string(m));
    Rng rng(seed);
    DenseMatrix z(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) z(i, j) = rng.normal();
    const DenseMatrix ortho = orthonormalize_columns(z);

    DenseMatrix b(n, m), q(n, n - m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) b(i, j) = ortho(i, j);
        for (std::size_t j = m; j < n; ++j) q(i, j - m) = ortho(i, j);
    }
    const Vector d = rng.uniform_vector(n - m, 0.5, 2.0);
    const DenseMatrix s1 = q * DenseMatrix::diagonal(d) * q.transpose();

    const DenseMatrix g = rng.uniform_matrix(n, n, -1.0, 1.0);
    const DenseMatrix s2 = g.transpose() * g + 0.1 * DenseMatrix::identity(n);

    return FormPair(SymMatrix::from_dense(s1), SymMatrix::from_dense(s2), Basis::from_columns(b));
}

}  // namespace hcx
