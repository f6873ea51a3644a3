#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "hcx/linalg/rng.hpp"
#include "hcx/linalg/sym_matrix.hpp"

namespace hcx {

struct SymEigen {
    Vector values;       ///< ascending
    DenseMatrix vectors;  ///< column i pairs with values[i]; empty unless requested
};

/// Cyclic Jacobi eigensolver for a dense symmetric matrix.
inline SymEigen jacobi_eigen(DenseMatrix a, bool want_vectors = false, std::size_t max_sweeps = 100) {
    require(a.rows() == a.cols(), ErrorCode::InvalidDimensions, "jacobi_eigen needs a square matrix");
    const std::size_t n = a.rows();
    DenseMatrix v = want_vectors ? DenseMatrix::identity(n) : DenseMatrix();
    const double scale = a.frobenius();

    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off == 0.0 || std::sqrt(off) <= 1e-16 * scale) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double app = a(p, p), aqq = a(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = a(r, p), arq = a(r, q);
                    const double nrp = c * arp - s * arq;
                    const double nrq = s * arp + c * arq;
                    a(r, p) = nrp;
                    a(p, r) = nrp;
                    a(r, q) = nrq;
                    a(q, r) = nrq;
                }
                if (want_vectors) {
                    for (std::size_t r = 0; r < n; ++r) {
                        const double vrp = v(r, p), vrq = v(r, q);
                        v(r, p) = c * vrp - s * vrq;
                        v(r, q) = s * vrp + c * vrq;
                    }
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
    SymEigen out;
    out.values.resize(n);
    for (std::size_t k = 0; k < n; ++k) out.values[k] = a(order[k], order[k]);
    if (want_vectors) {
        out.vectors = DenseMatrix(n, n);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

struct ExtremalEigs {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
};

struct LanczosOptions {
    std::size_t max_steps = 200;
    double rel_tol = 1e-8;  ///< Ritz residual relative to |theta| at each end
    std::uint64_t seed = 12345;
};

/// Lanczos with full reorthogonalization for the extremal eigenvalues of a
/// symmetric operator of dimension n. Throws NoConvergence if the step cap
/// is reached before both ends converge.
template <typename Apply>
ExtremalEigs lanczos_extremal(const Apply& apply, std::size_t n, const LanczosOptions& opts = {}) {
    require(n > 0, ErrorCode::InvalidDimensions, "lanczos on empty operator");
    Rng rng(opts.seed);
    Vector q = rng.normal_vector(n);
    scale(1.0 / norm2(q), q);
    std::vector<Vector> basis{q};
    std::vector<double> alpha, beta;
    Vector w(n);

    const std::size_t cap = std::min(opts.max_steps, n);
    for (std::size_t j = 0; j < cap; ++j) {
        apply(ConstVec(basis[j]), MutVec(w));
        alpha.push_back(dot(w, basis[j]));
        // full reorthogonalization, two passes
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) axpy(-dot(w, b), b, w);
        const double b = norm2(w);

        const std::size_t m = alpha.size();
        const bool exhausted = (m == n) || b <= 1e-14 * std::abs(alpha.front()) || b == 0.0;
        if (exhausted || m % 10 == 0 || m == cap) {
            DenseMatrix t(m, m);
            for (std::size_t i = 0; i < m; ++i) {
                t(i, i) = alpha[i];
                if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
            }
            const SymEigen te = jacobi_eigen(t, true);
            const double lo = te.values.front(), hi = te.values.back();
            const double ref = std::max(std::abs(lo), std::abs(hi));
            const double res_lo = std::abs(b * te.vectors(m - 1, 0));
            const double res_hi = std::abs(b * te.vectors(m - 1, m - 1));
            const double tol_lo = opts.rel_tol * (lo != 0.0 ? std::abs(lo) : ref);
            const double tol_hi = opts.rel_tol * (hi != 0.0 ? std::abs(hi) : ref);
            if (exhausted || (res_lo <= tol_lo && res_hi <= tol_hi))
                return {lo, hi};
        }
        if (j + 1 == cap) break;
        beta.push_back(b);
        scale(1.0 / b, w);
        basis.push_back(w);
    }
    throw Error(ErrorCode::NoConvergence, "Lanczos step cap reached");
}

/// Extremal eigenvalues: full Jacobi for dense storage, Lanczos for sparse.
inline ExtremalEigs extremal_eigs(const SymMatrix& m) {
    require(m.size() > 0, ErrorCode::InvalidDimensions, "extremal_eigs on empty matrix");
    if (m.is_dense()) {
        const SymEigen e = jacobi_eigen(m.to_dense());
        return {e.values.front(), e.values.back()};
    }
    return lanczos_extremal([&m](ConstVec x, MutVec y) { m.apply(x, y); }, m.size());
}

}  // namespace hcx
