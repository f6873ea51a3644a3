#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "hcx/forms/form_pair.hpp"
#include "hcx/linalg/eigen.hpp"

namespace hcx {

/// Numerical check of the structural hypotheses on a form pair, with the
/// constants used by the expansion error bound.
struct AssumptionReport {
    double alpha = 0.0;   ///< lambda_min(S1 + S2)
    double alpha2 = 0.0;  ///< lambda_min(B^T S2 B); +inf when X1 = {0}
    double c1 = 0.0;      ///< lambda_max(S1)
    double c2 = 0.0;      ///< lambda_max(S2)
    double s1_min = 0.0;  ///< lambda_min(S1)
    double s2_min = 0.0;  ///< lambda_min(S2)
    double kernel_leak = 0.0;  ///< ||S1 B||_F
    std::size_t rank_s1 = 0;
    std::size_t subspace_dim = 0;
    bool s1_psd = false;
    bool s2_psd = false;
    bool vanishes_on_x1 = false;
    bool kernel_match = false;
    bool passed = false;

    std::string summary() const {
        std::string s;
        if (!s1_psd) s += " S1 not PSD;";
        if (!s2_psd) s += " S2 not PSD;";
        if (!(alpha > 0.0)) s += " alpha <= 0;";
        if (!(alpha2 > 0.0)) s += " alpha2 <= 0;";
        if (!vanishes_on_x1) s += " S1 does not vanish on X1;";
        if (!kernel_match) s += " ker S1 != X1;";
        return s.empty() ? "all assumptions hold" : s;
    }
};

namespace detail {

inline ExtremalEigs extremal_or_dense(const SymMatrix& m) {
    if (m.size() == 0) return {0.0, 0.0};
    try {
        return extremal_eigs(m);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoConvergence) throw;
        const SymEigen d = jacobi_eigen(m.to_dense());
        return {d.values.front(), d.values.back()};
    }
}

inline SymMatrix restrict_to(const SymMatrix& s, const Basis& b) {
    if (b.is_coordinate()) return s.principal_submatrix(b.indices());
    const std::size_t m = b.dim();
    DenseMatrix sb(s.size(), m);
    for (std::size_t j = 0; j < m; ++j) sb.set_column(j, s.apply(b.column(j)));
    return SymMatrix::from_dense(b.columns().transpose() * sb);
}

inline double kernel_leak(const SymMatrix& s, const Basis& b) {
    double ssq = 0.0;
    for (std::size_t j = 0; j < b.dim(); ++j) {
        const double c = norm2(s.apply(b.column(j)));
        ssq += c * c;
    }
    return std::sqrt(ssq);
}

}  // namespace detail

inline AssumptionReport check_assumptions(const FormPair& fp) {
    AssumptionReport r;
    const std::size_t n = fp.size(), m = fp.subspace_dim();
    r.subspace_dim = m;

    const ExtremalEigs e1 = detail::extremal_or_dense(fp.s1);
    const ExtremalEigs e2 = detail::extremal_or_dense(fp.s2);
    r.c1 = e1.lambda_max;
    r.c2 = e2.lambda_max;
    r.s1_min = e1.lambda_min;
    r.s2_min = e2.lambda_min;
    r.s1_psd = e1.lambda_min >= -1e-10 * std::abs(e1.lambda_max);
    r.s2_psd = e2.lambda_min >= -1e-10 * std::abs(e2.lambda_max);
    r.alpha = detail::extremal_or_dense(fp.perturbed(1.0)).lambda_min;

    r.alpha2 = m == 0 ? std::numeric_limits<double>::infinity()
                      : detail::extremal_or_dense(detail::restrict_to(fp.s2, fp.basis)).lambda_min;

    r.kernel_leak = detail::kernel_leak(fp.s1, fp.basis);
    r.vanishes_on_x1 = r.kernel_leak <= 1e-10 * fp.s1.frobenius();

    const double threshold = 1e-10 * e1.lambda_max;
    if (fp.s1.is_dense() || !fp.basis.is_coordinate()) {
        const SymEigen eig = jacobi_eigen(fp.s1.to_dense(), true);
        std::size_t null_dim = 0;
        bool inside = true;
        for (std::size_t k = 0; k < n; ++k) {
            if (std::abs(eig.values[k]) > threshold) continue;
            ++null_dim;
            const Vector v = eig.vectors.column(k);
            if (norm2(fp.basis.project_out(v)) > 1e-8) inside = false;
        }
        r.rank_s1 = n - null_dim;
        r.kernel_match = null_dim == m && inside && r.vanishes_on_x1;
    } else {
        // with S1 B = 0, ker S1 = span B exactly when S1 is definite on the complement
        const Basis q = orthonormal_complement(fp.basis);
        const double reduced_min =
            q.dim() == 0 ? std::numeric_limits<double>::infinity()
                         : detail::extremal_or_dense(detail::restrict_to(fp.s1, q)).lambda_min;
        const bool definite = reduced_min > threshold;
        r.rank_s1 = definite ? n - m : n - m - 1;  // upper bound when not definite
        r.kernel_match = definite && r.vanishes_on_x1;
    }

    r.passed = r.alpha > 0.0 && r.alpha2 > 0.0 && r.kernel_match && r.s1_psd && r.s2_psd;
    return r;
}

}  // namespace hcx
