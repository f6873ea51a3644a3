#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <string>

#include "hcx/forms/assumptions.hpp"
#include "hcx/linalg/cg.hpp"

namespace hcx {

inline constexpr int kMaxExpansionOrder = 8;

/// Solves S x = b to the working accuracy of a dense factorization, then
/// refines with residuals accumulated in long double.
inline Vector refined_solve(const SymMatrix& s, const CholeskyFactor& f, ConstVec b, int steps = 2) {
    Vector x = f.solve(b);
    const std::size_t n = b.size();
    const DenseMatrix d = s.to_dense();
    Vector r(n);
    for (int it = 0; it < steps; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            long double acc = b[i];
            const ConstVec row = d.row(i);
            for (std::size_t j = 0; j < n; ++j) acc -= static_cast<long double>(row[j]) * x[j];
            r[i] = static_cast<double>(acc);
        }
        f.solve_in_place(r);
        axpy(1.0, r, x);
    }
    return x;
}

/// Unique xi_eps with (S1 + eps S2) xi_eps = eta. Dense problems use Cholesky
/// with refinement; sparse ones use Jacobi-preconditioned CG to 1e-10.
inline Vector solve_direct(const FormPair& fp, const AssumptionReport& report, ConstVec eta, double eps) {
    require(report.passed, ErrorCode::AssumptionsViolated, report.summary());
    require(eps > 0.0 && std::isfinite(eps), ErrorCode::InvalidArgument, "solve_direct needs eps > 0");
    require(eta.size() == fp.size(), ErrorCode::DimensionMismatch, "solve_direct: eta");
    const SymMatrix a = fp.perturbed(eps);
    if (a.is_dense()) {
        try {
            return refined_solve(a, CholeskyFactor::factor(a.to_dense()), eta);
        } catch (const Error& e) {
            throw Error(ErrorCode::SolverFailure, e.what());
        }
    }
    Vector inv_diag = a.diagonal();
    for (double& d : inv_diag) d = 1.0 / d;
    const auto jacobi = [&inv_diag](ConstVec x, MutVec y) {
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = inv_diag[i] * x[i];
    };
    auto res = cg_solve(as_operator(a), eta, CgOptions{1e-10, 50 * a.size() + 1000}, jacobi);
    if (!res.converged) throw Error(ErrorCode::SolverFailure, "CG did not reach 1e-10");
    return std::move(res.solution);
}

inline Vector solve_direct(const FormPair& fp, ConstVec eta, double eps) {
    return solve_direct(fp, check_assumptions(fp), eta, eps);
}

/// The two reduced solves behind every coefficient of the expansion, with
/// factorizations cached:
///  - T21 = B^T S2 B on X1 (subspace solve),
///  - Q^T S1 Q on the orthogonal complement of X1 (constrained solve).
class ExpansionSolver {
public:
    explicit ExpansionSolver(const FormPair& fp) : ExpansionSolver(fp, check_assumptions(fp)) {}

    ExpansionSolver(const FormPair& fp, AssumptionReport report)
        : fp_(std::make_shared<const FormPair>(fp)), report_(std::move(report)) {
        require(report_.passed, ErrorCode::AssumptionsViolated, report_.summary());
        complement_ = orthonormal_complement(fp_->basis);
        if (complement_.dim() > 0) reduced_s1_ = SpdSolver(detail::restrict_to(fp_->s1, complement_));
        if (fp_->subspace_dim() > 0) t21_ = SpdSolver(detail::restrict_to(fp_->s2, fp_->basis));
    }

    const FormPair& form_pair() const noexcept { return *fp_; }
    const AssumptionReport& report() const noexcept { return report_; }
    const Basis& complement() const noexcept { return complement_; }

    /// xi_{-1} = B T21^{-1} B^T eta, the unique element of X1 with
    /// B^T S2 xi_{-1} = B^T eta.
    Vector subspace_solve(ConstVec eta) const {
        require(eta.size() == fp_->size(), ErrorCode::DimensionMismatch, "subspace_solve: eta");
        if (fp_->subspace_dim() == 0) return Vector(fp_->size(), 0.0);
        return fp_->basis.expand(t21_.solve(fp_->basis.coefficients(eta)));
    }

    /// Unique xi with S1 xi = w and B^T S2 xi = 0, for w with B^T w = 0.
    /// Solves on the complement of X1, then removes the X1 component that
    /// breaks S2-orthogonality.
    Vector constrained_solve(ConstVec w) const {
        require(w.size() == fp_->size(), ErrorCode::DimensionMismatch, "constrained_solve: w");
        const double leak = norm2(fp_->basis.coefficients(w));
        if (leak > 1e-8 * (1.0 + norm2(w)))
            throw Error(ErrorCode::FunctionalNotInKernel,
                        "||B^T w|| = " + std::to_string(leak) + " for ||w|| = " + std::to_string(norm2(w)));
        Vector xi = complement_.dim() > 0 ? complement_.expand(reduced_s1_.solve(complement_.coefficients(w)))
                                          : Vector(fp_->size(), 0.0);
        if (fp_->subspace_dim() > 0) {
            const Vector s2xi = fp_->s2.apply(xi);
            const Vector corr = fp_->basis.expand(t21_.solve(fp_->basis.coefficients(s2xi)));
            axpy(-1.0, corr, xi);
        }
        return xi;
    }

private:
    std::shared_ptr<const FormPair> fp_;
    AssumptionReport report_;
    Basis complement_;
    SpdSolver reduced_s1_;
    SpdSolver t21_;
};

inline Vector subspace_solve(const FormPair& fp, ConstVec eta) { return ExpansionSolver(fp).subspace_solve(eta); }

inline Vector constrained_solve(const FormPair& fp, ConstVec w) { return ExpansionSolver(fp).constrained_solve(w); }

}  // namespace hcx
