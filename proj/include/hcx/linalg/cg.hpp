#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "hcx/linalg/cholesky.hpp"

namespace hcx {

struct CgOptions {
    double tol = 1e-10;       ///< relative residual ||b - A x|| <= tol ||b||
    std::size_t maxit = 10000;
};

struct CgResult {
    Vector solution;
    std::size_t iterations = 0;
    std::vector<double> residuals;  ///< ||r_i||_2, starting with ||b||
    bool converged = false;          ///< false means MaxIterationsExceeded
};

/// Anything callable as op(x, y) computing y = Op x.
template <typename F>
concept LinearOperator = requires(const F& f, ConstVec x, MutVec y) { f(x, y); };

struct IdentityOperator {
    void operator()(ConstVec x, MutVec y) const { std::copy(x.begin(), x.end(), y.begin()); }
};

inline auto as_operator(const SymMatrix& m) {
    return [&m](ConstVec x, MutVec y) { m.apply(x, y); };
}

/// Preconditioned conjugate gradients. Returns the best iterate with
/// `converged == false` when maxit is hit; throws BreakdownNonSPD if a search
/// direction has non-positive curvature or the preconditioner is not positive.
template <LinearOperator Apply, LinearOperator Precond = IdentityOperator>
CgResult cg_solve(const Apply& apply, ConstVec rhs, const CgOptions& opts = {},
                  const Precond& precond = Precond{}) {
    const std::size_t n = rhs.size();
    CgResult res;
    res.solution.assign(n, 0.0);
    const double bnorm = norm2(rhs);
    res.residuals.push_back(bnorm);
    if (bnorm == 0.0) {
        res.converged = true;
        return res;
    }
    Vector r(rhs.begin(), rhs.end()), z(n), p(n), q(n);
    precond(ConstVec(r), MutVec(z));
    double rz = dot(r, z);
    if (!(rz > 0.0)) throw Error(ErrorCode::BreakdownNonSPD, "preconditioner not positive");
    p = z;
    Vector& x = res.solution;
    Vector best = x;
    double best_norm = bnorm;

    for (std::size_t it = 1; it <= opts.maxit; ++it) {
        apply(ConstVec(p), MutVec(q));
        const double pq = dot(p, q);
        if (!(pq > 0.0)) throw Error(ErrorCode::BreakdownNonSPD, "p^T A p <= 0 at iteration " + std::to_string(it));
        const double alpha = rz / pq;
        axpy(alpha, p, x);
        axpy(-alpha, q, r);
        const double rnorm = norm2(r);
        res.residuals.push_back(rnorm);
        res.iterations = it;
        if (rnorm < best_norm) {
            best_norm = rnorm;
            best = x;
        }
        if (rnorm <= opts.tol * bnorm) {
            // confirm with the true residual; the recurrence drifts for ill-conditioned A
            apply(ConstVec(x), MutVec(q));
            for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - q[i];
            const double true_norm = norm2(r);
            if (true_norm <= opts.tol * bnorm) {
                res.residuals.back() = true_norm;
                res.converged = true;
                return res;
            }
        }
        precond(ConstVec(r), MutVec(z));
        const double rz_next = dot(r, z);
        if (!(rz_next > 0.0)) {
            if (norm2(r) == 0.0) {
                res.converged = true;
                return res;
            }
            throw Error(ErrorCode::BreakdownNonSPD, "preconditioner not positive");
        }
        const double beta = rz_next / rz;
        rz = rz_next;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    res.solution = std::move(best);
    return res;
}

/// Solver for a fixed SPD matrix: Cholesky when dense, Jacobi-preconditioned CG otherwise.
class SpdSolver {
public:
    SpdSolver() = default;
    explicit SpdSolver(SymMatrix m, double cg_tol = 1e-13) : matrix_(std::move(m)), cg_tol_(cg_tol) {
        if (matrix_.is_dense()) {
            factor_ = CholeskyFactor::factor(matrix_.to_dense());
        } else {
            inv_diag_ = matrix_.diagonal();
            for (double& d : inv_diag_) {
                require(d > 0.0, ErrorCode::NotPositiveDefinite, "non-positive diagonal");
                d = 1.0 / d;
            }
        }
    }

    std::size_t size() const noexcept { return matrix_.size(); }
    const SymMatrix& matrix() const noexcept { return matrix_; }

    Vector solve(ConstVec b) const {
        if (factor_) return factor_->solve(b);
        const auto jacobi = [this](ConstVec x, MutVec y) {
            for (std::size_t i = 0; i < x.size(); ++i) y[i] = inv_diag_[i] * x[i];
        };
        auto r = cg_solve(as_operator(matrix_), b, CgOptions{cg_tol_, 20 * matrix_.size() + 100}, jacobi);
        if (!r.converged) throw Error(ErrorCode::SolverFailure, "inner CG did not converge");
        return std::move(r.solution);
    }

private:
    SymMatrix matrix_;
    std::optional<CholeskyFactor> factor_;
    Vector inv_diag_;
    double cg_tol_ = 1e-13;
};

}  // namespace hcx
