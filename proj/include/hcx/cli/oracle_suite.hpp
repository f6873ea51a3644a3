#pragma once

// Brute-force dense comparison of every solver path against Eigen. Requires Eigen3.

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hcx/expansion.hpp"
#include "hcx/forms.hpp"
#include "hcx/precond/preconditioner.hpp"

namespace hcx {

struct OracleRow {
    std::size_t case_id = 0;
    std::size_t n = 0, m = 0;
    double eps = 0.0;
    std::string operation;
    double rel_error = 0.0;
};

struct OracleSummary {
    std::vector<OracleRow> rows;
    double max_rel_error = 0.0;
    double tolerance = 1e-9;
    bool passed() const { return max_rel_error <= tolerance; }
};

namespace detail {

inline Eigen::MatrixXd dense_of(const SymMatrix& s) {
    const std::size_t n = s.size();
    Eigen::MatrixXd e(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) e(i, j) = s(i, j);
    return e;
}

inline Eigen::VectorXd vec_of(ConstVec v) {
    Eigen::VectorXd e(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) e(i) = v[i];
    return e;
}

inline double rel_error(ConstVec got, const Eigen::VectorXd& want) {
    const double den = std::max(want.norm(), 1e-300);
    return (vec_of(got) - want).norm() / den;
}

}  // namespace detail

/// `cases` random form pairs with n <= 12. The references use Eigen only:
/// LDLT for the perturbed system, explicit T21 for the subspace solve, and the
/// saddle-point system [S1, S2 B; B^T S2, 0] for constrained solves.
inline OracleSummary run_oracle_suite(std::size_t cases, std::uint64_t seed, double tol = 1e-9) {
    OracleSummary out;
    out.tolerance = tol;
    for (std::size_t c = 0; c < cases; ++c) {
        const std::uint64_t case_seed = seed * 1000003ULL + c;
        Rng rng(case_seed);
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 11);
        const std::size_t m = 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(n - 1));
        const double eps = std::pow(10.0, -3.0 * rng.uniform());
        const int k = 2;
        const FormPair fp = random_form_pair(n, m, case_seed);
        const Vector eta = rng.normal_vector(n);
        const auto solver = std::make_shared<const ExpansionSolver>(fp);

        const Eigen::MatrixXd s1 = detail::dense_of(fp.s1), s2 = detail::dense_of(fp.s2);
        Eigen::MatrixXd b(n, m);
        for (std::size_t j = 0; j < m; ++j) b.col(static_cast<Eigen::Index>(j)) = detail::vec_of(fp.basis.column(j));
        const Eigen::VectorXd e = detail::vec_of(eta);
        const Eigen::MatrixXd t21 = b.transpose() * s2 * b;

        Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n + m), static_cast<Eigen::Index>(n + m));
        kkt.topLeftCorner(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) = s1;
        kkt.topRightCorner(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) = s2 * b;
        kkt.bottomLeftCorner(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) = b.transpose() * s2;
        const Eigen::FullPivLU<Eigen::MatrixXd> kkt_lu(kkt);
        const auto constrained = [&](const Eigen::VectorXd& w) {
            Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n + m));
            rhs.head(static_cast<Eigen::Index>(n)) = w;
            return Eigen::VectorXd(kkt_lu.solve(rhs).head(static_cast<Eigen::Index>(n)));
        };

        const auto record = [&](const std::string& op, double err) {
            out.rows.push_back({c, n, m, eps, op, err});
            out.max_rel_error = std::max(out.max_rel_error, std::isfinite(err) ? err : INFINITY);
        };

        const Eigen::VectorXd direct = (s1 + eps * s2).ldlt().solve(e);
        record("direct_solve", detail::rel_error(solve_direct(fp, solver->report(), eta, eps), direct));

        const Eigen::VectorXd xm1 = b * t21.ldlt().solve(b.transpose() * e);
        record("subspace_solve", detail::rel_error(solver->subspace_solve(eta), xm1));

        const Eigen::VectorXd w = e - b * (b.transpose() * e);
        record("constrained_solve", detail::rel_error(solver->constrained_solve(fp.basis.project_out(eta)), constrained(w)));

        std::vector<Eigen::VectorXd> ref{xm1};
        ref.push_back(constrained(e - s2 * xm1));
        for (int j = 1; j <= k; ++j) ref.push_back(constrained(-s2 * ref.back()));
        const ExpansionResult got = laurent_coefficients(*solver, eta, k);
        double worst = 0.0;
        for (int j = -1; j <= k; ++j) {
            const Eigen::VectorXd& want = ref[static_cast<std::size_t>(j + 1)];
            const double scale = std::max(want.norm(), 1e-300);
            worst = std::max(worst, (detail::vec_of(got.coeff(j)) - want).norm() / scale);
        }
        record("coefficients", worst);

        Eigen::VectorXd m_eta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
        double wj = 1.0 / eps;
        for (const auto& r : ref) {
            m_eta += wj * r;
            wj *= eps;
        }
        const Preconditioner pm = build_expansion_preconditioner(solver, k, eps);
        record("preconditioner_apply", detail::rel_error(pm.apply(eta), m_eta));
    }
    return out;
}

}  // namespace hcx
