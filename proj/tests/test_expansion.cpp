#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "eigen_oracle.hpp"
#include "hcx/expansion.hpp"
#include "hcx/forms.hpp"

using namespace hcx;

namespace {

FormPair diagonal_pair() {
    return FormPair(SymMatrix::from_dense(DenseMatrix{{1, 0}, {0, 0}}),
                    SymMatrix::from_dense(DenseMatrix{{0, 0}, {0, 1}}), Basis::coordinate(2, {1}));
}

FormPair coupled_pair() {
    return FormPair(SymMatrix::from_dense(DenseMatrix{{2, 0}, {0, 0}}),
                    SymMatrix::from_dense(DenseMatrix{{1, 1}, {1, 2}}), Basis::coordinate(2, {1}));
}

// closed form (S1 + eps S2)^{-1} (1, 1) for the coupled pair
Vector coupled_exact(double eps) { return {1.0 / (4.0 + eps), 2.0 / (eps * (4.0 + eps))}; }

std::vector<double> decades(int from, int to) {
    std::vector<double> e;
    for (int p = from; p <= to; ++p) e.push_back(std::pow(10.0, -p));
    return e;
}

}  // namespace

TEST(SolveDirect, Examples) {
    Vector x = solve_direct(diagonal_pair(), Vector{1, 1}, 0.5);
    EXPECT_NEAR(x[0], 1.0, 1e-15);
    EXPECT_NEAR(x[1], 2.0, 1e-15);

    x = solve_direct(coupled_pair(), Vector{1, 1}, 1.0);
    EXPECT_NEAR(x[0], 0.2, 1e-15);
    EXPECT_NEAR(x[1], 0.4, 1e-15);

    x = solve_direct(coupled_pair(), Vector{1, 1}, 1e-6);
    const Vector ref = coupled_exact(1e-6);
    EXPECT_NEAR(x[0], ref[0], 1e-12);
    EXPECT_NEAR(x[1] / ref[1], 1.0, 1e-12);
}

TEST(SolveDirect, RejectsBadInput) {
    try {
        solve_direct(coupled_pair(), Vector{1, 1}, 0.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
    }
    const FormPair broken(SymMatrix::from_dense(DenseMatrix{{1, 0}, {0, 0}}),
                          SymMatrix::from_dense(DenseMatrix{{1, 0}, {0, 0}}), Basis::coordinate(2, {1}));
    try {
        solve_direct(broken, Vector{1, 1}, 0.1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::AssumptionsViolated);
    }
}

TEST(SolveDirect, MatchesDenseOracleAndResidual) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const FormPair fp = random_form_pair(15, 4, seed);
        Rng rng(seed);
        const Vector eta = rng.normal_vector(15);
        for (double eps : {1.0, 1e-3, 1e-6}) {
            const Vector x = solve_direct(fp, eta, eps);
            EXPECT_LT(oracle::rel_diff(x, oracle::solve(fp.perturbed(eps), eta)), 1e-9);
            // normwise backward error; the double-precision residual of a 1/eps-sized x
            // cannot fall below u * ||A|| * ||x||
            const SymMatrix a = fp.perturbed(eps);
            const Vector res = subtract(eta, a.apply(x));
            EXPECT_LE(norm2(res), 1e-12 * (a.frobenius() * norm2(x) + norm2(eta)));
        }
    }
}

TEST(SolveDirect, SparsePathUsesCg) {
    const FormPair fp = coupled_pair();
    const FormPair sparse(SymMatrix::from_dense(fp.s1.to_dense(), Layout::Sparse),
                          SymMatrix::from_dense(fp.s2.to_dense(), Layout::Sparse), fp.basis);
    const Vector x = solve_direct(sparse, Vector{1, 1}, 1e-2);
    EXPECT_LT(oracle::rel_diff(x, coupled_exact(1e-2)), 1e-9);
}

TEST(SubspaceSolve, Examples) {
    Vector x = subspace_solve(diagonal_pair(), Vector{1, 1});
    EXPECT_EQ(x, (Vector{0, 1}));
    x = subspace_solve(coupled_pair(), Vector{1, 1});
    EXPECT_NEAR(x[0], 0.0, 1e-16);
    EXPECT_NEAR(x[1], 0.5, 1e-16);
    x = subspace_solve(diagonal_pair(), Vector{1, 0});
    EXPECT_EQ(x, (Vector{0, 0}));
}

TEST(SubspaceSolve, SatisfiesProjectedEquation) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const FormPair fp = random_form_pair(12, 5, seed);
        const Vector eta = Rng(seed).normal_vector(12);
        const Vector x = subspace_solve(fp, eta);
        EXPECT_LE(norm2(fp.basis.project_out(x)), 1e-12 * (1 + norm2(x)));
        EXPECT_LT(norm2(subtract(fp.basis.coefficients(fp.s2.apply(x)), fp.basis.coefficients(eta))), 1e-12);
    }
}

TEST(ConstrainedSolve, Examples) {
    Vector x = constrained_solve(diagonal_pair(), Vector{2, 0});
    EXPECT_EQ(x, (Vector{2, 0}));
    x = constrained_solve(coupled_pair(), Vector{0.5, 0});
    EXPECT_NEAR(x[0], 0.25, 1e-16);
    EXPECT_NEAR(x[1], -0.125, 1e-16);
    x = constrained_solve(coupled_pair(), Vector{0, 0});
    EXPECT_EQ(norm2(x), 0.0);
}

TEST(ConstrainedSolve, RejectsFunctionalOutsideKernel) {
    try {
        constrained_solve(coupled_pair(), Vector{0.5, 1.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::FunctionalNotInKernel);
    }
}

TEST(ConstrainedSolve, PostconditionsAndUniqueness) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const FormPair fp = random_form_pair(20, 6, seed);
        const ExpansionSolver solver(fp);
        const Vector w = fp.basis.project_out(Rng(seed + 3).normal_vector(20));
        const Vector x = solver.constrained_solve(w);
        EXPECT_LE(norm2(subtract(fp.s1.apply(x), w)), 1e-9 * norm2(w));
        EXPECT_LE(norm2(fp.basis.coefficients(fp.s2.apply(x))), 1e-9 * (1 + norm2(x)) * fp.s2.frobenius());
        const Vector again = solver.constrained_solve(w);
        EXPECT_LE(norm2(subtract(x, again)), 1e-12 * norm2(x));
        // independent route: bordered system [S1; B^T S2] x = [w; 0] by least squares
        const Eigen::MatrixXd s1 = oracle::to_eigen(fp.s1), s2 = oracle::to_eigen(fp.s2);
        const Eigen::MatrixXd b = oracle::to_eigen(fp.basis.columns());
        Eigen::MatrixXd k(20 + 6, 20);
        k << s1, b.transpose() * s2;
        Eigen::VectorXd rhs(26);
        rhs << oracle::to_eigen(w), Eigen::VectorXd::Zero(6);
        const Eigen::VectorXd ref = k.colPivHouseholderQr().solve(rhs);
        EXPECT_LT(oracle::rel_diff(x, oracle::from_eigen(ref)), 1e-9);
    }
}

TEST(LaurentCoefficients, DiagonalExpansionTerminates) {
    const auto r = laurent_coefficients(diagonal_pair(), Vector{1, 1}, 1);
    EXPECT_EQ(r.coeff(-1), (Vector{0, 1}));
    EXPECT_EQ(r.coeff(0), (Vector{1, 0}));
    EXPECT_EQ(r.coeff(1), (Vector{0, 0}));
    EXPECT_EQ(r.bound_constant, 0.0);
}

TEST(LaurentCoefficients, CoupledPairMatchesSeriesOfClosedForm) {
    // 1/(4+e) = 1/4 - e/16 + ..., 2/(e(4+e)) = 1/(2e) - 1/8 + e/32 - ...
    const auto r = laurent_coefficients(coupled_pair(), Vector{1, 1}, 1);
    EXPECT_NEAR(r.coeff(-1)[0], 0.0, 1e-15);
    EXPECT_NEAR(r.coeff(-1)[1], 0.5, 1e-15);
    EXPECT_NEAR(r.coeff(0)[0], 0.25, 1e-15);
    EXPECT_NEAR(r.coeff(0)[1], -0.125, 1e-15);
    EXPECT_NEAR(r.coeff(1)[0], -1.0 / 16, 1e-15);
    EXPECT_NEAR(r.coeff(1)[1], 1.0 / 32, 1e-15);
    const double alpha = (5.0 - std::sqrt(5.0)) / 2.0, c2 = (3.0 + std::sqrt(5.0)) / 2.0;
    EXPECT_NEAR(r.bound_constant, c2 / alpha * std::hypot(1.0 / 16, 1.0 / 32), 1e-14);
}

TEST(LaurentCoefficients, TrivialSubspaceIsNeumannSeries) {
    const SymMatrix s1 = oracle::random_spd(6, 1, 1.0), s2 = oracle::random_spd(6, 2);
    const FormPair fp(s1, s2, Basis::empty(6));
    const Vector eta = Rng(3).normal_vector(6);
    const auto r = laurent_coefficients(fp, eta, 4);
    EXPECT_EQ(norm2(r.coeff(-1)), 0.0);
    const Eigen::MatrixXd a = oracle::to_eigen(s1), b = oracle::to_eigen(s2);
    const Eigen::MatrixXd step = -a.inverse() * b;
    Eigen::VectorXd term = a.inverse() * oracle::to_eigen(eta);
    for (int j = 0; j <= 4; ++j) {
        EXPECT_LT(oracle::rel_diff(r.coeff(j), oracle::from_eigen(term)), 1e-10) << "j=" << j;
        term = step * term;
    }
}

TEST(LaurentCoefficients, OrthogonalityChain) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const FormPair fp = random_form_pair(25, 7, seed);
        const Vector eta = Rng(seed).normal_vector(25);
        const auto r = laurent_coefficients(fp, eta, 3);
        const double s2n = fp.s2.frobenius();
        EXPECT_LE(norm2(fp.basis.project_out(r.coeff(-1))), 1e-9 * (1 + norm2(r.coeff(-1))));
        EXPECT_LE(norm2(fp.basis.coefficients(subtract(eta, fp.s2.apply(r.coeff(-1))))), 1e-9 * (1 + norm2(eta)));
        for (int j = 0; j <= 3; ++j)
            EXPECT_LE(norm2(fp.basis.coefficients(fp.s2.apply(r.coeff(j)))), 1e-9 * (1 + norm2(r.coeff(j))) * s2n);
    }
}

TEST(LaurentCoefficients, OrderLimits) {
    EXPECT_THROW(laurent_coefficients(coupled_pair(), Vector{1, 1}, 9), Error);
    EXPECT_THROW(laurent_coefficients(coupled_pair(), Vector{1, 1}, -2), Error);
    const auto r = laurent_coefficients(coupled_pair(), Vector{1, 1}, -1);
    EXPECT_EQ(r.coeffs.size(), 1u);
}

TEST(ErrorSweep, DiagonalPairIsExact) {
    for (int k = 0; k <= 3; ++k) {
        const auto t = expansion_error_sweep(diagonal_pair(), Vector{1, 1}, k, decades(1, 6));
        for (double e : t.errors) EXPECT_LE(e, 1e-12);
    }
}

TEST(ErrorSweep, CoupledPairFirstOrder) {
    const auto t = expansion_error_sweep(coupled_pair(), Vector{1, 1}, 0, decades(1, 4));
    EXPECT_GE(t.fitted_order, 0.9);
    EXPECT_LE(t.fitted_order, 1.1);
    // independent check of the measured errors against the closed form
    const auto r = laurent_coefficients(coupled_pair(), Vector{1, 1}, 0);
    for (std::size_t i = 0; i < t.epsilons.size(); ++i) {
        const double eps = t.epsilons[i];
        const double ref = norm2(subtract(r.evaluate(eps), coupled_exact(eps)));
        EXPECT_NEAR(t.errors[i], ref, 1e-9 * ref + 1e-13);
    }
}

TEST(ErrorSweep, CoupledPairWithinBound) {
    const auto t = expansion_error_sweep(coupled_pair(), Vector{1, 1}, 1, decades(1, 6));
    EXPECT_TRUE(t.bound_holds());
    std::size_t checked = 0;
    for (std::size_t i = 0; i < t.errors.size(); ++i) {
        if (t.above_floor(i)) {
            EXPECT_LE(t.errors[i], t.bounds[i] * (1 + 1e-8));
            ++checked;
        }
    }
    EXPECT_GE(checked, 3u);
}

TEST(ErrorSweep, RigorousBoundHoldsOnRandomPairs) {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        Rng rng(seed);
        const std::size_t n = 3 + static_cast<std::size_t>(rng.uniform() * 30);
        const std::size_t m = 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(n / 2));
        const FormPair fp = random_form_pair(n, m, seed);
        const ExpansionSolver solver(fp);
        const Vector eta = rng.normal_vector(n);
        for (int k = 0; k <= 2; ++k) {
            const auto t = expansion_error_sweep(solver, eta, k, decades(1, 6));
            for (std::size_t i = 0; i < t.errors.size(); ++i)
                if (t.above_floor(i)) {
                    EXPECT_LE(t.errors[i], t.rigorous_bounds[i] * (1 + 1e-8));
                }
        }
    }
}

TEST(ErrorSweep, ScaledSolutionApproachesLeadingTerm) {
    const FormPair fp = random_form_pair(10, 3, 5);
    const Vector eta = Rng(5).normal_vector(10);
    const Vector lead = subspace_solve(fp, eta);
    std::vector<double> eps = decades(1, 5), dist;
    for (double e : eps) dist.push_back(norm2(subtract(scaled(e, solve_direct(fp, eta, e)), lead)));
    EXPECT_GE(loglog_slope(eps, dist), 0.9);
}

TEST(ErrorSweep, RejectsUnsortedEpsilons) {
    EXPECT_THROW(expansion_error_sweep(coupled_pair(), Vector{1, 1}, 0, {1e-3, 1e-2}), Error);
    EXPECT_THROW(expansion_error_sweep(coupled_pair(), Vector{1, 1}, 0, {1e-2, -1e-3}), Error);
}

TEST(ExpansionCsv, RoundTrips) {
    const auto t = expansion_error_sweep(coupled_pair(), Vector{1, 1}, 1, decades(1, 4));
    std::stringstream ss;
    write_error_table_csv(ss, t);
    const auto back = read_error_table_csv(ss);
    EXPECT_EQ(back.epsilons, t.epsilons);
    EXPECT_EQ(back.errors, t.errors);
    EXPECT_EQ(back.bounds, t.bounds);

    const auto r = laurent_coefficients(coupled_pair(), Vector{1, 1}, 2);
    std::stringstream es;
    write_expansion_csv(es, r);
    EXPECT_EQ(es.str().substr(0, 18), "xi_-1,xi_0,xi_1,xi");
    const auto rb = read_expansion_csv(es);
    EXPECT_EQ(rb.k, 2);
    EXPECT_EQ(rb.coeffs, r.coeffs);
}
