#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "eigen_oracle.hpp"
#include "hcx/diffusion.hpp"
#include "hcx/expansion.hpp"
#include "hcx/forms.hpp"
#include "hcx/precond.hpp"

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

Eigen::MatrixXd materialize(const Preconditioner& m) {
    const std::size_t n = m.size();
    Eigen::MatrixXd out(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        Vector e(n, 0.0);
        e[j] = 1.0;
        out.col(static_cast<Eigen::Index>(j)) = oracle::to_eigen(m.apply(e));
    }
    return out;
}

double spectral_norm(const Eigen::MatrixXd& e) {
    return std::sqrt(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(e.transpose() * e).eigenvalues().maxCoeff());
}

// sqrt(n) (C2 / lambda_min(A)) max_j ||xi_k(A e_j)|| eps^{k+1}: columnwise truncation bound lifted to the 2-norm
double deviation_bound(const ExpansionSolver& s, int k, double eps) {
    const FormPair& fp = s.form_pair();
    const SymMatrix a = fp.perturbed(eps);
    const double lmin = oracle::eigenvalues(a).minCoeff();
    double worst = 0.0;
    for (std::size_t j = 0; j < fp.size(); ++j) {
        Vector e(fp.size(), 0.0);
        e[j] = 1.0;
        worst = std::max(worst, norm2(laurent_coefficients(s, a.apply(e), k).coeffs.back()));
    }
    return std::sqrt(static_cast<double>(fp.size())) * s.report().c2 / lmin * worst * std::pow(eps, k + 1);
}

std::vector<double> decades(int from, int to) {
    std::vector<double> e;
    for (int p = from; p <= to; ++p) e.push_back(std::pow(10.0, -p));
    return e;
}

}  // namespace

TEST(ExpansionPreconditioner, DiagonalToyIsExactInverse) {
    for (double eps : {1.0, 1e-3, 1e-7}) {
        const Preconditioner m = build_expansion_preconditioner(diagonal_pair(), 0, eps);
        EXPECT_EQ(m.kind(), Preconditioner::Kind::Expansion);
        EXPECT_TRUE(m.spd());
        const Vector y = m.apply(Vector{3, 5});
        EXPECT_NEAR(y[0], 3.0, 1e-15);
        EXPECT_NEAR(y[1], 5.0 / eps, 1e-15 / eps);
        EXPECT_LE(deviation_estimate(m, diagonal_pair().perturbed(eps)), 1e-14);
    }
}

TEST(ExpansionPreconditioner, CoupledDeviationMatchesDenseNorm) {
    const double eps = 1e-3;
    const FormPair fp = coupled_pair();
    const Preconditioner m = build_expansion_preconditioner(fp, 1, eps);
    const Eigen::MatrixXd a = oracle::to_eigen(fp.perturbed(eps));
    const double exact = spectral_norm(materialize(m) * a - Eigen::MatrixXd::Identity(2, 2));
    const double est = deviation_estimate(m, fp.perturbed(eps));
    EXPECT_NEAR(est, exact, 1e-6 * exact);
    EXPECT_LE(exact, deviation_bound(ExpansionSolver(fp), 1, eps));
    const ExpansionSolver s(fp);
    double column_max = 0.0;
    for (std::size_t j = 0; j < 2; ++j) {
        Vector e(2, 0.0);
        e[j] = 1.0;
        column_max = std::max(column_max, norm2(laurent_coefficients(s, fp.perturbed(eps).apply(e), 1).coeffs.back()));
    }
    EXPECT_LE(exact, s.report().c2 / s.report().alpha * column_max * eps * eps);
    // truncation after xi_1 leaves eps^2 xi_2 + ..., so the deviation is second order
    EXPECT_GT(exact, 1e-8);
    EXPECT_LT(exact, 1e-5);
}

TEST(ExpansionPreconditioner, TrivialSubspaceIsFrozenInverse) {
    const SymMatrix s1 = oracle::random_spd(6, 4);
    const SymMatrix s2 = oracle::random_spd(6, 5);
    const FormPair fp(s1, s2, Basis::empty(6));
    const Preconditioner m = build_expansion_preconditioner(fp, 0, 1e-2);
    const Eigen::MatrixXd inv = oracle::to_eigen(s1).inverse();
    EXPECT_LE((materialize(m) - inv).norm(), 1e-12 * inv.norm());
}

TEST(ExpansionPreconditioner, MatchesDenseSeriesOracle) {
    // M = sum_j eps^j M_j with M_{-1} = B T21^{-1} B^T, M_0 = P K P^T, M_j = (-1)^j M_0 (S2 M_0)^j
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const FormPair fp = random_form_pair(9, 3, seed);
        const Eigen::MatrixXd s1 = oracle::to_eigen(fp.s1), s2 = oracle::to_eigen(fp.s2);
        const Eigen::MatrixXd b = oracle::to_eigen(fp.basis.columns());
        const Eigen::MatrixXd q = oracle::to_eigen(orthonormal_complement(fp.basis).columns());
        const Eigen::MatrixXd t21inv = (b.transpose() * s2 * b).inverse();
        const Eigen::MatrixXd p = Eigen::MatrixXd::Identity(9, 9) - b * t21inv * b.transpose() * s2;
        const Eigen::MatrixXd k = q * (q.transpose() * s1 * q).inverse() * q.transpose();
        const Eigen::MatrixXd m0 = p * k * p.transpose();
        const double eps = 0.01;
        Eigen::MatrixXd expect = b * t21inv * b.transpose() / eps + m0;
        Eigen::MatrixXd term = m0;
        for (int j = 1; j <= 2; ++j) {
            term = -term * s2 * m0;
            expect += std::pow(eps, j) * term;
        }
        const Eigen::MatrixXd got = materialize(build_expansion_preconditioner(fp, 2, eps));
        EXPECT_LE((got - expect).norm(), 1e-9 * expect.norm()) << seed;
    }
}

TEST(ExpansionPreconditioner, Symmetric) {
    const FormPair fp = random_form_pair(20, 6, 42);
    const Preconditioner m = build_expansion_preconditioner(fp, 2, 1e-3);
    Rng rng(9);
    for (int t = 0; t < 100; ++t) {
        const Vector x = rng.normal_vector(20), y = rng.normal_vector(20);
        EXPECT_LE(std::abs(dot(x, m.apply(y)) - dot(y, m.apply(x))), 1e-9 * norm2(x) * norm2(y));
    }
}

TEST(ExpansionPreconditioner, Linear) {
    const FormPair fp = random_form_pair(12, 4, 8);
    const Preconditioner m = build_expansion_preconditioner(fp, 1, 1e-2);
    Rng rng(10);
    const Vector x = rng.normal_vector(12), y = rng.normal_vector(12);
    Vector combo = x;
    scale(2.5, combo);
    axpy(-1.5, y, combo);
    Vector expect = m.apply(x);
    scale(2.5, expect);
    axpy(-1.5, m.apply(y), expect);
    EXPECT_LE(oracle::rel_diff(m.apply(combo), expect), 1e-12);
}

TEST(ExpansionPreconditioner, SpdFlagTracksEpsilon) {
    const FormPair fp = random_form_pair(10, 3, 1);
    EXPECT_TRUE(build_expansion_preconditioner(fp, 1, 1e-3).spd());
    // far outside the asymptotic regime the eps^1 term dominates with the wrong sign
    const Preconditioner bad = build_expansion_preconditioner(fp, 1, 1e3);
    EXPECT_FALSE(bad.spd());
    EXPECT_LT(bad.min_rayleigh(), 0.0);
}

TEST(ExpansionPreconditioner, RejectsBadInput) {
    EXPECT_THROW(build_expansion_preconditioner(coupled_pair(), 1, 0.0), Error);
    EXPECT_THROW(build_expansion_preconditioner(coupled_pair(), 9, 0.1), Error);
    const FormPair broken(SymMatrix::from_dense(DenseMatrix{{1, 0}, {0, 1}}),
                          SymMatrix::from_dense(DenseMatrix{{1, 0}, {0, 1}}), Basis::coordinate(2, {1}));
    try {
        build_expansion_preconditioner(broken, 0, 0.1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::AssumptionsViolated);
    }
}

TEST(ExpansionPreconditioner, DeviationLaw) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        Rng rng(seed + 100);
        const std::size_t n = 4 + static_cast<std::size_t>(rng.uniform() * 30);
        const std::size_t m = 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(n / 2));
        const ExpansionSolver s(random_form_pair(n, m, seed));
        auto shared = std::make_shared<const ExpansionSolver>(s);
        for (int k = 0; k <= 1; ++k) {
            for (double eps : decades(1, 3)) {
                const Preconditioner pm = build_expansion_preconditioner(shared, k, eps);
                const double dev = deviation_estimate(pm, s.form_pair().perturbed(eps));
                EXPECT_LE(dev, deviation_bound(s, k, eps)) << seed << ' ' << k << ' ' << eps;
            }
        }
    }
}

TEST(FrozenLimit, SelfPreconditioning) {
    const Mesh m = build_mesh(2, 8, GeometryConfig::box(0.25, 0.75));
    ElementField p(m.num_elements());
    Rng rng(2);
    for (double& v : p) v = rng.uniform(0.5, 2.0);
    const Preconditioner pm = build_frozen_limit_preconditioner(m, p);
    EXPECT_EQ(pm.kind(), Preconditioner::Kind::FrozenLimit);
    ElementField d(p.size());
    for (std::size_t e = 0; e < d.size(); ++e) d[e] = 1.0 / p[e];
    EXPECT_LE(deviation_estimate(pm, assemble_operator(m, d)), 1e-10);
}

TEST(FrozenLimit, UnitCoefficientMatchesDenseInverse) {
    const Mesh m = build_mesh(1, 10, GeometryConfig::box(0.2, 0.8));
    const Preconditioner pm = build_frozen_limit_preconditioner(m, ElementField(m.num_elements(), 1.0));
    const Eigen::MatrixXd inv = oracle::to_eigen(assemble_operator(m, ElementField(m.num_elements(), 1.0))).inverse();
    EXPECT_LE((materialize(pm) - inv).norm(), 1e-12 * inv.norm());
}

TEST(FrozenLimit, DeviationIsFirstOrderInL1Distance) {
    for (int dim : {1, 2}) {
        const Mesh m = build_mesh(dim, dim == 1 ? 32 : 12, GeometryConfig::box(0.25, 0.75));
        Rng rng(static_cast<std::uint64_t>(dim));
        ElementField pinf(m.num_elements()), r(m.num_elements());
        for (double& v : pinf) v = rng.uniform(1.0, 2.0);
        for (double& v : r) v = rng.uniform(0.0, 1.0);
        const Preconditioner pm = build_frozen_limit_preconditioner(m, pinf);
        std::vector<double> xs, ys;
        for (double delta : {0.1, 0.05, 0.025}) {
            ElementField p(pinf.size()), d(pinf.size());
            for (std::size_t e = 0; e < p.size(); ++e) {
                p[e] = pinf[e] + delta * r[e];
                d[e] = 1.0 / p[e];
            }
            xs.push_back(l1_distance(m, p, pinf));
            ys.push_back(deviation_estimate(pm, assemble_operator(m, d)));
        }
        EXPECT_GE(loglog_slope(xs, ys), 0.9) << dim;
    }
}

TEST(FrozenLimit, RejectsNonPositiveReference) {
    const Mesh m = build_mesh(1, 4, GeometryConfig::box(0.25, 0.75));
    try {
        build_frozen_limit_preconditioner(m, ElementField{1, 1, 0, 1});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::CoefficientBelowFloor);
    }
}

TEST(L1Distance, MeasureWeighted) {
    const Mesh m = build_mesh(2, 4, GeometryConfig::box(0.25, 0.75));
    const ElementField a(m.num_elements(), 1.0), b(m.num_elements(), 1.5);
    EXPECT_NEAR(l1_distance(m, a, b), 0.5, 1e-15);
}

TEST(Benchmark, DiagonalToyNeedsOneIteration) {
    const FormPair fp = diagonal_pair();
    const auto r = pcg_benchmark(
        decades(1, 6), [&](double e) { return fp.perturbed(e); },
        [&](double e) { return build_expansion_preconditioner(fp, 0, e); }, Vector{1, 2});
    for (std::size_t i = 0; i < r.size(); ++i) {
        EXPECT_EQ(r.iters_precond[i], 1u);
        EXPECT_GE(r.iters_plain[i], 1u);
        EXPECT_TRUE(r.failures[i].empty());
        EXPECT_GE(r.deviation[i], 0.0);
    }
}

TEST(Benchmark, InteriorBoxRobustness) {
    const Mesh m = build_mesh(2, 16, GeometryConfig::box(0.25, 0.75));
    const AssembledForms f = assemble_forms(m, DiffusivitySpec{});
    auto solver = std::make_shared<const ExpansionSolver>(f.pair, f.report);
    const Vector b = load_vector(m, [](double, double) { return 1.0; });
    const auto r = pcg_benchmark(
        decades(2, 8), [&](double e) { return f.pair.perturbed(e); },
        [&](double e) { return build_expansion_preconditioner(solver, 1, e); }, b);
    std::size_t worst = 0, run = 1, longest = 1;
    for (std::size_t i = 0; i < r.size(); ++i) {
        EXPECT_TRUE(r.failures[i].empty()) << r.failures[i];
        EXPECT_LE(r.solution_gap[i], 1e-8);
        worst = std::max(worst, r.iters_precond[i]);
        if (i > 0) {
            run = r.iters_plain[i] > r.iters_plain[i - 1] ? run + 1 : 1;
            longest = std::max(longest, run);
        }
    }
    EXPECT_LE(worst, r.iters_precond[0] + 5);
    EXPECT_GE(longest, 4u);  // three consecutive decades
}

TEST(Benchmark, FailuresAreRecorded) {
    const FormPair fp = coupled_pair();
    const auto r = pcg_benchmark(
        {1e-1, 1e-2}, [&](double e) { return e < 0.05 ? SymMatrix::identity(3) : fp.perturbed(e); },
        [&](double e) { return build_expansion_preconditioner(fp, 1, e); }, Vector{1, 1});
    ASSERT_EQ(r.size(), 2u);
    EXPECT_TRUE(r.failures[0].empty());
    EXPECT_FALSE(r.failures[1].empty());
    EXPECT_TRUE(std::isnan(r.deviation[1]));
}

TEST(Benchmark, CsvRoundTrip) {
    const FormPair fp = coupled_pair();
    const auto r = pcg_benchmark(
        decades(1, 4), [&](double e) { return fp.perturbed(e); },
        [&](double e) { return build_expansion_preconditioner(fp, 1, e); }, Vector{1, 1}, {}, [](double e) { return 2 * e; });
    std::stringstream ss;
    write_bench_csv(ss, r);
    const BenchReport back = read_bench_csv(ss);
    ASSERT_EQ(back.size(), r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        EXPECT_EQ(back.epsilons[i], r.epsilons[i]);
        EXPECT_EQ(back.iters_plain[i], r.iters_plain[i]);
        EXPECT_EQ(back.iters_precond[i], r.iters_precond[i]);
        EXPECT_EQ(back.deviation[i], r.deviation[i]);
        EXPECT_EQ(back.l1_distance[i], r.l1_distance[i]);
    }
}
