#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "eigen_oracle.hpp"
#include "hcx/linalg.hpp"

using namespace hcx;

namespace {

SymMatrix sym(std::initializer_list<std::initializer_list<double>> rows) {
    return SymMatrix::from_dense(DenseMatrix(rows));
}

}  // namespace

TEST(SymMatrix, UpperTriangleIsAuthoritative) {
    const SymMatrix m = SymMatrix::from_dense(DenseMatrix{{1, 2}, {5, 3}});
    EXPECT_EQ(m(1, 0), 2.0);
    EXPECT_EQ(m(0, 1), 2.0);
}

TEST(SymMatrix, RejectsNonFinite) {
    EXPECT_THROW(SymMatrix::from_dense(DenseMatrix{{1, NAN}, {0, 1}}), Error);
}

TEST(SymMatrix, SparseAndDenseAgree) {
    const SymMatrix d = oracle::random_spd(30, 4);
    const SymMatrix s = SymMatrix::from_dense(d.to_dense(), Layout::Sparse);
    ASSERT_FALSE(s.is_dense());
    Rng rng(9);
    const Vector x = rng.normal_vector(30);
    EXPECT_LT(oracle::rel_diff(s.apply(x), d.apply(x)), 1e-14);
    const std::vector<std::size_t> idx{3, 7, 11};
    const SymMatrix sub = s.principal_submatrix(idx);
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b) EXPECT_EQ(sub(a, b), d(idx[a], idx[b]));
}

TEST(Cholesky, Examples) {
    EXPECT_DOUBLE_EQ(cholesky(sym({{4}})).lower()(0, 0), 2.0);
    const auto f = cholesky(sym({{2, 0}, {0, 2}}));
    EXPECT_DOUBLE_EQ(f.lower()(0, 0), std::sqrt(2.0));
    EXPECT_DOUBLE_EQ(f.lower()(1, 1), std::sqrt(2.0));
    EXPECT_EQ(f.lower()(1, 0), 0.0);
    const Vector x = cholesky(sym({{2, 1}, {1, 2}})).solve(Vector{1, 1});
    EXPECT_NEAR(x[0], 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(x[1], 1.0 / 3.0, 1e-15);
}

TEST(Cholesky, RejectsIndefiniteAndSingular) {
    try {
        cholesky(sym({{1, 2}, {2, 1}}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotPositiveDefinite);
    }
    EXPECT_THROW(cholesky(sym({{1, 0}, {0, 0}})), Error);
}

TEST(Cholesky, ReconstructionProperty) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const SymMatrix m = oracle::random_spd(5 + seed, seed);
        const DenseMatrix diff = cholesky(m).reconstruct() - m.to_dense();
        EXPECT_LE(diff.frobenius(), 1e-10 * m.frobenius());
    }
}

TEST(Cg, IdentityOneIteration) {
    const SymMatrix a = SymMatrix::identity(2);
    const auto r = cg_solve(as_operator(a), Vector{3, 4}, CgOptions{1e-10, 10});
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.iterations, 1u);
    EXPECT_NEAR(r.solution[0], 3.0, 1e-14);
    EXPECT_NEAR(r.solution[1], 4.0, 1e-14);
}

TEST(Cg, DiagonalTerminatesInTwoSteps) {
    const SymMatrix a = sym({{1, 0}, {0, 2}});
    const auto r = cg_solve(as_operator(a), Vector{1, 2}, CgOptions{1e-10, 10});
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.iterations, 2u);
    EXPECT_NEAR(r.solution[0], 1.0, 1e-12);
    EXPECT_NEAR(r.solution[1], 1.0, 1e-12);
}

TEST(Cg, RandomSpdMatchesDenseFactorization) {
    const SymMatrix a = oracle::random_spd(20, 2024);
    Rng rng(1);
    const Vector b = rng.normal_vector(20);
    const auto r = cg_solve(as_operator(a), b, CgOptions{1e-12, 1000});
    ASSERT_TRUE(r.converged);
    EXPECT_LT(oracle::rel_diff(r.solution, oracle::solve(a, b)), 1e-8);
}

TEST(Cg, AgreesWithCholeskyOnRandomCases) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(seed + 100);
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 99);
        const SymMatrix a = oracle::random_spd(n, seed);
        const Vector b = rng.normal_vector(n);
        const auto r = cg_solve(as_operator(a), b, CgOptions{1e-13, 20 * n});
        ASSERT_TRUE(r.converged) << "seed " << seed;
        EXPECT_LT(oracle::rel_diff(r.solution, cholesky(a).solve(b)), 1e-8) << "seed " << seed;
    }
}

TEST(Cg, PreconditionedResidualsShrink) {
    const SymMatrix a = oracle::random_spd(40, 5);
    const Vector d = a.diagonal();
    const auto jacobi = [&d](ConstVec x, MutVec y) {
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] / d[i];
    };
    Rng rng(3);
    const auto r = cg_solve(as_operator(a), rng.normal_vector(40), CgOptions{1e-10, 400}, jacobi);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.residuals.size(), r.iterations + 1);
    EXPECT_LE(r.residuals.back(), 1e-10 * r.residuals.front());
}

TEST(Cg, MaxIterationsReturnsFlag) {
    const SymMatrix a = oracle::random_spd(30, 8, 1e-3);
    const auto r = cg_solve(as_operator(a), Vector(30, 1.0), CgOptions{1e-14, 3});
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.iterations, 3u);
    EXPECT_EQ(r.solution.size(), 30u);
}

TEST(Cg, DetectsIndefiniteOperator) {
    const SymMatrix a = sym({{1, 0}, {0, -1}});
    try {
        cg_solve(as_operator(a), Vector{0, 1}, CgOptions{1e-10, 10});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BreakdownNonSPD);
    }
}

TEST(ExtremalEigs, Examples) {
    auto e = extremal_eigs(sym({{1, 0, 0}, {0, 2, 0}, {0, 0, 3}}));
    EXPECT_NEAR(e.lambda_min, 1.0, 1e-14);
    EXPECT_NEAR(e.lambda_max, 3.0, 1e-14);
    e = extremal_eigs(sym({{2, 1}, {1, 2}}));
    EXPECT_NEAR(e.lambda_min, 1.0, 1e-14);
    EXPECT_NEAR(e.lambda_max, 3.0, 1e-14);
    e = extremal_eigs(SymMatrix::identity(10));
    EXPECT_EQ(e.lambda_min, 1.0);
    EXPECT_EQ(e.lambda_max, 1.0);
}

TEST(ExtremalEigs, JacobiMatchesEigenOracle) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const SymMatrix m = SymMatrix::from_dense(Rng(seed).uniform_matrix(25, 25, -1, 1));
        const auto ref = oracle::eigenvalues(m);
        const SymEigen got = jacobi_eigen(m.to_dense(), true);
        for (std::size_t k = 0; k < 25; ++k) EXPECT_NEAR(got.values[k], ref(static_cast<long>(k)), 1e-12);
        // M v = lambda v
        for (std::size_t k = 0; k < 25; ++k) {
            const Vector v = got.vectors.column(k);
            EXPECT_LT(norm2(subtract(m.apply(v), scaled(got.values[k], v))), 1e-12);
        }
    }
}

TEST(ExtremalEigs, RayleighQuotientsStayInside) {
    const SymMatrix m = oracle::random_spd(40, 77, 0.01);
    const auto e = extremal_eigs(m);
    Rng rng(78);
    for (int i = 0; i < 100; ++i) {
        const Vector x = rng.normal_vector(40);
        const double rq = dot(x, m.apply(x)) / dot(x, x);
        EXPECT_GE(rq, e.lambda_min);
        EXPECT_LE(rq, e.lambda_max + 1e-8 * std::abs(e.lambda_max));
    }
}

TEST(ExtremalEigs, LanczosOnSparseStorage) {
    const std::size_t n = 700;
    std::vector<Triplet> t;
    Rng rng(5);
    for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, 4.0 + rng.uniform()});
    t[0].value = 1.0;
    t[1].value = 10.0;
    for (std::size_t i = 2; i + 1 < n; ++i) t.push_back({i, i + 1, 0.1});
    const SymMatrix m = SymMatrix::from_triplets(n, t);
    ASSERT_FALSE(m.is_dense());
    const auto e = extremal_eigs(m);
    EXPECT_NEAR(e.lambda_min, 1.0, 1e-8);
    EXPECT_NEAR(e.lambda_max, 10.0, 1e-7);
}

TEST(ExtremalEigs, LanczosCapSignalsNoConvergence) {
    // 1D Laplacian: lambda_min is too clustered to resolve in 200 steps
    const std::size_t n = 2000;
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < n; ++i) {
        t.push_back({i, i, 2.0});
        if (i + 1 < n) t.push_back({i, i + 1, -1.0});
    }
    try {
        extremal_eigs(SymMatrix::from_triplets(n, t));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoConvergence);
    }
}

TEST(Basis, ComplementExamples) {
    Basis b = Basis::coordinate(2, {1});
    Basis q = orthonormal_complement(b);
    ASSERT_EQ(q.dim(), 1u);
    EXPECT_EQ(q.column(0), (Vector{1, 0}));

    const double s = 1.0 / std::sqrt(2.0);
    DenseMatrix c(2, 1);
    c(0, 0) = s;
    c(1, 0) = s;
    q = orthonormal_complement(Basis::from_columns(c));
    ASSERT_EQ(q.dim(), 1u);
    const Vector v = q.column(0);
    EXPECT_NEAR(std::abs(v[0]), s, 1e-15);
    EXPECT_NEAR(v[0], -v[1], 1e-15);
}

TEST(Basis, RandomComplementIsOrthonormalAndOrthogonal) {
    Rng rng(10);
    DenseMatrix raw(10, 3);
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t j = 0; j < 3; ++j) raw(i, j) = rng.normal();
    // Gram-Schmidt self-check on the input basis first
    std::vector<Vector> cols;
    for (std::size_t j = 0; j < 3; ++j) {
        Vector v = raw.column(j);
        for (const auto& u : cols) axpy(-dot(v, u), u, v);
        scale(1.0 / norm2(v), v);
        raw.set_column(j, v);
        cols.push_back(v);
    }
    const Basis b = Basis::from_columns(raw);
    const Basis q = orthonormal_complement(b);
    ASSERT_EQ(q.dim(), 7u);
    const DenseMatrix qtq = q.columns().transpose() * q.columns();
    EXPECT_LE((qtq - DenseMatrix::identity(7)).max_abs(), 1e-12);
    EXPECT_LE((q.columns().transpose() * b.columns()).max_abs(), 1e-12);
}

TEST(Basis, FullSubspaceHasEmptyComplement) {
    EXPECT_EQ(orthonormal_complement(Basis::coordinate(3, {0, 1, 2})).dim(), 0u);
    EXPECT_EQ(orthonormal_complement(Basis::from_columns(DenseMatrix::identity(3))).dim(), 0u);
}

TEST(Basis, RejectsNonOrthonormalColumns) {
    EXPECT_THROW(Basis::from_columns(DenseMatrix{{1, 1}, {0, 1}}), Error);
}

TEST(MatrixMarket, RoundTripPreservesEntries) {
    for (Layout layout : {Layout::Dense, Layout::Sparse}) {
        const SymMatrix m = SymMatrix::from_dense(oracle::random_spd(12, 3).to_dense(), layout);
        std::stringstream ss;
        write_matrix_market(ss, m);
        const SymMatrix back = read_matrix_market(ss);
        EXPECT_EQ((back.to_dense() - m.to_dense()).max_abs(), 0.0);
    }
}

TEST(MatrixMarket, ReadsGeneralAndRejectsGarbage) {
    std::stringstream ok("%%MatrixMarket matrix coordinate real general\n% c\n2 2 3\n1 1 2\n1 2 1\n2 1 1\n");
    const SymMatrix m = read_matrix_market(ok);
    EXPECT_EQ(m(0, 1), 1.0);
    EXPECT_EQ(m(1, 1), 0.0);
    std::stringstream bad("%%MatrixMarket matrix array real general\n2 2\n");
    EXPECT_THROW(read_matrix_market(bad), Error);
    std::stringstream truncated("%%MatrixMarket matrix coordinate real symmetric\n2 2 3\n1 1 2\n");
    EXPECT_THROW(read_matrix_market(truncated), Error);
}
