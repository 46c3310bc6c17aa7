#include <gtest/gtest.h>

#include "beurling/matrix.hpp"
#include "beurling/random.hpp"

using namespace beurling;

namespace {

CMatrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
    CMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = rng.complex_normal();
    return m;
}

CMatrix random_hermitian(std::size_t n, Rng& rng) {
    const CMatrix a = random_matrix(n, n, rng);
    return (a + a.adjoint()) * cplx(0.5);
}

CMatrix random_unitary(std::size_t n, Rng& rng) { return polar_complete(random_matrix(n, n, rng)).unitary; }

}  // namespace

TEST(Tolerance, RejectsNegativeOrNonFinite) {
    EXPECT_NO_THROW(Tolerance{}.validate());
    EXPECT_THROW((Tolerance{-1.0, 1e-9}.validate()), InvalidArgument);
    EXPECT_THROW((Tolerance{1e-10, std::nan("")}.validate()), InvalidArgument);
}

TEST(CMatrix, ShapeAndProduct) {
    const CMatrix a{{1.0, 2.0}, {3.0, 4.0}};
    const CMatrix b{{0.0, 1.0}, {1.0, 0.0}};
    const CMatrix ab = a * b;
    EXPECT_EQ(ab(0, 0), cplx(2.0));
    EXPECT_EQ(ab(1, 1), cplx(3.0));
    EXPECT_THROW(CMatrix(2, 2, std::vector<cplx>(3)), InvalidArgument);
    EXPECT_THROW(a * CMatrix(3, 1), InvalidArgument);
}

TEST(Kron, IndexConvention) {
    const CMatrix a{{1.0, 2.0}, {3.0, 4.0}};
    const CMatrix b{{0.0, 5.0}, {6.0, 7.0}};
    const CMatrix k = kron(a, b);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t p = 0; p < 2; ++p)
                for (std::size_t q = 0; q < 2; ++q) EXPECT_EQ(k(i * 2 + p, j * 2 + q), a(i, j) * b(p, q));
}

TEST(Kron, FlipSwapsFactors) {
    Rng rng(3);
    const CMatrix a = random_matrix(3, 3, rng), b = random_matrix(3, 3, rng);
    EXPECT_LT(distance(flip_legs(kron(a, b), 3), kron(b, a)), 1e-14);
}

TEST(HermitianEig, SmallClosedForms) {
    auto e = hermitian_eig(CMatrix::identity(3));
    EXPECT_EQ(e.values, (std::vector<double>{1.0, 1.0, 1.0}));

    e = hermitian_eig(CMatrix{{0.0, 1.0}, {1.0, 0.0}});
    EXPECT_NEAR(e.values[0], 1.0, 1e-15);
    EXPECT_NEAR(e.values[1], -1.0, 1e-15);

    // Square of the Z2 weight: omega omega* = [[5/8,3/8],[3/8,5/8]].
    e = hermitian_eig(CMatrix{{0.625, 0.375}, {0.375, 0.625}});
    EXPECT_NEAR(e.values[0], 1.0, 1e-15);
    EXPECT_NEAR(e.values[1], 0.25, 1e-15);
}

TEST(HermitianEig, ComplexOffDiagonal) {
    // [[2, i],[-i, 2]] has eigenvalues 3 and 1.
    const auto e = hermitian_eig(CMatrix{{2.0, cplx(0, 1)}, {cplx(0, -1), 2.0}});
    EXPECT_NEAR(e.values[0], 3.0, 1e-14);
    EXPECT_NEAR(e.values[1], 1.0, 1e-14);
}

TEST(HermitianEig, RejectsBadInput) {
    EXPECT_THROW(hermitian_eig(CMatrix(2, 3)), InvalidArgument);
    EXPECT_THROW(hermitian_eig(CMatrix{{0.0, 1.0}, {0.0, 0.0}}), VerificationError);
}

class RandomHermitian : public ::testing::TestWithParam<std::size_t> {};

TEST_P(RandomHermitian, ReconstructsAndIsUnitary) {
    Rng rng(100 + GetParam());
    const Tolerance tol;
    for (int trial = 0; trial < 5; ++trial) {
        const CMatrix m = random_hermitian(GetParam(), rng);
        const auto e = hermitian_eig(m, tol);
        const CMatrix rec = e.vectors * CMatrix::diagonal(e.values) * e.vectors.adjoint();
        EXPECT_LE(distance(rec, m), tol.rel_eps * m.frobenius_norm());
        EXPECT_LE(distance(e.vectors.adjoint() * e.vectors, CMatrix::identity(GetParam())), tol.abs_eps);
        EXPECT_TRUE(std::is_sorted(e.values.rbegin(), e.values.rend()));
        // Trace is the eigenvalue sum.
        double s = 0.0;
        for (double v : e.values) s += v;
        EXPECT_NEAR(s, m.trace().real(), 1e-10);
    }
}

INSTANTIATE_TEST_SUITE_P(Sizes, RandomHermitian, ::testing::Values(1, 2, 5, 16, 40));

TEST(HermitianEig, AgreesWithJacobi) {
    Rng rng(31);
    for (std::size_t n : {3u, 17u, 64u}) {
        const CMatrix m = random_hermitian(n, rng);
        const auto ql = hermitian_eig(m), jac = hermitian_eig_jacobi(m);
        for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(ql.values[k], jac.values[k], 1e-11) << n << " " << k;
    }
}

TEST(HermitianEig, LowRankWithLargeNullSpace) {
    // Rank 3 in dimension 100, scaled to 1e-3: the zero cluster must deflate.
    Rng rng(32);
    const CMatrix b = random_matrix(100, 3, rng);
    const CMatrix m = b * b.adjoint() * cplx(1e-3);
    const auto e = hermitian_eig(m);
    const auto jac = hermitian_eig_jacobi(m);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(e.values[k], jac.values[k], 1e-12);
    for (std::size_t k = 3; k < 100; ++k) EXPECT_NEAR(e.values[k], 0.0, 1e-15);
    const CMatrix rec = e.vectors * CMatrix::diagonal(e.values) * e.vectors.adjoint();
    EXPECT_LE(distance(rec, m), 1e-12 * m.frobenius_norm());
    EXPECT_LE(distance(e.vectors.adjoint() * e.vectors, CMatrix::identity(100)), 1e-12);
}

TEST(HermitianEig, DiagonalAndZeroInputs) {
    const auto z = hermitian_eig(CMatrix(4, 4));
    for (double v : z.values) EXPECT_EQ(v, 0.0);
    EXPECT_LE(distance(z.vectors, CMatrix::identity(4)), 1e-15);
    const auto d = hermitian_eig(CMatrix::diagonal(std::vector<double>{1.0, 3.0, 2.0}));
    EXPECT_EQ(d.values, (std::vector<double>{3.0, 2.0, 1.0}));
}

TEST(Svd, ReconstructsRectangularAndDeficient) {
    Rng rng(7);
    for (auto [r, c] : std::vector<std::pair<std::size_t, std::size_t>>{{4, 4}, {6, 3}, {3, 6}, {12, 12}}) {
        const CMatrix m = random_matrix(r, c, rng);
        const auto d = svd(m);
        const CMatrix rec = d.u * CMatrix::diagonal(d.s) * d.v.adjoint();
        EXPECT_LT(distance(rec, m), 1e-12 * m.frobenius_norm());
        const std::size_t k = std::min(r, c);
        EXPECT_LT(distance(d.u.adjoint() * d.u, CMatrix::identity(k)), 1e-12);
        EXPECT_LT(distance(d.v.adjoint() * d.v, CMatrix::identity(k)), 1e-12);
    }
    // Rank one: u v*.
    CMatrix u(5, 1), v(5, 1);
    for (std::size_t i = 0; i < 5; ++i) {
        u(i, 0) = rng.complex_normal();
        v(i, 0) = rng.complex_normal();
    }
    const CMatrix m = u * v.adjoint();
    const auto d = svd(m);
    EXPECT_NEAR(d.s[0], u.frobenius_norm() * v.frobenius_norm(), 1e-12);
    for (std::size_t k = 1; k < 5; ++k) EXPECT_LT(d.s[k], 1e-13);
    EXPECT_LT(distance(d.u.adjoint() * d.u, CMatrix::identity(5)), 1e-12);
}

TEST(Svd, NormsAgreeWithEigenvalues) {
    Rng rng(11);
    const CMatrix h = random_hermitian(8, rng);
    const auto e = hermitian_eig(h);
    double tn = 0.0, on = 0.0;
    for (double v : e.values) {
        tn += std::abs(v);
        on = std::max(on, std::abs(v));
    }
    EXPECT_NEAR(trace_norm(h), tn, 1e-11);
    EXPECT_NEAR(op_norm(h), on, 1e-12);
}

TEST(PsdLeq, Examples) {
    auto r = psd_leq(CMatrix(3, 3), CMatrix::identity(3));
    EXPECT_TRUE(r.holds);
    EXPECT_NEAR(r.margin, 1.0, 1e-15);
    r = psd_leq(CMatrix::identity(3) * cplx(2.0), CMatrix::identity(3));
    EXPECT_FALSE(r.holds);
    EXPECT_NEAR(r.margin, -1.0, 1e-15);
    EXPECT_THROW(psd_leq(CMatrix(2, 2), CMatrix(3, 3)), InvalidArgument);
}

TEST(PsdLeq, PartialOrderProperties) {
    Rng rng(5);
    const Tolerance tol;
    for (int trial = 0; trial < 10; ++trial) {
        const CMatrix a = random_hermitian(6, rng);
        const auto refl = psd_leq(a, a, tol);
        EXPECT_TRUE(refl.holds);
        EXPECT_GE(refl.margin, -tol.abs_eps);
        // a <= a + p p* for any p.
        const CMatrix p = random_matrix(6, 2, rng);
        EXPECT_TRUE(psd_leq(a, a + p * p.adjoint(), tol).holds);
        // Transitivity through a middle element.
        const CMatrix q = random_matrix(6, 1, rng);
        EXPECT_TRUE(psd_leq(a, a + p * p.adjoint() + q * q.adjoint(), tol).holds);
    }
}

TEST(Pinv, Examples) {
    EXPECT_LT(distance(pinv(CMatrix::identity(4)), CMatrix::identity(4)), 1e-15);
    const CMatrix d = CMatrix::diagonal(std::vector<double>{2.0, 0.0});
    EXPECT_LT(distance(pinv(d), CMatrix::diagonal(std::vector<double>{0.5, 0.0})), 1e-15);
}

TEST(Pinv, MoorePenroseIdentities) {
    Rng rng(9);
    const Tolerance tol;
    for (auto [r, c] : std::vector<std::pair<std::size_t, std::size_t>>{{5, 5}, {7, 4}, {3, 8}}) {
        // Rank-deficient product.
        const CMatrix m = random_matrix(r, 2, rng) * random_matrix(2, c, rng);
        const CMatrix p = pinv(m, tol);
        const double s = tol.rel_eps * std::max(1.0, m.frobenius_norm());
        EXPECT_LT(distance(m * p * m, m), s);
        EXPECT_LT(distance(p * m * p, p), s);
        EXPECT_LT(distance((m * p).adjoint(), m * p), s);
        EXPECT_LT(distance((p * m).adjoint(), p * m), s);
    }
}

TEST(Polar, UnitaryInput) {
    Rng rng(13);
    const CMatrix u = random_unitary(5, rng);
    const auto p = polar_complete(u);
    EXPECT_LT(distance(p.unitary, u), 1e-12);
    EXPECT_LT(distance(p.partial_isometry, u), 1e-12);
    EXPECT_LT(distance(p.positive, CMatrix::identity(5)), 1e-12);
}

TEST(Polar, KernelCompletion) {
    const CMatrix m = CMatrix::diagonal(std::vector<double>{2.0, 0.0});
    const auto p = polar_complete(m);
    EXPECT_LT(distance(p.positive, m), 1e-15);
    EXPECT_LT(distance(p.partial_isometry, CMatrix::diagonal(std::vector<double>{1.0, 0.0})), 1e-15);
    EXPECT_LT(distance(p.unitary.adjoint() * p.unitary, CMatrix::identity(2)), 1e-15);
    EXPECT_LT(distance(p.unitary * CMatrix::diagonal(std::vector<double>{1.0, 0.0}), p.partial_isometry), 1e-15);
}

TEST(Polar, RandomDeficientProperties) {
    Rng rng(17);
    const Tolerance tol;
    for (int trial = 0; trial < 5; ++trial) {
        const CMatrix m = random_matrix(6, 3, rng) * random_matrix(3, 6, rng);
        const auto p = polar_complete(m, tol);
        const CMatrix i6 = CMatrix::identity(6);
        EXPECT_LT(distance(p.unitary.adjoint() * p.unitary, i6), tol.abs_eps);
        EXPECT_LT(distance(p.unitary * p.unitary.adjoint(), i6), tol.abs_eps);
        EXPECT_LT(distance(p.partial_isometry * p.positive, m), tol.rel_eps * m.frobenius_norm());
        EXPECT_LT(distance(p.positive * p.positive, m.adjoint() * m), 1e-9 * m.frobenius_norm() * m.frobenius_norm());
        const CMatrix range = range_projection(p.positive, tol);
        EXPECT_LT(distance(p.partial_isometry.adjoint() * p.partial_isometry, range), 1e-9);
        EXPECT_LT(distance(p.unitary * range, p.partial_isometry), 1e-9);
    }
}

TEST(Solve, InverseAndSingular) {
    Rng rng(19);
    const CMatrix a = random_matrix(6, 6, rng);
    EXPECT_LT(distance(a * inverse(a), CMatrix::identity(6)), 1e-11);
    EXPECT_THROW(solve(CMatrix(2, 2), CMatrix::identity(2)), InvalidArgument);
}

TEST(HermitianFunction, SquareRoot) {
    Rng rng(23);
    const CMatrix a = random_matrix(5, 5, rng);
    const CMatrix p = a * a.adjoint();
    const CMatrix r = hermitian_function(p, [](double x) { return std::sqrt(std::max(x, 0.0)); });
    EXPECT_LT(distance(r * r, p), 1e-10 * p.frobenius_norm());
}

TEST(Rng, DeterministicAndSplittable) {
    Rng a(42), b(42);
    for (int i = 0; i < 10; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
    Rng c = Rng(42).split("spectrum"), d = Rng(42).split("spectrum"), e = Rng(42).split("weights");
    EXPECT_EQ(c.next_u64(), d.next_u64());
    EXPECT_NE(Rng(42).split("spectrum").next_u64(), e.next_u64());
    for (int i = 0; i < 1000; ++i) {
        const double u = a.uniform();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
}
