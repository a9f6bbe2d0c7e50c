#include <gtest/gtest.h>

#include "loewdisc/error.hpp"
#include "loewdisc/linalg.hpp"
#include "test_util.hpp"

using namespace loewdisc;
using namespace loewdisc::linalg;
using testutil::rel;

TEST(Svd, DiagonalExample) {
    RMatrix a = RMatrix::Zero(3, 2);
    a(0, 1) = 3.0;
    a(2, 0) = -4.0;
    const RealSvdResult s = svd(a);
    EXPECT_NEAR(s.singular_values(0), 4.0, 1e-14);
    EXPECT_NEAR(s.singular_values(1), 3.0, 1e-14);
}

TEST(Svd, RandomReconstruction) {
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index r = 2 + trial % 7, c = 1 + (trial * 3) % 9;
        const CMatrix a = testutil::random_complex(r, c);
        const SvdResult s = svd(a);
        const CMatrix back = s.U * s.singular_values.cast<cdouble>().asDiagonal() * s.V.adjoint();
        EXPECT_LE(rel(back, a), 1e-10);
        for (Eigen::Index i = 1; i < s.singular_values.size(); ++i) {
            EXPECT_GE(s.singular_values(i - 1), s.singular_values(i));
        }
        const RMatrix ar = testutil::random_real(r, c);
        const RealSvdResult sr = svd(ar);
        EXPECT_LE(rel((sr.U * sr.singular_values.asDiagonal() * sr.V.transpose()).cast<cdouble>(), ar.cast<cdouble>()),
                  1e-10);
    }
}

TEST(Svd, RejectsNonFinite) {
    RMatrix a = RMatrix::Ones(2, 2);
    a(1, 0) = std::nan("");
    EXPECT_THROW(svd(a), InvalidArgument);
}

TEST(OrderedSchur, SelectsInsideUnitDisk) {
    RMatrix d = RMatrix::Zero(4, 4);
    d.diagonal() << 3.0, 0.5, 2.0, 0.1;
    const RMatrix t = RMatrix::Identity(4, 4) + 0.4 * testutil::random_real(4, 4);
    const CMatrix a = (t * d * t.inverse()).cast<cdouble>();
    const SchurResult s = ordered_schur(a, [](cdouble z) { return std::abs(z) < 1.0; });
    EXPECT_EQ(s.n_selected, 2);
    for (Eigen::Index i = 0; i < 4; ++i) {
        EXPECT_EQ(std::abs(s.T(i, i)) < 1.0, i < 2);
    }
    EXPECT_LE(rel(s.Q * s.T * s.Q.adjoint(), a), 1e-12);
    EXPECT_LE((s.Q.adjoint() * s.Q - CMatrix::Identity(4, 4)).norm(), 1e-12);
    EXPECT_LE(s.T.triangularView<Eigen::StrictlyLower>().toDenseMatrix().norm(), 1e-12);
}

TEST(OrderedSchur, RandomInvariants) {
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index n = 2 + trial % 9;
        const CMatrix a = testutil::random_complex(n, n);
        const SchurResult s = ordered_schur(a, [](cdouble z) { return z.real() < 0.0; });
        EXPECT_LE(rel(s.Q * s.T * s.Q.adjoint(), a), 1e-11);
        for (Eigen::Index i = 0; i < n; ++i) {
            EXPECT_EQ(s.T(i, i).real() < 0.0, i < s.n_selected);
        }
    }
}

TEST(Expm, RotationAndNilpotent) {
    const double t = 0.7;
    const RMatrix rot = expm(RMatrix{{0.0, t}, {-t, 0.0}});
    EXPECT_NEAR(rot(0, 0), std::cos(t), 1e-15);
    EXPECT_NEAR(rot(0, 1), std::sin(t), 1e-15);
    const RMatrix nil = expm(RMatrix{{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {0.0, 0.0, 0.0}});
    EXPECT_NEAR(nil(0, 2), 0.5, 1e-15);
    EXPECT_NEAR(nil(0, 1), 1.0, 1e-15);
    EXPECT_LE((expm(RMatrix::Zero(3, 3)) - RMatrix::Identity(3, 3)).norm(), 0.0);
}

TEST(Expm, CommutingPairs) {
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index n = 1 + trial % 8;
        const RMatrix a = 0.5 * testutil::random_real(n, n);
        const RMatrix b = 0.3 * a * a - 0.7 * a + 0.2 * RMatrix::Identity(n, n);  // commutes with a
        const RMatrix lhs = expm(a + b);
        const RMatrix rhs = expm(a) * expm(b);
        EXPECT_LE((lhs - rhs).norm() / lhs.norm(), 1e-10);
    }
}

TEST(Sylvester, ResidualAndSingularCase) {
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index n = 1 + trial % 7, m = 1 + (trial * 5) % 6;
        const CMatrix a = testutil::random_complex(n, n) + 6.0 * CMatrix::Identity(n, n);
        const CMatrix b = testutil::random_complex(m, m);
        const CMatrix c = testutil::random_complex(n, m);
        const CMatrix x = solve_sylvester(a, b, c);
        EXPECT_LE((a * x + x * b - c).norm() / c.norm(), 1e-10);
    }
    const CMatrix one = CMatrix::Constant(1, 1, 1.0);
    EXPECT_THROW(solve_sylvester(one, -one, one), SingularEquation);
}

TEST(Lyapunov, ScalarExamples) {
    // -2x + 1 = 0 and 0.25x - x + 1 = 0
    const RMatrix q = RMatrix::Ones(1, 1);
    EXPECT_NEAR(solve_lyapunov(RMatrix{{-1.0}}, q, LyapunovKind::continuous)(0, 0), 0.5, 1e-15);
    EXPECT_NEAR(solve_lyapunov(RMatrix{{0.5}}, q, LyapunovKind::discrete)(0, 0), 4.0 / 3.0, 1e-14);
}

TEST(Lyapunov, RandomResiduals) {
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index n = 1 + trial % 10;
        const RMatrix bq = testutil::random_real(n, 2);
        const RMatrix q = bq * bq.transpose();
        const RMatrix ac = testutil::random_with_poles(n, 0.1, 4.0, true);
        const RMatrix xc = solve_lyapunov(ac, q, LyapunovKind::continuous);
        EXPECT_LE((ac * xc + xc * ac.transpose() + q).norm() / (xc.norm() * ac.norm()), 1e-10);
        const RMatrix ad = testutil::random_with_poles(n, 0.05, 0.95);
        const RMatrix xd = solve_lyapunov(ad, q, LyapunovKind::discrete);
        EXPECT_LE((ad * xd * ad.transpose() - xd + q).norm() / (xd.norm() * (1.0 + ad.squaredNorm())), 1e-10);
        EXPECT_LE((xd - xd.transpose()).norm(), 1e-10 * xd.norm());
    }
}

TEST(RealBasis, SpansConjugateClosedSubspace) {
    const CVector v = testutil::random_complex(5, 1);
    CMatrix pair(5, 2);
    pair << v, v.conjugate();
    const RMatrix b = real_basis(pair);
    ASSERT_EQ(b.cols(), 2);
    EXPECT_LE((b.transpose() * b - RMatrix::Identity(2, 2)).norm(), 1e-12);
    const CMatrix proj = b.cast<cdouble>() * (b.transpose().cast<cdouble>() * v);
    EXPECT_LE((proj - v).norm() / v.norm(), 1e-12);
}

TEST(Eigenvalues, RealMatrix) {
    const CVector e = eigenvalues(RMatrix{{0.0, 1.0}, {-2.0, -3.0}});
    std::vector<double> re{e(0).real(), e(1).real()};
    std::sort(re.begin(), re.end());
    EXPECT_NEAR(re[0], -2.0, 1e-13);
    EXPECT_NEAR(re[1], -1.0, 1e-13);
}
