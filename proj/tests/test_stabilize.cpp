#include <gtest/gtest.h>

#include "loewdisc/error.hpp"
#include "loewdisc/stabilize.hpp"
#include "test_util.hpp"

using namespace loewdisc;
using testutil::on_circle;

namespace {

// ks poles inside 0.85, ku poles with modulus in [1.2, 3], mixed by a similarity.
DiscreteStateSpace mixed_model(Eigen::Index ks, Eigen::Index ku, double h = 0.1) {
    const Eigen::Index n = ks + ku;
    RMatrix a = RMatrix::Zero(n, n);
    if (ks > 0) {
        a.topLeftCorner(ks, ks) = testutil::random_with_poles(ks, 0.1, 0.85);
    }
    a.bottomRightCorner(ku, ku) = testutil::random_with_poles(ku, 1.2, 3.0);
    const RMatrix t = RMatrix::Identity(n, n) + 0.3 * testutil::random_real(n, n);
    return {t * a * t.inverse(), t * testutil::random_real(n, 1), testutil::random_real(1, n) * t.inverse(),
            testutil::random_real(1, 1), h};
}

double circle_distance(const DiscreteStateSpace& a, const DiscreteStateSpace& b, std::size_t n, double* min_out) {
    double mx = 0.0, mn = 1e300;
    for (std::size_t i = 0; i < n; ++i) {
        const cdouble z = on_circle(2.0 * std::numbers::pi * (double(i) + 0.5) / double(n));
        const double d = std::abs(eval_discrete(a, z) - eval_discrete(b, z));
        mx = std::max(mx, d);
        mn = std::min(mn, d);
    }
    if (min_out) {
        *min_out = mn;
    }
    return mx;
}

}  // namespace

TEST(Split, SumAndPoleSeparation) {
    for (int trial = 0; trial < 10; ++trial) {
        const DiscreteStateSpace g = mixed_model(1 + trial % 4, 1 + trial % 3);
        const AdditiveSplit s = split_stable_antistable(g);
        EXPECT_EQ(s.stable.order() + s.antistable.order(), g.order());
        for (const cdouble p : poles(s.stable)) {
            EXPECT_LT(std::abs(p), 1.0);
        }
        for (const cdouble p : poles(s.antistable)) {
            EXPECT_GT(std::abs(p), 1.0);
        }
        EXPECT_EQ(s.antistable.D(0, 0), 0.0);
        for (int i = 0; i < 20; ++i) {
            const cdouble z = on_circle(testutil::uniform(-3.1, 3.1));
            const cdouble want = eval_discrete(g, z);
            EXPECT_LE(std::abs(eval_discrete(s.stable, z) + eval_discrete(s.antistable, z) - want),
                      1e-8 * std::abs(want));
        }
        EXPECT_LE(testutil::rel(l2_truncate(g).A.cast<cdouble>(), s.stable.A.cast<cdouble>()), 0.0);
    }
}

TEST(Split, PoleOnCircleIsRejected) {
    const DiscreteStateSpace g{RMatrix{{-1.0}}, RMatrix{{1.0}}, RMatrix{{1.0}}, RMatrix{{0.0}}, 0.1};
    EXPECT_THROW(split_stable_antistable(g), NumericFailure);
}

TEST(Hankel, FirstOrderClosedForms) {
    const double a = 0.6, b = 2.0, c = -1.5;
    const DiscreteStateSpace s{RMatrix{{a}}, RMatrix{{b}}, RMatrix{{c}}, RMatrix{{0.0}}, 1.0};
    EXPECT_NEAR(hankel_spectrum(s).values.at(0), std::abs(b * c) / (1.0 - a * a), 1e-13);
    const double u = 2.5;
    const DiscreteStateSpace as{RMatrix{{u}}, RMatrix{{b}}, RMatrix{{c}}, RMatrix{{0.0}}, 1.0};
    EXPECT_NEAR(hankel_spectrum_antistable(as).values.at(0), std::abs(b * c) / (u * u - 1.0), 1e-13);
}

TEST(Hankel, MatchesTruncatedHankelMatrix) {
    const DiscreteStateSpace g = testutil::random_stable_discrete(4);
    const int n = 200;
    std::vector<double> markov(2 * n);
    RVector x = g.B.col(0);
    for (int k = 0; k < 2 * n; ++k) {
        markov[k] = (g.C * x)(0);
        x = g.A * x;
    }
    RMatrix hank(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            hank(i, j) = markov[i + j];
        }
    }
    const RVector sv = linalg::svd(hank).singular_values;
    const HankelSpectrum spec = hankel_spectrum(g);
    ASSERT_EQ(spec.values.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_NEAR(spec.values[i], sv(static_cast<Eigen::Index>(i)), 1e-8 * sv(0));
    }
    EXPECT_EQ(spec.q, 1u);
}

TEST(Moebius, RoundTrip) {
    const DiscreteStateSpace g = mixed_model(2, 2, 0.3);
    for (const double alpha : {0.5, 1.0, 4.0}) {
        const DiscreteStateSpace back = to_discrete_moebius(to_continuous_moebius(g, alpha), alpha, g.h);
        EXPECT_EQ(back.h, g.h);
        for (int i = 0; i < 10; ++i) {
            const cdouble z = on_circle(testutil::uniform(-3.0, 3.0));
            EXPECT_LE(std::abs(eval_discrete(back, z) - eval_discrete(g, z)), 1e-9 * std::abs(eval_discrete(g, z)));
        }
    }
    const DiscreteStateSpace bad{RMatrix{{-1.0}}, RMatrix{{1.0}}, RMatrix{{1.0}}, RMatrix{{0.0}}, 0.1};
    EXPECT_THROW(to_continuous_moebius(bad, 1.0), Error);
}

TEST(Glover, ErrorIsAllPass) {
    const ContinuousStateSpace g = testutil::random_stable_continuous(5, true);
    const GloverResult r = glover_nehari(g);
    EXPECT_EQ(r.antistable.order(), 5 - static_cast<Eigen::Index>(r.q));
    for (const cdouble p : poles(r.antistable)) {
        EXPECT_GT(p.real(), 0.0);
    }
    for (const double w : {0.0, 0.3, 1.0, 7.0, 100.0}) {
        const cdouble s(0.0, w);
        EXPECT_NEAR(std::abs(eval_continuous(g, s) - eval_continuous(r.antistable, s)), r.sigma, 1e-8 * r.sigma);
    }
}

TEST(Nehari, OptimalityCertificate) {
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index ku = 1 + trial % 3;
        const Eigen::Index ks = (trial * 7) % (9 - ku);
        const DiscreteStateSpace g = mixed_model(ks, ku);
        const NehariResult r = nehari_project_detailed(g);
        const double sigma = hankel_spectrum_antistable(split_stable_antistable(g).antistable).values.at(0);
        EXPECT_TRUE(is_stable(r.model));
        double mn = 0.0;
        const double err = circle_distance(g, r.model, 4096, &mn);
        EXPECT_NEAR(err, sigma, 1e-5 * sigma) << "trial " << trial;
        EXPECT_NEAR(mn, sigma, 1e-5 * sigma);
        EXPECT_NEAR(r.error, sigma, 1e-12 * sigma);
        EXPECT_EQ(r.model.order(), ks + ku - static_cast<Eigen::Index>(r.q));
    }
}

TEST(Nehari, StableModelIsUntouched) {
    const DiscreteStateSpace g = testutil::random_stable_discrete(3);
    const NehariResult r = nehari_project_detailed(g);
    EXPECT_EQ(r.antistable_order, 0u);
    EXPECT_EQ(r.model.A, g.A);
    EXPECT_EQ(stabilize(g, Stabilization::l2).order(), 3);
}

TEST(Nehari, PurelyAntistableModel) {
    // bc/(z - a) - d is all-pass only for d = -a b c / (a^2 - 1), since |z - a| = |1 - a z| on the circle.
    const double a = 2.0, b = 1.0, c = 3.0;
    const DiscreteStateSpace g{RMatrix{{a}}, RMatrix{{b}}, RMatrix{{c}}, RMatrix{{0.5}}, 1.0};
    const DiscreteStateSpace p = nehari_project(g);
    EXPECT_EQ(p.order(), 0);
    double mn = 0.0;
    EXPECT_NEAR(circle_distance(g, p, 512, &mn), std::abs(b * c) / (a * a - 1.0), 1e-10);
    EXPECT_NEAR(p.D(0, 0), 0.5 - a * b * c / (a * a - 1.0), 1e-10);
}

TEST(Stabilize, NoneAndParallel) {
    const DiscreteStateSpace g = mixed_model(2, 1);
    EXPECT_EQ(stabilize(g, Stabilization::none).A, g.A);
    const DiscreteStateSpace l2 = stabilize(g, Stabilization::l2);
    EXPECT_EQ(l2.order(), 2);
    const DiscreteStateSpace sum = parallel(g, l2);
    const cdouble z = on_circle(0.4);
    EXPECT_LE(std::abs(eval_discrete(sum, z) - eval_discrete(g, z) - eval_discrete(l2, z)), 1e-10);
    DiscreteStateSpace other = l2;
    other.h = 0.2;
    EXPECT_THROW(parallel(g, other), InvalidArgument);
}
