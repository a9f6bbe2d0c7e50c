#include <gtest/gtest.h>

#include "loewdisc/error.hpp"
#include "loewdisc/loewner.hpp"
#include "loewdisc/pipeline.hpp"
#include "test_util.hpp"

using namespace loewdisc;
using testutil::on_circle;

namespace {

// R = 1 data sampled from a discrete model.
FrequencyDataSet discrete_data(const DiscreteStateSpace& g, std::size_t pairs) {
    return make_dataset(linear_frequency_grid(g.h, pairs), g.h,
                        [&](double w) { return eval_discrete(g, std::polar(1.0, w * g.h)); });
}

}  // namespace

TEST(Holder, ClosedFormAndLimits) {
    const double h = 0.4, w = 1.0;
    const cdouble want = (1.0 - std::exp(cdouble(0.0, -w * h))) / cdouble(0.0, w * h);
    EXPECT_LE(std::abs(holder_transfer(w, h) - want), 1e-15);
    EXPECT_LE(std::abs(holder_transfer(1e-12, h) - 1.0), 1e-12);
    EXPECT_NEAR(std::abs(holder_transfer(std::numbers::pi / h, h)), 2.0 / std::numbers::pi, 1e-15);
}

TEST(Dataset, DefaultGridAndValues) {
    const ContinuousStateSpace g = example_resonant_plant();
    const double h = 0.4;
    const FrequencyDataSet d = build_dataset(g, h, 50);
    ASSERT_EQ(d.pairs(), 100u);
    EXPECT_DOUBLE_EQ(d.omegas.front(), 1e-3);
    EXPECT_NEAR(d.omegas.back(), std::numbers::pi / h - 1e-3, 1e-12);
    for (std::size_t i = 0; i < d.pairs(); i += 7) {
        const double w = d.omegas[i];
        EXPECT_LE(std::abs(d.nodes[2 * i] - std::polar(1.0, w * h)), 1e-15);
        EXPECT_EQ(d.nodes[2 * i + 1], std::conj(d.nodes[2 * i]));
        EXPECT_EQ(d.values[2 * i + 1], std::conj(d.values[2 * i]));
        const cdouble want = eval_continuous(g, cdouble(0.0, w)) / holder_transfer(w, h);
        EXPECT_LE(std::abs(d.values[2 * i] - want), 1e-14 * std::abs(want));
    }
    // The lightly damped pair at sqrt(5) rad/s dominates the data.
    std::size_t arg = 0;
    for (std::size_t i = 0; i < d.pairs(); ++i) {
        if (std::abs(d.values[2 * i]) > std::abs(d.values[2 * arg])) {
            arg = i;
        }
    }
    EXPECT_NEAR(d.omegas[arg], std::sqrt(5.0), 0.1);
}

TEST(Dataset, RejectsMimoAndPoles) {
    const ContinuousStateSpace mimo{RMatrix{{-1.0}}, RMatrix{{1.0, 1.0}}, RMatrix{{1.0}}, RMatrix{{0.0, 0.0}}};
    EXPECT_THROW(build_dataset(mimo, 0.1, 5), Unsupported);
    // Undamped oscillator with a pole exactly on a grid frequency.
    const double h = 0.1;
    const double w0 = linear_frequency_grid(h, 10)[3];
    const ContinuousStateSpace osc{RMatrix{{0.0, 1.0}, {-w0 * w0, 0.0}}, RMatrix{{0.0}, {1.0}}, RMatrix{{1.0, 0.0}},
                                   RMatrix{{0.0}}};
    EXPECT_THROW(build_dataset(osc, h, 5), PoleHit);
}

TEST(Partition, AlternatesAndKeepsConjugates) {
    const FrequencyDataSet d = discrete_data(testutil::random_stable_discrete(2), 6);
    const DataPartition p = partition(d);
    ASSERT_EQ(p.mu.size(), 6u);
    ASSERT_EQ(p.lambda.size(), 6u);
    EXPECT_EQ(p.mu[0], d.nodes[0]);
    EXPECT_EQ(p.mu[1], d.nodes[1]);
    EXPECT_EQ(p.lambda[0], d.nodes[2]);
    EXPECT_EQ(p.mu[2], d.nodes[4]);
    const FrequencyDataSet odd = discrete_data(testutil::random_stable_discrete(2), 5);
    EXPECT_THROW(partition(odd), InvalidArgument);
}

TEST(Pencil, HandExample) {
    // f(x) = x^2 sampled at mu = 1, lambda = 2.
    const LoewnerPencil p = build_pencil({1.0}, {2.0}, {1.0}, {4.0});
    EXPECT_LE(std::abs(p.L(0, 0) - 3.0), 1e-15);
    EXPECT_LE(std::abs(p.Ls(0, 0) - 7.0), 1e-15);
    EXPECT_THROW(build_pencil({1.0}, {1.0}, {1.0}, {2.0}), InvalidArgument);
}

TEST(Pencil, SylvesterIdentities) {
    const FrequencyDataSet d = discrete_data(testutil::random_stable_discrete(3), 8);
    const LoewnerPencil p = build_pencil(partition(d));
    const Eigen::Index n = p.size();
    CVector mu(n), la(n), wm(n), wl(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        mu(i) = p.mu[i];
        la(i) = p.lambda[i];
        wm(i) = p.w_mu[i];
        wl(i) = p.w_lambda[i];
    }
    const CVector ones = CVector::Ones(n);
    const CMatrix r1 = mu.asDiagonal() * p.L - p.L * la.asDiagonal() - (wm * ones.transpose() - ones * wl.transpose());
    const CMatrix r2 = mu.asDiagonal() * p.Ls - p.Ls * la.asDiagonal() -
                       (mu.cwiseProduct(wm) * ones.transpose() - ones * la.cwiseProduct(wl).transpose());
    EXPECT_LE(r1.norm(), 1e-12 * p.L.norm());
    EXPECT_LE(r2.norm(), 1e-12 * p.Ls.norm());
}

TEST(Pencil, RealTransformPreservesTransfer) {
    // Nodes well away from +-1, where conjugates nearly coincide and E degrades.
    const DiscreteStateSpace g = testutil::random_stable_discrete(4, 0.1, false);
    const FrequencyDataSet d = make_dataset({5.0, 12.0, 20.0, 27.0}, g.h, [&](double w) {
        return eval_discrete(g, std::polar(1.0, w * g.h));
    });
    const LoewnerPencil p = build_pencil(partition(d));
    const DescriptorModel desc = descriptor(p);
    const DiscreteStateSpace real = realify(desc, g.h, true);
    for (int i = 0; i < 50; ++i) {
        const cdouble z = on_circle(testutil::uniform(-3.1, 3.1));
        const cdouble a = eval_discrete(desc, z), b = eval_discrete(real, z);
        EXPECT_LE(std::abs(a - b), 1e-9 * std::abs(a));
    }
    // The unprojected realisation interpolates every node.
    for (std::size_t i = 0; i < d.nodes.size(); ++i) {
        EXPECT_LE(std::abs(eval_discrete(desc, d.nodes[i]) - d.values[i]), 1e-9 * std::abs(d.values[i]));
    }
    const RealLoewnerPencil rp = to_real_pencil(p);
    const cdouble z = on_circle(0.77);
    EXPECT_LE(std::abs(eval_discrete(project(rp, 4), z) - eval_discrete(project(p, 4), z)), 1e-9);
}

TEST(Interpolant, RecoversRandomDiscreteModels) {
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::Index n = 2 + trial % 5;
        const DiscreteStateSpace g = testutil::random_minimal_discrete(n);
        const FrequencyDataSet d = discrete_data(g, 40);
        const LoewnerInterpolant li(d);
        EXPECT_EQ(li.rank().r, n);
        EXPECT_TRUE(li.rank().consistent());
        const DiscreteStateSpace gr = li.model(li.rank().r);
        double worst = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < d.nodes.size(); ++i) {
            worst = std::max(worst, std::abs(eval_discrete(gr, d.nodes[i]) - d.values[i]));
            scale = std::max(scale, std::abs(d.values[i]));
        }
        EXPECT_LT(worst / scale, 1e-6);
        // Realness: G(conj z) = conj G(z).
        const cdouble z = on_circle(testutil::uniform(0.1, 3.0));
        EXPECT_LE(std::abs(eval_discrete(gr, std::conj(z)) - std::conj(eval_discrete(gr, z))), 1e-12);
    }
}

TEST(Interpolant, ResonantPlantRank) {
    const LoewnerInterpolant li(build_dataset(example_resonant_plant(), 0.4, 50));
    EXPECT_EQ(li.size(), 100);
    EXPECT_GE(li.rank().r, 20);
    EXPECT_LE(li.rank().r, 40);
    EXPECT_TRUE(li.rank().consistent());
    EXPECT_THROW(li.model(0), InvalidArgument);
    EXPECT_THROW(li.model(101), InvalidArgument);
}

TEST(Interpolant, TighterToleranceRaisesRank) {
    const FrequencyDataSet d = build_dataset(example_resonant_plant(), 0.4, 50);
    const RankReport loose = numerical_rank(build_pencil(partition(d)), 1e-6);
    const RankReport tight = numerical_rank(build_pencil(partition(d)), 1e-12);
    EXPECT_LT(loose.r, tight.r);
}
