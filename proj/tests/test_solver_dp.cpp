#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "persuade/analysis.hpp"
#include "persuade/solver_dp.hpp"

using namespace persuade;

namespace {

DpGrid sixths() { return DpGrid::from_points({1.0 / 6, 1.0 / 3, 0.5, 2.0 / 3, 5.0 / 6}); }

}  // namespace

TEST(DpGrid, UniformAndDefault) {
    EXPECT_EQ(DpGrid::uniform(0.25).xs(), (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}));
    EXPECT_EQ(DpGrid::uniform(1.0).xs(), (std::vector<double>{0.0, 1.0}));
    EXPECT_EQ(DpGrid::uniform(0.1).size(), 11u);
    EXPECT_THROW(DpGrid::uniform(0.0), InvalidArgument);
    EXPECT_THROW(DpGrid::uniform(1.5), InvalidArgument);

    const Instance flat{Prior::uniform(), Utility::constant(0.3), "flat"};
    EXPECT_EQ(default_grid(flat, 0.25).xs(), (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}));

    const DpGrid g = default_grid(example_2_1(), 0.25);
    const auto xs = g.xs();
    for (double want : {0.0, 0.25, 1.0 / 3, 0.5, 2.0 / 3, 0.75, 1.0})
        EXPECT_TRUE(std::any_of(xs.begin(), xs.end(), [&](double x) { return std::abs(x - want) < 1e-15; })) << want;
    // [0, 2/3) has mean 1/3 and [1/3, 1] has mean 2/3: the matches land on the spikes.
    EXPECT_EQ(g.size(), 7u);
    const auto spikes = g.xs_with(kFromSpike), matched = g.xs_with(kFromMeanMatch);
    EXPECT_EQ(spikes.size(), 2u);
    ASSERT_EQ(matched.size(), 2u);
    EXPECT_NEAR(matched[0], 1.0 / 3, 1e-15);
    EXPECT_NEAR(matched[1], 2.0 / 3, 1e-15);
}

TEST(DpGrid, SortsAndDeduplicates) {
    const DpGrid g = DpGrid::from_points({0.7, 0.2, 0.2 + 1e-14, 0.7});
    EXPECT_EQ(g.size(), 4u);
    for (std::size_t i = 1; i < g.size(); ++i) EXPECT_LT(g[i - 1], g[i]);
    EXPECT_THROW(DpGrid::from_points({1.5}), InvalidArgument);
}

TEST(SolvePartitional, Examples) {
    const Instance ex21 = example_2_1();
    const auto s = solve_partitional_dp(ex21, 2, default_grid(ex21, 0.05));
    EXPECT_NEAR(s.value, 2.0 / 3, 1e-12);
    EXPECT_NEAR(evaluate_partitional(ex21, s.policy), s.value, 1e-12);

    // On a grid containing 2/3 but not 1/3, the only optimal cut is 2/3.
    const auto s2 = solve_partitional_dp(ex21, 2, DpGrid::from_points({0.25, 2.0 / 3}));
    EXPECT_NEAR(s2.value, 2.0 / 3, 1e-12);
    ASSERT_EQ(s2.policy.cuts.size(), 1u);
    EXPECT_NEAR(s2.policy.cuts[0], 2.0 / 3, 1e-15);

    const Instance lin{Prior::uniform(), Utility::identity(), "linear"};
    for (int K = 1; K <= 4; ++K) EXPECT_NEAR(solve_partitional_dp(lin, K, DpGrid::uniform(0.1)).value, 0.5, 1e-12);

    const Instance ex11 = example_1_1();
    const auto s3 = solve_partitional_dp(ex11, 2, DpGrid::uniform(0.01));
    EXPECT_NEAR(s3.value, 0.92, 1e-12);
    ASSERT_EQ(s3.policy.cuts.size(), 1u);
    EXPECT_NEAR(s3.policy.cuts[0], 0.8, 1e-12);

    EXPECT_THROW(solve_partitional_dp(ex21, 0, DpGrid::uniform(0.1)), InvalidArgument);
}

TEST(SolvePartitional, ExampleOneOneSingleCutSweep) {
    // Oracle: sweep every single cut on a 0.005 lattice with the quadrature evaluator.
    const Instance ex11 = example_1_1();
    double best = 0.0, arg = 0.0;
    for (int i = 1; i < 200; ++i) {
        const double c = i / 200.0;
        const double v = oracle::partitional_value(ex11, {c});
        if (v > best + 1e-12) {
            best = v;
            arg = c;
        }
    }
    EXPECT_NEAR(best, 0.92, 1e-9);
    EXPECT_NEAR(arg, 0.8, 1e-12);
}

TEST(BruteForcePartitional, Examples) {
    const Instance ex21 = example_2_1();
    EXPECT_NEAR(brute_force_partitional(ex21, 2, sixths()), 2.0 / 3, 1e-12);
    EXPECT_NEAR(brute_force_partitional(ex21, 4, sixths()), 2.0 / 3, 1e-12);
    std::mt19937_64 rng(1);
    for (int t = 0; t < 10; ++t) {
        const Instance inst = random_instance(rng);
        EXPECT_DOUBLE_EQ(brute_force_partitional(inst, 1, DpGrid::uniform(0.1)), inst.utility(inst.prior.mean()));
    }
    EXPECT_THROW(brute_force_partitional(ex21, 8, DpGrid::uniform(0.001)), InvalidArgument);
}

TEST(SolvePartitional, EqualsBruteForceExactly) {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 60; ++t) {
        const Instance inst = random_instance(rng);
        const DpGrid grid = default_grid(inst, 0.1);
        for (int K = 1; K <= 4; ++K) {
            const auto s = solve_partitional_dp(inst, K, grid);
            EXPECT_EQ(s.value, brute_force_partitional(inst, K, grid)) << "t=" << t << " K=" << K;
            EXPECT_LE(s.policy.cuts.size(), static_cast<std::size_t>(K - 1));
            EXPECT_NEAR(evaluate_partitional(inst, s.policy), s.value, 1e-12);
        }
    }
}

TEST(SolvePartitional, MonotoneInKAndGrid) {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 30; ++t) {
        const Instance inst = random_instance(rng);
        const DpGrid coarse = default_grid(inst, 0.1);
        const DpGrid fine = coarse.with(DpGrid::uniform(0.025).xs(), kFromUniform);
        double prev = 0.0;
        for (int K = 1; K <= 5; ++K) {
            const double v = solve_partitional_dp(inst, K, coarse).value;
            EXPECT_GE(v, prev);
            EXPECT_GE(solve_partitional_dp(inst, K, fine).value, v);
            prev = v;
        }
    }
}

TEST(SolvePartitional, ParallelRunMatchesSerial) {
    std::mt19937_64 rng(29);
    for (int t = 0; t < 5; ++t) {
        const Instance inst = random_instance(rng);
        const DpGrid grid = default_grid(inst, 0.01);
        const auto a = solve_partitional_dp(inst, 4, grid, {1});
        const auto b = solve_partitional_dp(inst, 4, grid, {4});
        EXPECT_EQ(a.value, b.value);
        EXPECT_EQ(a.policy, b.policy);
    }
}

TEST(SolvePartitional, CutValueIsLipschitz) {
    // |V(A) - V(A')| <= 2 fbar (Ubar + L) sum |a_i - a_i'| for continuous utilities.
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        const Instance inst = random_lipschitz_instance(rng);
        const double bound = 2.0 * inst.prior.density_bound() * (inst.utility.upper_bound() + *inst.utility.lipschitz());
        for (int s = 0; s < 50; ++s) {
            std::vector<double> a{U(rng), U(rng), U(rng)}, b;
            std::sort(a.begin(), a.end());
            double dist = 0.0;
            for (double x : a) {
                const double y = std::clamp(x + 0.05 * (U(rng) - 0.5), 0.0, 1.0);
                b.push_back(y);
            }
            std::sort(b.begin(), b.end());
            for (std::size_t i = 0; i < a.size(); ++i) dist += std::abs(a[i] - b[i]);
            const double va = evaluate_partitional(inst, {a, {}}), vb = evaluate_partitional(inst, {b, {}});
            EXPECT_LE(std::abs(va - vb), bound * dist + 1e-12);
        }
    }
}

TEST(SolvePartitional, GridErrorBound) {
    std::mt19937_64 rng(37);
    for (int t = 0; t < 10; ++t) {
        const Instance inst = random_lipschitz_instance(rng);
        const double L = *inst.utility.lipschitz();
        const double fbar = inst.prior.density_bound();
        for (int K : {2, 3}) {
            const double eps = 0.05;
            const double coarse = solve_partitional_dp(inst, K, DpGrid::uniform(eps)).value;
            const double fine = solve_partitional_dp(inst, K, DpGrid::uniform(eps / 8)).value;
            EXPECT_GE(coarse, fine - 2.0 * fbar * (1.0 + L) * K * eps);
        }
    }
}
