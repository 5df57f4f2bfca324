#include <gtest/gtest.h>

#include <random>

#include "persuade/hardness.hpp"
#include "persuade/solver_dp.hpp"

using namespace persuade;

namespace {

PartitionInput make(std::initializer_list<int> cs) {
    PartitionInput in;
    for (int c : cs) in.c.emplace_back(c);
    return in;
}

std::vector<Rational> over(std::initializer_list<int> nums, int den) {
    std::vector<Rational> out;
    for (int n : nums) out.emplace_back(n, den);
    return out;
}

PartitionInput from_bits(std::uint64_t bits, std::size_t n, int maxc) {
    // Deterministic sequence for sign enumeration tests.
    PartitionInput in;
    std::mt19937_64 rng(bits);
    std::uniform_int_distribution<int> C(1, maxc);
    for (std::size_t i = 0; i < n; ++i) in.c.emplace_back(C(rng));
    return in;
}

}  // namespace

TEST(Reduce, FigureThreeInstance) {
    const auto a = reduce_partition(make({1, 2, 3}));
    EXPECT_EQ(a.d, Rational(1, 16));
    EXPECT_EQ(a.T, Rational(7));
    EXPECT_EQ(a.K, 4);
    EXPECT_EQ(a.X, over({14, 41, 43, 82, 86, 165, 171}, 224));
    EXPECT_EQ(a.instance.utility.spikes().size(), 7u);
    EXPECT_TRUE(a.instance.prior.is_uniform());
}

TEST(Reduce, SmallInstances) {
    const auto a = reduce_partition(make({1}));
    EXPECT_EQ(a.d, Rational(1, 4));
    EXPECT_EQ(a.T, Rational(2));
    EXPECT_EQ(a.X, over({4, 11, 13}, 16));
    const auto b = reduce_partition(make({2}));
    EXPECT_EQ(b.T, Rational(3));
    EXPECT_EQ(b.X, (std::vector<Rational>{Rational(1, 4), Rational(3, 4) - Rational(1, 12), Rational(3, 4) + Rational(1, 12)}));
    EXPECT_THROW(reduce_partition(make({})), InvalidArgument);
    EXPECT_THROW(reduce_partition(make({1, 0})), InvalidArgument);
}

TEST(Reduce, StructuralInvariants) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto in = from_bits(seed, 1 + seed % 10, 20);
        const auto a = reduce_partition(in);
        const std::size_t n = in.c.size();
        ASSERT_EQ(a.X.size(), 2 * n + 1);
        EXPECT_EQ(a.X.front(), a.d);
        for (std::size_t i = 1; i < a.X.size(); ++i) EXPECT_LT(a.X[i - 1], a.X[i]);
        const Rational common = Rational(BigInt(1) << (n + 1)) * 2 * a.T;
        for (const auto& x : a.X) {
            EXPECT_GT(x, 0);
            EXPECT_LT(x, 1);
            EXPECT_EQ(boost::multiprecision::denominator(Rational(x * common)), 1);
        }
    }
}

TEST(Encode, FigureThreeCertificate) {
    const auto e = encode_solution(make({1, 2, 3}), {+1, +1, -1});
    EXPECT_EQ(e.cuts, over({28, 58, 106}, 224));
    EXPECT_EQ(e.last, 1);
    EXPECT_TRUE(e.certificate);
}

TEST(Encode, Examples) {
    const auto e = encode_solution(make({1, 1}), {+1, -1});
    EXPECT_EQ(e.last, 1);
    EXPECT_TRUE(e.certificate);
    const auto f = encode_solution(make({1, 2, 3}), {+1, +1, +1});
    EXPECT_EQ(f.last, Rational(1, 16) * (16 + Rational(6, 7)));
    EXPECT_FALSE(f.certificate);
    EXPECT_THROW(encode_solution(make({1, 2}), {+1}), InvalidArgument);
    EXPECT_THROW(encode_solution(make({1, 2}), {+1, 0}), InvalidArgument);
}

TEST(Verify, FigureThreePosteriors) {
    const auto a = reduce_partition(make({1, 2, 3}));
    const auto r = verify_certificate(a, over({28, 58, 106}, 224));
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.utility, 1);
    EXPECT_EQ(r.posteriors, over({14, 43, 82, 165}, 224));
    for (bool h : r.hits) EXPECT_TRUE(h);
}

TEST(Verify, MissesAndBadInputs) {
    const auto a = reduce_partition(make({1, 2, 3}));
    const auto r = verify_certificate(a, {Rational(1, 2)});
    EXPECT_FALSE(r.pass);
    EXPECT_EQ(r.utility, 0);
    EXPECT_EQ(r.posteriors, (std::vector<Rational>{Rational(1, 4), Rational(3, 4)}));
    EXPECT_FALSE(verify_certificate(a, over({1, 2, 3, 4}, 8)).pass);  // too many cuts
    EXPECT_FALSE(verify_certificate(a, over({3, 1}, 8)).pass);        // unsorted
}

TEST(Verify, NoCertificateForOddSum) {
    const auto a = reduce_partition(make({1, 2, 4}));
    EXPECT_FALSE(find_certificate(a));
    for (int mask = 0; mask < 8; ++mask) {
        std::vector<int> b{mask & 1 ? -1 : 1, mask & 2 ? -1 : 1, mask & 4 ? -1 : 1};
        EXPECT_FALSE(verify_certificate(a, encode_solution(a.input, b).cuts).pass);
    }
}

TEST(Decode, FigureThreeParity) {
    const auto a = reduce_partition(make({1, 2, 3}));
    const auto b = decode_policy(a, over({28, 58, 106}, 224));
    ASSERT_TRUE(b);
    EXPECT_EQ(*b, (std::vector<int>{+1, +1, -1}));
    EXPECT_FALSE(decode_policy(a, {Rational(1, 2)}));
    EXPECT_FALSE(decode_policy(a, encode_solution(a.input, {+1, -1, +1}).cuts));
    // The last cut is implicit: (+1,+1,+1) shares cuts with (+1,+1,-1).
    EXPECT_EQ(*decode_policy(a, encode_solution(a.input, {+1, +1, +1}).cuts), (std::vector<int>{+1, +1, -1}));
}

TEST(Reduction, SoundAtDeskScale) {
    // Certificate exists iff Partition is solvable; decode inverts encode.
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const std::size_t n = 1 + seed % 8;
        const auto in = from_bits(seed + 1000, n, 9);
        const auto a = reduce_partition(in);
        const auto b = find_certificate(a);
        EXPECT_EQ(b.has_value(), partition_solvable(in)) << "seed " << seed;
        if (b) {
            BigInt s = 0;
            for (std::size_t i = 0; i < n; ++i) s += (*b)[i] * in.c[i];
            EXPECT_EQ(s, 0);
            const auto cuts = encode_solution(in, *b).cuts;
            const auto back = decode_policy(a, cuts);
            ASSERT_TRUE(back);
            EXPECT_EQ(*back, *b);
        }
    }
}

TEST(Reduction, RoundTripOnEverySolvableSignVector) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto in = from_bits(seed + 77, 6, 6);
        const auto a = reduce_partition(in);
        for (int mask = 0; mask < 64; ++mask) {
            std::vector<int> b(6);
            BigInt s = 0;
            for (int i = 0; i < 6; ++i) {
                b[i] = (mask >> i) & 1 ? -1 : 1;
                s += b[i] * in.c[i];
            }
            const auto e = encode_solution(in, b);
            EXPECT_EQ(e.certificate, s == 0);
            const auto v = verify_certificate(a, e.cuts);
            // Flipping the last sign leaves the cuts unchanged.
            EXPECT_EQ(v.pass, s == 0 || s - 2 * b[5] * in.c[5] == 0);
            if (s == 0) EXPECT_EQ(*decode_policy(a, e.cuts), b);
        }
    }
}

TEST(Reduction, FloatInstanceFeedsTheGridSolver) {
    const auto a = reduce_partition(make({1, 2, 3}));
    std::vector<double> cuts;
    for (const auto& c : encode_solution(a.input, {+1, +1, -1}).cuts) cuts.push_back(static_cast<double>(c));
    const auto sol = solve_partitional_dp(a.instance, a.K, DpGrid::from_points(cuts));
    EXPECT_NEAR(sol.value, 1.0, 1e-12);
}

TEST(Reduction, LipschitzVariant) {
    const auto a = reduce_partition(make({1, 2, 3}));
    const Instance inst = reduction_lipschitz_instance(a, 50.0);
    EXPECT_EQ(inst.utility.lipschitz(), 50.0);
    for (const auto& x : a.X) EXPECT_NEAR(inst.utility(static_cast<double>(x)), 1.0, 1e-12);
    EXPECT_NEAR(inst.utility(0.99), 0.0, 1e-12);
    const double x0 = static_cast<double>(a.X[0]);
    EXPECT_NEAR(inst.utility(x0 + 0.01), 0.5, 1e-12);
}

TEST(Partition, SolvableOracle) {
    EXPECT_TRUE(partition_solvable(make({1, 2, 3})));
    EXPECT_FALSE(partition_solvable(make({1, 2, 4})));
    EXPECT_FALSE(partition_solvable(make({2, 4, 8})));
    EXPECT_TRUE(partition_solvable(make({3, 1, 1, 2, 2, 1})));
}

TEST(Rationals, ParseAndPrint) {
    EXPECT_EQ(parse_rational("28/224"), Rational(1, 8));
    EXPECT_EQ(parse_rational("-3"), Rational(-3));
    EXPECT_EQ(to_string(Rational(43, 224)), "43/224");
    EXPECT_THROW(parse_rational("1/0"), InvalidArgument);
    EXPECT_THROW(parse_rational("abc"), InvalidArgument);
}
