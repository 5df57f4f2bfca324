// Acceptance gate: one PASS/FAIL line per criterion; exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "persuade/analysis.hpp"
#include "persuade/conversion.hpp"
#include "persuade/hardness.hpp"
#include "persuade/solver_dp.hpp"
#include "persuade/solver_unrestricted.hpp"

using namespace persuade;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int threads() {
    if (const char* env = std::getenv("PERSUADE_THREADS")) return std::max(1, std::atoi(env));
    return 1;
}

// Criterion 10 collects every solver-produced policy checked along the way.
struct MpcLedger {
    long checked = 0;
    long failed = 0;
    std::string first_failure;

    void check(const Instance& inst, const MeanDistribution& g, const std::string& what) {
        ++checked;
        const auto rep = check_mpc(inst.prior, g, 1e-9);
        if (!rep.ok) {
            if (failed++ == 0) first_failure = what + ": " + rep.message;
        }
    }
    void check(const Instance& inst, const PartitionalPolicy& p, const std::string& what) {
        check(inst, induced_mean_distribution(inst, p), what);
    }
    void check(const Instance& inst, const BiPoolingPolicy& p, const std::string& what) {
        check(inst, induced_mean_distribution(inst, p), what);
    }
};

MpcLedger mpc;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& why) {
        if (!ok && pass) {
            pass = false;
            detail << "[" << why << "] ";
        }
    }
};

int failures = 0;

void report(int id, const char* title, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail << "exception: " << e.what();
    }
    if (!o.pass) ++failures;
    std::printf("criterion %2d: %s  %s (%.2fs) %s\n", id, o.pass ? "PASS" : "FAIL", title, seconds_since(t0),
                o.detail.str().c_str());
    std::fflush(stdout);
}

void criterion1(Outcome& o) {
    const auto t0 = Clock::now();
    const Instance ex = example_2_1();
    const DpGrid grid = default_grid(ex, 0.05);
    const auto unres = solve_bipooling_dp(ex, 2, grid);
    mpc.check(ex, unres.policy, "example 2.1 bi-pooling");
    o.require(std::abs(unres.value - 1.0) <= 1e-9, "unrestricted value != 1");
    for (int K : {2, 3, 4}) {
        const auto part = solve_partitional_dp(ex, K, grid);
        mpc.check(ex, part.policy, "example 2.1 partitional");
        o.require(std::abs(part.value - 2.0 / 3) <= 1e-9, "partitional value != 2/3 at K=" + std::to_string(K));
    }
    const double t = seconds_since(t0);
    o.require(t < 1.0, "runtime >= 1 s");
    o.detail << "unrestricted=" << unres.value << " partitional=2/3 for K=2..4";
}

void criterion2(Outcome& o) {
    const Instance ex = example_1_1();
    const auto pi = make_bipooling(ex.prior, {{0.0, 1.0, TwoSignal{0.4, 0.8, 0.75}}});
    const double disconnected = evaluate_bipooling(ex, pi);
    const double none = evaluate_partitional(ex, PartitionalPolicy{});
    const DpGrid grid = DpGrid::uniform(0.005);
    const double brute = brute_force_partitional(ex, 2, grid);
    const auto dp = solve_partitional_dp(ex, 2, grid);
    mpc.check(ex, dp.policy, "example 1.1 partitional");
    mpc.check(ex, pi, "example 1.1 disconnected");
    o.require(std::abs(disconnected - 0.925) <= 1e-9, "two-signal value != 0.925");
    o.require(std::abs(none - 0.9) <= 1e-9, "no-information value != 0.9");
    o.require(std::abs(brute - 0.92) <= 1e-9, "brute-force single cut != 0.92");
    o.require(dp.policy.cuts.size() == 1 && std::abs(dp.policy.cuts[0] - 0.8) <= 1e-9, "best cut not at 0.8");
    o.require(std::abs(dp.value - 0.92) <= 1e-9, "dp single cut != 0.92");
    o.detail << "0.925 / 0.9 / 0.92 at cut " << (dp.policy.cuts.empty() ? -1.0 : dp.policy.cuts[0]);
}

void criterion3(Outcome& o) {
    const int q = 200;
    const double res = 1.0 / q;
    double prev = 2.0;
    for (double p : {0.30, 0.40, 0.45, 0.49}) {
        const Instance t = tight_instance(p);
        const double opt = brute_force_unrestricted(t.prior, t.utility, 2, q);
        const double part = brute_force_unrestricted(t.prior, t.utility, 2, q, true);
        const double ratio = part / opt;
        o.require(std::abs(opt - 1.0) <= res, "OPT != 1 at p=" + std::to_string(p));
        o.require(std::abs(part - (1.0 - p)) <= res, "OPT^Part != 1-p at p=" + std::to_string(p));
        o.require(ratio < prev, "ratios not decreasing");
        prev = ratio;
        o.detail << "p=" << p << ":" << ratio << " ";
    }
}

void criterion4(Outcome& o) {
    const auto t0 = Clock::now();
    Rng rng(kDefaultSeed + 4);
    int two_signal = 0;
    double worst = 2.0;
    for (int t = 0; t < 1000; ++t) {
        const Instance inst = random_instance(rng);
        const auto pi = random_bipooling_policy(inst.prior, rng, 4);
        for (const auto& s : pi.segments) two_signal += s.two() != nullptr;
        const auto pa = convert_bipooling_to_partitional(inst, pi);
        mpc.check(inst, pa, "converted policy");
        const double up = evaluate_bipooling(inst, pi), ua = evaluate_partitional(inst, pa);
        o.require(ua >= 0.5 * up - 1e-9, "half guarantee violated at case " + std::to_string(t));
        if (up > 0.0) worst = std::min(worst, ua / up);
    }
    const double secs = seconds_since(t0);
    o.require(secs < 30.0, "runtime >= 30 s");
    o.detail << "1000 policies, " << two_signal << " two-signal segments, worst ratio " << worst;
}

void criterion5(Outcome& o) {
    Rng rng(kDefaultSeed + 5);
    double worst = 2.0;
    int defined = 0;
    for (int t = 0; t < 200; ++t) {
        const Instance inst = random_instance(rng);
        const DpGrid grid = default_grid(inst, 0.05);
        const SegmentValueTable part_table(inst, grid, threads());
        const BiPoolingTable bi_table(inst, grid, threads());
        for (int K : {2, 3, 4}) {
            const auto part = solve_partitional_dp(part_table, K, grid);
            const auto bi = solve_bipooling_dp(inst, bi_table, K);
            mpc.check(inst, part.policy, "corpus partitional");
            mpc.check(inst, bi.policy, "corpus bi-pooling");
            if (bi.value <= 0.0) continue;
            ++defined;
            const double r = part.value / bi.value;
            worst = std::min(worst, r);
            o.require(r >= 0.5 - 1e-6, "ratio below 1/2 at instance " + std::to_string(t));
            o.require(r <= 1.0 + 1e-9, "ratio above 1 at instance " + std::to_string(t));
        }
    }
    o.detail << defined << " ratios, worst " << worst;
}

void criterion6(Outcome& o) {
    Rng rng(kDefaultSeed + 6);
    int compared = 0;
    for (int t = 0; t < 50; ++t) {
        const Instance inst = random_instance(rng);
        DpGrid grid = default_grid(inst, 0.125);
        if (grid.size() > 18) grid = default_grid(inst, 0.25);
        o.require(grid.size() <= 18, "grid larger than 18 points");
        for (int K = 1; K <= 4; ++K) {
            const auto dp = solve_partitional_dp(inst, K, grid);
            mpc.check(inst, dp.policy, "dp vs oracle");
            const double brute = brute_force_partitional(inst, K, grid);
            o.require(dp.value == brute, "dp != brute force at instance " + std::to_string(t));
            ++compared;
        }
    }
    o.detail << compared << " exact comparisons";
}

void criterion7(Outcome& o) {
    Rng rng(kDefaultSeed + 7);
    const int K = 3;
    const double eps = 0.05;
    double tightest = 1e300;
    for (int t = 0; t < 20; ++t) {
        const Instance inst = random_lipschitz_instance(rng, 5.0);
        const double L = *inst.utility.lipschitz();
        const double fbar = inst.prior.density_bound();
        o.require(L <= 5.0 && fbar <= 2.0 && inst.utility.upper_bound() <= 1.0, "instance outside L<=5, f<=2, U<=1");
        const auto coarse = solve_partitional_dp(inst, K, DpGrid::uniform(eps));
        const auto fine = solve_partitional_dp(inst, K, DpGrid::uniform(eps / 8));
        mpc.check(inst, coarse.policy, "lipschitz coarse");
        mpc.check(inst, fine.policy, "lipschitz fine");
        const double bound = 2.0 * fbar * (inst.utility.upper_bound() + L) * K * eps;
        o.require(coarse.value >= fine.value - bound, "error bound violated at instance " + std::to_string(t));
        tightest = std::min(tightest, coarse.value - (fine.value - bound));
    }

    // Scaling sanity: time grows at most about quadratically in 1/eps.
    const Instance inst = random_lipschitz_instance(rng, 5.0);
    std::vector<double> times;
    for (double e : {0.04, 0.02, 0.01}) {
        const DpGrid g = DpGrid::uniform(e);
        int reps = 0;
        const auto t0 = Clock::now();
        do {
            (void)solve_partitional_dp(inst, 4, g);
            ++reps;
        } while (seconds_since(t0) < 0.3);
        times.push_back(seconds_since(t0) / reps);
    }
    const double exponent = std::log(times[2] / times[0]) / std::log(4.0);
    o.require(exponent <= 2.5, "runtime grows faster than quadratically");
    o.detail << "min slack " << tightest << ", empirical exponent " << exponent;
}

std::vector<Rational> over(std::initializer_list<int> nums, int den) {
    std::vector<Rational> out;
    for (int n : nums) out.emplace_back(n, den);
    return out;
}

void criterion8(Outcome& o) {
    PartitionInput c{{1, 2, 3}};
    const auto a = reduce_partition(c);
    const auto e = encode_solution(c, {+1, +1, -1});
    o.require(e.cuts == over({28, 58, 106}, 224), "cuts != {28,58,106}/224");
    o.require(e.certificate, "encoding not flagged as certificate");
    const auto v = verify_certificate(a, e.cuts);
    o.require(v.utility == 1 && v.pass, "utility != 1");
    o.require(v.posteriors == over({14, 43, 82, 165}, 224), "posteriors != {14,43,82,165}/224");
    o.detail << "utility " << to_string(v.utility) << ", posteriors";
    for (const auto& p : v.posteriors) o.detail << " " << to_string(p);
}

void criterion9(Outcome& o) {
    const auto t0 = Clock::now();
    Rng rng(kDefaultSeed + 9);
    std::uniform_int_distribution<int> C(1, 30);
    int odd_checked = 0;
    for (std::size_t n = 1; n <= 10; ++n) {
        for (int rep = 0; rep < 10; ++rep) {
            PartitionInput in;
            BigInt sum = 0;
            for (std::size_t i = 0; i < n; ++i) {
                in.c.emplace_back(C(rng));
                sum += in.c.back();
            }
            if (sum % 2 == 0) in.c.back() += 1;
            const auto a = reduce_partition(in);
            o.require(!find_certificate(a, threads()), "certificate found for an odd-sum instance");
            ++odd_checked;
        }
    }
    int solvable = 0;
    std::uniform_int_distribution<int> N(2, 10), S(0, 1);
    while (solvable < 20) {
        const int n = N(rng);
        std::vector<int> b(n);
        PartitionInput in;
        BigInt s = 0;
        for (int i = 0; i + 1 < n; ++i) {
            b[i] = S(rng) ? 1 : -1;
            in.c.emplace_back(C(rng));
            s += b[i] * in.c.back();
        }
        if (s == 0) continue;
        b[n - 1] = s > 0 ? -1 : 1;
        in.c.emplace_back(s > 0 ? s : BigInt(-s));
        const auto a = reduce_partition(in);
        const auto found = find_certificate(a, threads());
        o.require(found.has_value(), "no certificate for a solvable instance");
        const auto planted = decode_policy(a, encode_solution(in, b).cuts);
        o.require(planted && *planted == b, "decode(encode(b)) != b");
        if (found) {
            const auto back = decode_policy(a, encode_solution(in, *found).cuts);
            o.require(back && *back == *found, "decode(encode(found)) != found");
        }
        ++solvable;
    }
    const double secs = seconds_since(t0);
    o.require(secs < 60.0, "runtime >= 60 s");
    o.detail << odd_checked << " odd-sum instances refuted, " << solvable << " solvable round trips";
}

void criterion10(Outcome& o) {
    o.require(mpc.checked > 0, "no policies were checked");
    o.require(mpc.failed == 0, mpc.first_failure);
    o.detail << mpc.checked << " policies checked, " << mpc.failed << " violations";
}

}  // namespace

int main() {
    report(1, "Example 2.1 values", criterion1);
    report(2, "Example 1.1 values", criterion2);
    report(3, "tight-family price of explainability", criterion3);
    report(4, "conversion half-guarantee fuzz", criterion4);
    report(5, "price of explainability >= 1/2 corpus", criterion5);
    report(6, "DP equals exhaustive oracle", criterion6);
    report(7, "Lipschitz grid error bound", criterion7);
    report(8, "reduction YES certificate", criterion8);
    report(9, "reduction NO side and round trips", criterion9);
    report(10, "mean-preservation of every solver policy", criterion10);
    if (failures)
        std::printf("FAIL: %d of 10 criteria failed\n", failures);
    else
        std::printf("PASS: all 10 criteria passed\n");
    return failures ? 1 : 0;
}
