#pragma once

// Price of explainability, built-in instance families, utility
// discretization, and seeded random corpora for experiments.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>

#include "persuade/model.hpp"
#include "persuade/policy.hpp"
#include "persuade/solver_dp.hpp"

namespace persuade {

struct PoeOptions {
    int threads = 1;
    int q = 200;  // resolution of the atomic-prior oracles
};

struct PoeResult {
    double opt_part = 0.0;
    double opt = 0.0;
    std::optional<double> ratio;  // empty when opt == 0
};

/// OPT^Part(K) / OPT(K). Density priors use the two grid DPs on `grid`;
/// purely atomic priors use the exhaustive oracles at resolution q.
PoeResult poe(const Instance& instance, int K, const DpGrid& grid, const PoeOptions& options = {});

/// Atoms {0: p, 1/2: 1-2p, 1: p}; value-1 spikes at (1-2p)/(2(1-p)) and 1/(2(1-p)).
Instance tight_instance(double p);

/// Example 1.1 on [0,1]: uniform prior, u = 0 below 0.4, 0.9 on [0.4, 0.8), 1 above.
Instance example_1_1();
/// Example 2.1: uniform prior, value-1 spikes at 1/3 and 2/3.
Instance example_2_1();

/// "example_1_1", "example_2_1", "tight(p)", "reduction(c1,c2,...)".
/// Throws InvalidArgument for unknown names.
Instance builtin_instance(const std::string& name);

/// Piecewise-constant approximation: each sloped piece is cut into equal
/// subintervals of width <= eps / L, valued at their midpoints. Spikes are kept.
Utility discretize_utility(const Utility& u, double eps);

/// Linear interpolant of f on `pieces` equal subintervals; records the
/// largest slope as the Lipschitz constant.
Utility interpolate_utility(const std::function<double(double)>& f, int pieces);

// Seeded generators. Every call draws from the caller's engine, so a fixed
// seed reproduces the corpus.
using Rng = std::mt19937_64;
inline constexpr std::uint64_t kDefaultSeed = 20240611;

/// Uniform, or a single affine density with peak at most 2.
Prior random_prior(Rng& rng);
/// At most `max_pieces` constant pieces in [0,1] plus up to `max_spikes` spikes.
Utility random_step_utility(Rng& rng, int max_pieces = 6, int max_spikes = 2);
Instance random_instance(Rng& rng);
/// Continuous piecewise-linear utility in [0,1] with slopes bounded by L.
Instance random_lipschitz_instance(Rng& rng, double max_lipschitz = 5.0);
/// A valid bi-pooling policy on the instance's prior with at most
/// `max_segments` segments; two-signal segments pick random inducible pairs.
BiPoolingPolicy random_bipooling_policy(const Prior& prior, Rng& rng, int max_segments = 4);

}  // namespace persuade
