#pragma once

// Near-optimal unrestricted K-signal schemes, searched within the bi-pooling
// class: each grid interval carries one signal or two posterior means.

#include <optional>
#include <span>
#include <vector>

#include "persuade/model.hpp"
#include "persuade/policy.hpp"
#include "persuade/solver_dp.hpp"

namespace persuade {

struct SegmentChoice {
    double left = 0.0;
    double right = 1.0;
    std::variant<OneSignal, TwoSignal> mode;
    double value = 0.0;  // segment mass times conditional expected utility
};

/// Best inducible pair mu1 < m < mu2 drawn from `candidates` (m is the
/// interval mean). With `refine`, each candidate is also paired with the
/// feasibility boundary of its partner. Returns nullopt unless the best pair
/// strictly beats sending one signal.
std::optional<SegmentChoice> best_two_signal(const Instance& instance, double left, double right,
                                             std::span<const double> candidates, bool refine = false);

/// Feasibility boundaries for a segment with mean m: the largest mu2 in
/// (m, right] paired with mu1, and the smallest mu1 in [left, m) paired
/// with mu2. Feasibility is monotone, so every partner short of the
/// boundary also works.
std::optional<double> widest_mu2(const Prior& prior, double left, double right, double m, double mu1);
std::optional<double> widest_mu1(const Prior& prior, double left, double right, double m, double mu2);

/// Spike locations, base breakpoints, and grid points flagged as user input.
std::vector<double> two_signal_candidates(const Instance& instance, const DpGrid& grid);

/// Per-interval one- and two-signal values on a grid; reusable across K.
class BiPoolingTable {
public:
    BiPoolingTable(const Instance& instance, const DpGrid& grid, int threads = 1);

    std::size_t size() const { return n_; }
    double one(std::size_t i, std::size_t j) const { return one_[i * n_ + j]; }
    const std::optional<SegmentChoice>& two(std::size_t i, std::size_t j) const { return two_[i * n_ + j]; }
    const DpGrid& grid() const { return grid_; }

private:
    DpGrid grid_;
    std::size_t n_ = 0;
    std::vector<double> one_;
    std::vector<std::optional<SegmentChoice>> two_;
};

struct BiPoolingSolution {
    BiPoolingPolicy policy;
    double value = 0.0;
};

BiPoolingSolution solve_bipooling_dp(const Instance& instance, int K, const DpGrid& grid,
                                     const SolveOptions& options = {});
BiPoolingSolution solve_bipooling_dp(const Instance& instance, const BiPoolingTable& table, int K);

inline constexpr double kAtomicOracleBudget = 1e8;

/// Exhaustive search for small purely atomic priors:
/// every allocation of atom mass to signals on a 1/q grid. With `monotone`,
/// only partitional allocations are enumerated (signals take consecutive
/// stretches of the ordered atom mass, splitting at most at shared atoms).
///
/// A posterior within 1/q of a spike earns the spike value, since exact
/// spike hits generally need allocation fractions off the 1/q grid.
double brute_force_unrestricted(const Prior& prior, const Utility& utility, int K, int q,
                                bool monotone = false);

}  // namespace persuade
