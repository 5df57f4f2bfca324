#pragma once

// Grid dynamic program for near-optimal K-partitional policies, and an
// exhaustive oracle over the same grid.

#include <cstdint>
#include <vector>

#include "persuade/model.hpp"
#include "persuade/policy.hpp"

namespace persuade {

/// Provenance bits for grid points.
enum GridSource : std::uint32_t {
    kFromUniform = 1u << 0,
    kFromUtilityBreakpoint = 1u << 1,
    kFromSpike = 1u << 2,
    kFromMeanMatch = 1u << 3,
    kFromUser = 1u << 4,
};

struct GridPoint {
    double x = 0.0;
    std::uint32_t sources = 0;
};

/// Sorted, deduplicated candidate cut locations; always contains 0 and 1.
class DpGrid {
public:
    DpGrid() = default;
    DpGrid(std::vector<GridPoint> points, double resolution);

    /// {0, 1/n, ..., 1} with n = ceil(1/eps).
    static DpGrid uniform(double eps);
    static DpGrid from_points(const std::vector<double>& xs, std::uint32_t source = kFromUser);

    DpGrid with(const std::vector<double>& xs, std::uint32_t source) const;

    std::size_t size() const { return points_.size(); }
    double operator[](std::size_t i) const { return points_[i].x; }
    const std::vector<GridPoint>& points() const { return points_; }
    std::vector<double> xs() const;
    std::vector<double> xs_with(std::uint32_t source) const;
    double resolution() const { return resolution_; }

private:
    std::vector<GridPoint> points_;
    double resolution_ = 1.0;
};

/// Uniform eps-grid plus utility breakpoints, spike locations, and the
/// states c with E[theta | [0, c)] or E[theta | [c, 1]] equal to a spike location.
DpGrid default_grid(const Instance& instance, double eps);

struct SolveOptions {
    int threads = 1;
};

/// Value F([x_i, x_j)) * u(mean) of every grid interval, i < j.
class SegmentValueTable {
public:
    SegmentValueTable(const Instance& instance, const DpGrid& grid, int threads = 1);

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }

private:
    std::size_t n_ = 0;
    std::vector<double> values_;
};

struct PartitionalSolution {
    PartitionalPolicy policy;
    double value = 0.0;
};

/// Best policy with at most K-1 cuts on grid points. Throws InvalidArgument
/// for K < 1.
PartitionalSolution solve_partitional_dp(const Instance& instance, int K, const DpGrid& grid,
                                         const SolveOptions& options = {});
PartitionalSolution solve_partitional_dp(const SegmentValueTable& table, int K, const DpGrid& grid,
                                         const SolveOptions& options = {});

inline constexpr double kBruteForceBudget = 1e7;

/// Exhaustive maximum over every set of at most K-1 interior grid cuts.
/// Throws InvalidArgument when the number of subsets exceeds the budget.
double brute_force_partitional(const Instance& instance, int K, const DpGrid& grid);

}  // namespace persuade
