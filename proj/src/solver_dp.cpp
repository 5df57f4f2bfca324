#include "persuade/solver_dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "parallel.hpp"

namespace persuade {

namespace {

constexpr double kGridMergeTol = 1e-12;

// Exact-valued sources win over uniform grid points when two coincide.
int source_rank(std::uint32_t s) {
    if (s & (kFromMeanMatch | kFromSpike | kFromUser)) return 2;
    if (s & kFromUtilityBreakpoint) return 1;
    return 0;
}

}  // namespace

DpGrid::DpGrid(std::vector<GridPoint> points, double resolution) : resolution_(resolution) {
    if (!(resolution > 0.0)) throw InvalidArgument("grid: resolution must be positive");
    for (auto& p : points) {
        if (!(p.x >= -kGridMergeTol && p.x <= 1.0 + kGridMergeTol))
            throw InvalidArgument("grid: point outside [0,1]");
        p.x = std::clamp(p.x, 0.0, 1.0);
    }
    points.push_back({0.0, kFromUniform});
    points.push_back({1.0, kFromUniform});
    std::sort(points.begin(), points.end(), [](const GridPoint& a, const GridPoint& b) { return a.x < b.x; });
    for (const auto& p : points) {
        if (!points_.empty() && p.x - points_.back().x <= kGridMergeTol) {
            auto& q = points_.back();
            if (q.x != 0.0 && q.x != 1.0 && p.x != 0.0 && p.x != 1.0 && source_rank(p.sources) > source_rank(q.sources))
                q.x = p.x;
            if (p.x == 1.0) q.x = 1.0;
            q.sources |= p.sources;
        } else {
            points_.push_back(p);
        }
    }
}

DpGrid DpGrid::uniform(double eps) {
    if (!(eps > 0.0 && eps <= 1.0)) throw InvalidArgument("grid: need 0 < epsilon <= 1");
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(1.0 / eps - 1e-9)));
    std::vector<GridPoint> pts;
    pts.reserve(n + 1);
    for (std::size_t j = 0; j <= n; ++j)
        pts.push_back({static_cast<double>(j) / static_cast<double>(n), kFromUniform});
    return DpGrid(std::move(pts), 1.0 / static_cast<double>(n));
}

DpGrid DpGrid::from_points(const std::vector<double>& xs, std::uint32_t source) {
    std::vector<GridPoint> pts;
    for (double x : xs) pts.push_back({x, source});
    DpGrid g(std::move(pts), 1.0);
    double gap = 0.0;
    for (std::size_t i = 1; i < g.size(); ++i) gap = std::max(gap, g[i] - g[i - 1]);
    g.resolution_ = gap > 0.0 ? gap : 1.0;
    return g;
}

DpGrid DpGrid::with(const std::vector<double>& xs, std::uint32_t source) const {
    std::vector<GridPoint> pts = points_;
    for (double x : xs) pts.push_back({x, source});
    return DpGrid(std::move(pts), resolution_);
}

std::vector<double> DpGrid::xs() const {
    std::vector<double> out;
    out.reserve(points_.size());
    for (const auto& p : points_) out.push_back(p.x);
    return out;
}

std::vector<double> DpGrid::xs_with(std::uint32_t source) const {
    std::vector<double> out;
    for (const auto& p : points_)
        if (p.sources & source) out.push_back(p.x);
    return out;
}

DpGrid default_grid(const Instance& instance, double eps) {
    DpGrid grid = DpGrid::uniform(eps);
    grid = grid.with(instance.utility.breakpoints(), kFromUtilityBreakpoint);
    std::vector<double> spikes, matched;
    for (const auto& s : instance.utility.spikes()) {
        spikes.push_back(s.location);
        // Cells [0, c) and [c, 1] whose mean sits on the spike.
        if (s.location > 0.0) {
            try {
                matched.push_back(solve_right_endpoint(instance.prior, 0.0, s.location));
            } catch (const InfeasibleTarget&) {
            }
        }
        if (s.location < 1.0) {
            try {
                matched.push_back(solve_left_endpoint(instance.prior, 1.0, s.location));
            } catch (const InfeasibleTarget&) {
            }
        }
    }
    return grid.with(spikes, kFromSpike).with(matched, kFromMeanMatch);
}

SegmentValueTable::SegmentValueTable(const Instance& instance, const DpGrid& grid, int threads)
    : n_(grid.size()), values_(n_ * n_, 0.0) {
    detail::parallel_for(0, n_, threads, [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n_; ++j) {
            const double mass = segment_mass(instance.prior, grid[i], grid[j]);
            if (mass > 0.0)
                values_[i * n_ + j] = mass * instance.utility(segment_mean(instance.prior, grid[i], grid[j]));
        }
    });
}

PartitionalSolution solve_partitional_dp(const Instance& instance, int K, const DpGrid& grid,
                                         const SolveOptions& options) {
    if (K < 1) throw InvalidArgument("solve_partitional_dp: signal budget K must be at least 1");
    const SegmentValueTable table(instance, grid, options.threads);
    return solve_partitional_dp(table, K, grid, options);
}

PartitionalSolution solve_partitional_dp(const SegmentValueTable& table, int K, const DpGrid& grid,
                                         const SolveOptions& options) {
    if (K < 1) throw InvalidArgument("solve_partitional_dp: signal budget K must be at least 1");
    const std::size_t n = grid.size();
    const auto rows = static_cast<std::size_t>(K);
    // best[k-1][j]: best value on [0, x_j) using at most k intervals.
    // from[k-1][j]: -1 when inherited from k-1 intervals, else the last cut index.
    std::vector<std::vector<double>> best(rows, std::vector<double>(n, 0.0));
    std::vector<std::vector<long>> from(rows, std::vector<long>(n, 0));
    for (std::size_t j = 1; j < n; ++j) best[0][j] = table(0, j);

    for (std::size_t k = 1; k < rows; ++k) {
        const auto& prev = best[k - 1];
        auto& cur = best[k];
        auto& arg = from[k];
        detail::parallel_for(1, n, options.threads, [&](std::size_t j) {
            double v = prev[j];
            long choice = -1;
            for (std::size_t jp = 0; jp < j; ++jp) {
                const double cand = prev[jp] + table(jp, j);
                if (cand > v) {
                    v = cand;
                    choice = static_cast<long>(jp);
                }
            }
            cur[j] = v;
            arg[j] = choice;
        });
    }

    PartitionalSolution out;
    out.value = best[rows - 1][n - 1];
    std::size_t k = rows - 1, j = n - 1;
    while (j > 0) {
        if (k == 0) break;
        const long choice = from[k][j];
        if (choice < 0) {
            --k;
            continue;
        }
        j = static_cast<std::size_t>(choice);
        if (j > 0) out.policy.cuts.push_back(grid[j]);
        --k;
    }
    std::reverse(out.policy.cuts.begin(), out.policy.cuts.end());
    return out;
}

double brute_force_partitional(const Instance& instance, int K, const DpGrid& grid) {
    if (K < 1) throw InvalidArgument("brute_force_partitional: signal budget K must be at least 1");
    const std::size_t n = grid.size();
    const std::size_t interior = n >= 2 ? n - 2 : 0;
    const std::size_t max_cuts = std::min<std::size_t>(static_cast<std::size_t>(K - 1), interior);
    double subsets = 0.0, term = 1.0;
    for (std::size_t s = 0; s <= max_cuts; ++s) {
        subsets += term;
        term = term * static_cast<double>(interior - s) / static_cast<double>(s + 1);
    }
    if (subsets > kBruteForceBudget) {
        std::ostringstream os;
        os << "brute_force_partitional: " << subsets << " cut subsets exceed the budget of " << kBruteForceBudget;
        throw InvalidArgument(os.str());
    }

    const SegmentValueTable table(instance, grid);
    double best = -std::numeric_limits<double>::infinity();
    // Depth-first over increasing cut indices; the running sum accumulates
    // interval values left to right.
    auto recurse = [&](auto&& self, std::size_t last, double acc, std::size_t cuts_left) -> void {
        best = std::max(best, acc + table(last, n - 1));
        if (cuts_left == 0) return;
        for (std::size_t c = last + 1; c + 1 < n; ++c) self(self, c, acc + table(last, c), cuts_left - 1);
    };
    // The first interval starts at index 0 with nothing accumulated.
    best = std::max(best, table(0, n - 1));
    if (max_cuts > 0)
        for (std::size_t c = 1; c + 1 < n; ++c) recurse(recurse, c, table(0, c), max_cuts - 1);
    return best;
}

}  // namespace persuade
