#include "persuade/solver_unrestricted.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "parallel.hpp"

namespace persuade {

namespace {

constexpr double kStrictGain = 1e-12;
constexpr int kBoundaryIters = 64;

bool feasible_pair(const Prior& prior, double left, double right, double mu1, double mu2) {
    return two_point_feasible(prior, left, right, mu1, mu2).feasible;
}

}  // namespace

std::optional<double> widest_mu2(const Prior& prior, double left, double right, double m, double mu1) {
    if (feasible_pair(prior, left, right, mu1, right)) return right;
    double lo = m, hi = right;
    for (int it = 0; it < kBoundaryIters; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (feasible_pair(prior, left, right, mu1, mid))
            lo = mid;
        else
            hi = mid;
    }
    if (lo <= m) return std::nullopt;
    return lo;
}

std::optional<double> widest_mu1(const Prior& prior, double left, double right, double m, double mu2) {
    if (feasible_pair(prior, left, right, left, mu2)) return left;
    double lo = left, hi = m;
    for (int it = 0; it < kBoundaryIters; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (feasible_pair(prior, left, right, mid, mu2))
            hi = mid;
        else
            lo = mid;
    }
    if (hi >= m) return std::nullopt;
    return hi;
}

std::optional<SegmentChoice> best_two_signal(const Instance& instance, double left, double right,
                                             std::span<const double> candidates, bool refine) {
    const Prior& prior = instance.prior;
    const Utility& u = instance.utility;
    const double mass = segment_mass(prior, left, right);
    if (!(mass > 0.0)) return std::nullopt;
    const double m = segment_mean(prior, left, right);

    std::vector<double> lows, highs;
    for (double c : candidates) {
        if (c >= left && c < m) lows.push_back(c);
        if (c > m && c <= right) highs.push_back(c);
    }
    std::sort(lows.begin(), lows.end());
    lows.erase(std::unique(lows.begin(), lows.end()), lows.end());
    std::sort(highs.begin(), highs.end());
    highs.erase(std::unique(highs.begin(), highs.end()), highs.end());

    const double one = u(m);
    double best = one + kStrictGain;
    std::optional<TwoSignal> pick;
    auto consider = [&](double mu1, double mu2) {
        const double p1 = (mu2 - m) / (mu2 - mu1);
        if (!(p1 > 0.0 && p1 < 1.0)) return;
        const double v = p1 * u(mu1) + (1.0 - p1) * u(mu2);
        if (v > best) {
            best = v;
            pick = TwoSignal{mu1, mu2, p1};
        }
    };

    if (!refine) {
        for (double mu1 : lows)
            for (double mu2 : highs)
                if (feasible_pair(prior, left, right, mu1, mu2)) consider(mu1, mu2);
    } else {
        // Feasibility is monotone in the spread, so the widest partner of each
        // candidate both bounds the feasible pairs and is itself a candidate.
        for (double mu1 : lows) {
            const auto hi = widest_mu2(prior, left, right, m, mu1);
            if (!hi) continue;
            for (double mu2 : highs)
                if (mu2 <= *hi) consider(mu1, mu2);
            consider(mu1, *hi);
        }
        for (double mu2 : highs) {
            const auto lo = widest_mu1(prior, left, right, m, mu2);
            if (lo) consider(*lo, mu2);
        }
    }
    if (!pick) return std::nullopt;
    return SegmentChoice{left, right, *pick, mass * best};
}

std::vector<double> two_signal_candidates(const Instance& instance, const DpGrid& grid) {
    std::vector<double> out = instance.utility.breakpoints();
    for (const auto& s : instance.utility.spikes()) out.push_back(s.location);
    for (double x : grid.xs_with(kFromUser)) out.push_back(x);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

BiPoolingTable::BiPoolingTable(const Instance& instance, const DpGrid& grid, int threads)
    : grid_(grid), n_(grid.size()), one_(n_ * n_, 0.0), two_(n_ * n_) {
    const auto candidates = two_signal_candidates(instance, grid);
    detail::parallel_for(0, n_, threads, [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n_; ++j) {
            const double mass = segment_mass(instance.prior, grid[i], grid[j]);
            if (!(mass > 0.0)) continue;
            one_[i * n_ + j] = mass * instance.utility(segment_mean(instance.prior, grid[i], grid[j]));
            two_[i * n_ + j] = best_two_signal(instance, grid[i], grid[j], candidates, true);
        }
    });
}

BiPoolingSolution solve_bipooling_dp(const Instance& instance, int K, const DpGrid& grid,
                                     const SolveOptions& options) {
    if (K < 1) throw InvalidArgument("solve_bipooling_dp: signal budget K must be at least 1");
    const BiPoolingTable table(instance, grid, options.threads);
    return solve_bipooling_dp(instance, table, K);
}

BiPoolingSolution solve_bipooling_dp(const Instance& instance, const BiPoolingTable& table, int K) {
    if (K < 1) throw InvalidArgument("solve_bipooling_dp: signal budget K must be at least 1");
    const std::size_t n = table.size();
    const auto rows = static_cast<std::size_t>(K) + 1;
    constexpr double kNone = -std::numeric_limits<double>::infinity();
    enum class Step : unsigned char { Inherit, One, Two };
    struct Back {
        Step step = Step::Inherit;
        std::size_t from = 0;
    };
    // best[k][j]: best value on [0, x_j) with at most k signals.
    std::vector<std::vector<double>> best(rows, std::vector<double>(n, kNone));
    std::vector<std::vector<Back>> back(rows, std::vector<Back>(n));
    for (std::size_t k = 0; k < rows; ++k) best[k][0] = 0.0;

    for (std::size_t k = 1; k < rows; ++k) {
        for (std::size_t j = 1; j < n; ++j) {
            double v = best[k - 1][j];
            Back b{Step::Inherit, j};
            for (std::size_t jp = 0; jp < j; ++jp) {
                if (best[k - 1][jp] != kNone) {
                    const double cand = best[k - 1][jp] + table.one(jp, j);
                    if (cand > v) {
                        v = cand;
                        b = {Step::One, jp};
                    }
                }
                if (k >= 2 && best[k - 2][jp] != kNone) {
                    if (const auto& two = table.two(jp, j)) {
                        const double cand = best[k - 2][jp] + two->value;
                        if (cand > v) {
                            v = cand;
                            b = {Step::Two, jp};
                        }
                    }
                }
            }
            best[k][j] = v;
            back[k][j] = b;
        }
    }

    const DpGrid& grid = table.grid();
    std::vector<BiPoolingSegment> segments;
    std::size_t k = rows - 1, j = n - 1;
    while (j > 0) {
        const Back b = back[k][j];
        switch (b.step) {
            case Step::Inherit:
                --k;
                break;
            case Step::One:
                segments.push_back({grid[b.from], grid[j], OneSignal{}});
                j = b.from;
                k -= 1;
                break;
            case Step::Two:
                segments.push_back({grid[b.from], grid[j], table.two(b.from, j)->mode});
                j = b.from;
                k -= 2;
                break;
        }
    }
    std::reverse(segments.begin(), segments.end());

    BiPoolingSolution out;
    out.value = best[rows - 1][n - 1];
    out.policy = make_bipooling(instance.prior, std::move(segments), K);
    return out;
}

namespace {

// Utility with spike matching widened to the enumeration resolution.
double resolution_utility(const Utility& u, double mu, double window) {
    for (const auto& s : u.spikes())
        if (std::abs(s.location - mu) <= window) return s.value;
    return u.base_value(mu);
}

double binomial(double n, double k) {
    double r = 1.0;
    for (double i = 0; i < k; ++i) r = r * (n - i) / (i + 1.0);
    return r;
}

}  // namespace

double brute_force_unrestricted(const Prior& prior, const Utility& utility, int K, int q, bool monotone) {
    if (!prior.is_purely_atomic()) throw InvalidArgument("brute_force_unrestricted: prior must be purely atomic");
    if (K < 1) throw InvalidArgument("brute_force_unrestricted: signal budget K must be at least 1");
    if (q < 1) throw InvalidArgument("brute_force_unrestricted: resolution q must be at least 1");
    const auto& atoms = prior.atoms();
    const std::size_t n = atoms.size();
    const double window = std::max(kSnapTol, 1.0 / q);

    // Count = compositions of q into K parts per atom (unrestricted) or
    // nondecreasing cut positions on the atom-mass line (monotone).
    const double count = monotone ? binomial(static_cast<double>(n) * q + K - 1, K - 1)
                                  : std::pow(binomial(q + K - 1, K - 1), static_cast<double>(n));
    if (count > kAtomicOracleBudget) {
        std::ostringstream os;
        os << "brute_force_unrestricted: " << count << " allocations exceed the budget of " << kAtomicOracleBudget;
        throw InvalidArgument(os.str());
    }

    const auto signals = static_cast<std::size_t>(K);
    // shares[i][s]: units (out of q) of atom i sent to signal s.
    std::vector<std::vector<int>> shares(n, std::vector<int>(signals, 0));
    double best = 0.0;
    auto evaluate = [&] {
        double v = 0.0;
        for (std::size_t s = 0; s < signals; ++s) {
            double mass = 0.0, moment = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double w = atoms[i].mass * shares[i][s] / q;
                mass += w;
                moment += w * atoms[i].location;
            }
            if (mass > 0.0) v += mass * resolution_utility(utility, moment / mass, window);
        }
        best = std::max(best, v);
    };

    if (monotone) {
        const int line = static_cast<int>(n) * q;
        std::vector<int> cuts(signals + 1, 0);
        cuts[signals] = line;
        auto fill = [&] {
            for (std::size_t i = 0; i < n; ++i) {
                const int lo = static_cast<int>(i) * q, hi = lo + q;
                for (std::size_t s = 0; s < signals; ++s)
                    shares[i][s] = std::max(0, std::min(hi, cuts[s + 1]) - std::max(lo, cuts[s]));
            }
        };
        auto recurse = [&](auto&& self, std::size_t idx, int from) -> void {
            if (idx == signals) {
                fill();
                evaluate();
                return;
            }
            for (int t = from; t <= line; ++t) {
                cuts[idx] = t;
                self(self, idx + 1, t);
            }
        };
        if (signals == 1) {
            fill();
            evaluate();
        } else {
            recurse(recurse, 1, 0);
        }
        return best;
    }

    // Unrestricted: for each atom, every composition of q into K parts.
    auto compose = [&](auto&& self, std::size_t atom, std::size_t s, int remaining) -> void {
        if (atom == n) {
            evaluate();
            return;
        }
        if (s + 1 == signals) {
            shares[atom][s] = remaining;
            self(self, atom + 1, 0, q);
            return;
        }
        for (int take = 0; take <= remaining; ++take) {
            shares[atom][s] = take;
            self(self, atom, s + 1, remaining - take);
        }
    };
    compose(compose, 0, 0, q);
    return best;
}

}  // namespace persuade
