#include "persuade/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "persuade/hardness.hpp"
#include "persuade/solver_unrestricted.hpp"

namespace persuade {

PoeResult poe(const Instance& instance, int K, const DpGrid& grid, const PoeOptions& options) {
    PoeResult r;
    if (instance.prior.is_purely_atomic()) {
        r.opt = brute_force_unrestricted(instance.prior, instance.utility, K, options.q, false);
        r.opt_part = brute_force_unrestricted(instance.prior, instance.utility, K, options.q, true);
    } else {
        const SolveOptions so{options.threads};
        r.opt_part = solve_partitional_dp(instance, K, grid, so).value;
        r.opt = solve_bipooling_dp(instance, K, grid, so).value;
    }
    if (r.opt > 0.0) r.ratio = r.opt_part / r.opt;
    return r;
}

Instance tight_instance(double p) {
    if (!(p > 0.0 && p < 0.5)) throw InvalidArgument("tight_instance: need 0 < p < 1/2");
    const double mu1 = (1.0 - 2.0 * p) / (2.0 * (1.0 - p));
    const double mu2 = 1.0 / (2.0 * (1.0 - p));
    std::ostringstream label;
    label << "tight(" << p << ")";
    return Instance{Prior::atomic({{0.0, p}, {0.5, 1.0 - 2.0 * p}, {1.0, p}}), Utility::spikes_at({mu1, mu2}),
                    label.str()};
}

Instance example_1_1() {
    std::vector<BaseSegment> base{{0.0, 0.4, 0.0, 0.0}, {0.4, 0.8, 0.9, 0.9}, {0.8, 1.0, 1.0, 1.0}};
    return Instance{Prior::uniform(), Utility(std::move(base), {}, std::nullopt, 1.0), "example_1_1"};
}

Instance example_2_1() {
    return Instance{Prior::uniform(), Utility::spikes_at({1.0 / 3.0, 2.0 / 3.0}), "example_2_1"};
}

namespace {

// "name(args)" -> args, or nullopt if `text` is not a call of `name`.
std::optional<std::string> call_args(const std::string& text, const std::string& name) {
    if (text.size() < name.size() + 2 || text.compare(0, name.size(), name) != 0) return std::nullopt;
    if (text[name.size()] != '(' || text.back() != ')') return std::nullopt;
    return text.substr(name.size() + 1, text.size() - name.size() - 2);
}

}  // namespace

Instance builtin_instance(const std::string& name) {
    if (name == "example_1_1") return example_1_1();
    if (name == "example_2_1") return example_2_1();
    if (auto args = call_args(name, "tight")) {
        double p = 0.0;
        std::size_t used = 0;
        try {
            p = std::stod(*args, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != args->size()) throw InvalidArgument("tight(p): cannot parse p from '" + *args + "'");
        return tight_instance(p);
    }
    if (auto args = call_args(name, "reduction")) {
        PartitionInput input;
        std::stringstream ss(*args);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                input.c.emplace_back(item);
            } catch (const std::exception&) {
                throw InvalidArgument("reduction(c): cannot parse integer '" + item + "'");
            }
        }
        return reduce_partition(input).instance;
    }
    throw InvalidArgument("unknown builtin instance '" + name + "'");
}

Utility discretize_utility(const Utility& u, double eps) {
    if (!(eps > 0.0)) throw InvalidArgument("discretize_utility: eps must be positive");
    if (u.is_piecewise_constant()) return u;
    if (!u.lipschitz()) throw InvalidArgument("discretize_utility: utility needs a Lipschitz constant");
    const double L = *u.lipschitz();
    const double width = L > 0.0 ? eps / L : 1.0;
    std::vector<BaseSegment> base;
    for (const auto& s : u.base()) {
        if (s.value_left == s.value_right || !(s.right > s.left)) {
            base.push_back(s);
            continue;
        }
        const auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil((s.right - s.left) / width - 1e-9)));
        for (std::size_t k = 0; k < pieces; ++k) {
            const double a = s.left + (s.right - s.left) * static_cast<double>(k) / static_cast<double>(pieces);
            const double b = k + 1 == pieces
                                 ? s.right
                                 : s.left + (s.right - s.left) * static_cast<double>(k + 1) / static_cast<double>(pieces);
            const double v = s.at(0.5 * (a + b));
            base.push_back({a, b, v, v});
        }
    }
    return Utility(std::move(base), u.spikes(), std::nullopt, u.upper_bound());
}

Utility interpolate_utility(const std::function<double(double)>& f, int pieces) {
    if (pieces < 1) throw InvalidArgument("interpolate_utility: need at least one piece");
    std::vector<BaseSegment> base;
    double L = 0.0, top = 0.0;
    for (int k = 0; k < pieces; ++k) {
        const double a = static_cast<double>(k) / pieces, b = static_cast<double>(k + 1) / pieces;
        base.push_back({a, b, f(a), f(b)});
        L = std::max(L, std::abs(base.back().slope()));
        top = std::max({top, f(a), f(b)});
    }
    return Utility(std::move(base), {}, L, std::max(top, 0.0));
}

namespace {

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::vector<double> sorted_points(Rng& rng, int count, double lo, double hi) {
    std::vector<double> xs;
    for (int i = 0; i < count; ++i) xs.push_back(lo + (hi - lo) * uniform01(rng));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

}  // namespace

Prior random_prior(Rng& rng) {
    if (uniform01(rng) < 0.4) return Prior::uniform();
    // c0 + c1 theta with unit mass: c0 = 1 - c1/2; |c1| <= 1.9 keeps it positive and <= 2.
    const double c1 = -1.9 + 3.8 * uniform01(rng);
    return Prior({{0.0, 1.0, 1.0 - 0.5 * c1, c1}}, {});
}

Utility random_step_utility(Rng& rng, int max_pieces, int max_spikes) {
    const int pieces = uniform_int(rng, 1, max_pieces);
    auto cuts = sorted_points(rng, pieces - 1, 0.02, 0.98);
    cuts.insert(cuts.begin(), 0.0);
    cuts.push_back(1.0);
    std::vector<BaseSegment> base;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double v = uniform01(rng) < 0.25 ? 0.0 : uniform01(rng);
        base.push_back({cuts[i], cuts[i + 1], v, v});
    }
    std::vector<Spike> spikes;
    const int count = uniform_int(rng, 0, max_spikes);
    for (double x : sorted_points(rng, count, 0.05, 0.95)) spikes.push_back({x, 0.5 + 0.5 * uniform01(rng)});
    return Utility(std::move(base), std::move(spikes), std::nullopt, 1.0);
}

Instance random_instance(Rng& rng) {
    Prior prior = random_prior(rng);
    Utility utility = random_step_utility(rng);
    return Instance{std::move(prior), std::move(utility), "random"};
}

Instance random_lipschitz_instance(Rng& rng, double max_lipschitz) {
    const double L = 0.5 + (max_lipschitz - 0.5) * uniform01(rng);
    const int pieces = uniform_int(rng, 2, 8);
    std::vector<BaseSegment> base;
    double v = uniform01(rng);
    for (int k = 0; k < pieces; ++k) {
        const double a = static_cast<double>(k) / pieces, b = static_cast<double>(k + 1) / pieces;
        const double slope = L * (2.0 * uniform01(rng) - 1.0);
        const double w = std::clamp(v + slope * (b - a), 0.0, 1.0);
        base.push_back({a, b, v, w});
        v = w;
    }
    return Instance{random_prior(rng), Utility(std::move(base), {}, L, 1.0), "random-lipschitz"};
}

BiPoolingPolicy random_bipooling_policy(const Prior& prior, Rng& rng, int max_segments) {
    for (;;) {
        const int count = uniform_int(rng, 1, max_segments);
        auto bounds = sorted_points(rng, count - 1, 0.05, 0.95);
        bounds.insert(bounds.begin(), 0.0);
        bounds.push_back(1.0);
        std::vector<BiPoolingSegment> segments;
        for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
            const double a = bounds[i], b = bounds[i + 1];
            BiPoolingSegment s{a, b, OneSignal{}};
            const double mass = segment_mass(prior, a, b);
            if (mass > 0.0 && uniform01(rng) < 0.7) {
                const double m = segment_mean(prior, a, b);
                const double mu1 = a + (m - a) * (0.02 + 0.96 * uniform01(rng));
                if (const auto hi = widest_mu2(prior, a, b, m, mu1)) {
                    const double mu2 = m + (*hi - m) * (0.02 + 0.98 * uniform01(rng));
                    if (mu1 < m && mu2 > m) s.mode = TwoSignal{mu1, mu2, (mu2 - m) / (mu2 - mu1)};
                }
            }
            segments.push_back(s);
        }
        try {
            return make_bipooling(prior, std::move(segments));
        } catch (const InvalidPolicy&) {
            // Rare round-off at the feasibility boundary; draw again.
        }
    }
}

}  // namespace persuade
