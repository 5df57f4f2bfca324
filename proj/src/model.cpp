#include "persuade/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace persuade {

namespace {

constexpr double kCoverTol = 1e-12;

double segment_mass(const DensitySegment& s, double l, double x) {
    return (x - l) * (s.c0 + s.c1 * (x + l) / 2.0);
}

double segment_moment(const DensitySegment& s, double l, double x) {
    return (x - l) * (s.c0 * (x + l) / 2.0 + s.c1 * (x * x + x * l + l * l) / 3.0);
}

[[noreturn]] void reject(const std::string& what) { throw InvalidArgument(what); }

void check_unit_range(double a, double b, const char* op) {
    if (!(a >= 0.0 && b <= 1.0 && a <= b)) {
        std::ostringstream os;
        os << op << ": need 0 <= a <= b <= 1, got a=" << a << " b=" << b;
        reject(os.str());
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Prior
// ---------------------------------------------------------------------------

Prior::Prior(std::vector<DensitySegment> segments, std::vector<Atom> atoms)
    : segments_(std::move(segments)), atoms_(std::move(atoms)) {
    if (segments_.empty()) reject("prior: at least one density segment is required");
    if (std::abs(segments_.front().left) > kCoverTol || std::abs(segments_.back().right - 1.0) > kCoverTol)
        reject("prior: density segments must cover [0,1]");
    segments_.front().left = 0.0;
    segments_.back().right = 1.0;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const auto& s = segments_[i];
        if (!(s.left < s.right)) reject("prior: density segment with left >= right");
        if (i + 1 < segments_.size() && std::abs(s.right - segments_[i + 1].left) > kCoverTol)
            reject("prior: density segments must be contiguous and ordered");
        if (s.density(s.left) < -kCoverTol || s.density(s.right) < -kCoverTol)
            reject("prior: negative density");
    }
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const auto& a = atoms_[i];
        if (!(a.location >= 0.0 && a.location <= 1.0)) reject("prior: atom outside [0,1]");
        if (!(a.mass >= 0.0)) reject("prior: negative atom mass");
        if (i > 0 && !(atoms_[i - 1].location < a.location))
            reject("prior: atom locations must be strictly increasing");
    }

    seg_mass_prefix_.assign(segments_.size() + 1, 0.0);
    seg_moment_prefix_.assign(segments_.size() + 1, 0.0);
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const auto& s = segments_[i];
        seg_mass_prefix_[i + 1] = seg_mass_prefix_[i] + segment_mass(s, s.left, s.right);
        seg_moment_prefix_[i + 1] = seg_moment_prefix_[i] + segment_moment(s, s.left, s.right);
    }
    atom_mass_prefix_.assign(atoms_.size() + 1, 0.0);
    atom_moment_prefix_.assign(atoms_.size() + 1, 0.0);
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        atom_mass_prefix_[i + 1] = atom_mass_prefix_[i] + atoms_[i].mass;
        atom_moment_prefix_[i + 1] = atom_moment_prefix_[i] + atoms_[i].mass * atoms_[i].location;
    }
    continuous_total_ = seg_mass_prefix_.back();
    const double total = continuous_total_ + atom_mass_prefix_.back();
    if (std::abs(total - 1.0) > 1e-12) {
        std::ostringstream os;
        os << "prior: total mass must be 1, got " << total;
        reject(os.str());
    }
    uniform_ = atoms_.empty() && segments_.size() == 1 && segments_[0].c0 == 1.0 && segments_[0].c1 == 0.0;
}

Prior Prior::uniform() { return Prior({DensitySegment{0.0, 1.0, 1.0, 0.0}}, {}); }

Prior Prior::atomic(std::vector<Atom> atoms) {
    return Prior({DensitySegment{0.0, 1.0, 0.0, 0.0}}, std::move(atoms));
}

std::size_t Prior::segment_index(double x) const {
    auto it = std::upper_bound(segments_.begin(), segments_.end(), x,
                               [](double v, const DensitySegment& s) { return v < s.left; });
    if (it == segments_.begin()) return 0;
    return static_cast<std::size_t>(std::distance(segments_.begin(), it)) - 1;
}

double Prior::density(double theta) const {
    if (theta < 0.0 || theta > 1.0) return 0.0;
    return segments_[segment_index(theta)].density(theta);
}

double Prior::density_bound() const {
    double bound = 0.0;
    for (const auto& s : segments_) bound = std::max({bound, s.density(s.left), s.density(s.right)});
    return bound;
}

double Prior::mean() const { return moment(1.0, true); }

double Prior::continuous_mass_upto(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return continuous_total_;
    const std::size_t i = segment_index(x);
    const auto& s = segments_[i];
    return seg_mass_prefix_[i] + segment_mass(s, s.left, std::min(x, s.right));
}

double Prior::continuous_moment_upto(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return seg_moment_prefix_.back();
    const std::size_t i = segment_index(x);
    const auto& s = segments_[i];
    return seg_moment_prefix_[i] + segment_moment(s, s.left, std::min(x, s.right));
}

namespace {

// Number of atoms with location < x (or <= x when inclusive).
std::size_t atoms_before(const std::vector<Atom>& atoms, double x, bool inclusive) {
    auto it = inclusive
                  ? std::upper_bound(atoms.begin(), atoms.end(), x,
                                     [](double v, const Atom& a) { return v < a.location; })
                  : std::lower_bound(atoms.begin(), atoms.end(), x,
                                     [](const Atom& a, double v) { return a.location < v; });
    return static_cast<std::size_t>(std::distance(atoms.begin(), it));
}

}  // namespace

double Prior::cdf(double x, bool inclusive) const {
    return continuous_mass_upto(x) + atom_mass_prefix_[atoms_before(atoms_, x, inclusive)];
}

double Prior::moment(double x, bool inclusive) const {
    return continuous_moment_upto(x) + atom_moment_prefix_[atoms_before(atoms_, x, inclusive)];
}

double Prior::quantile(double level) const {
    if (level <= 0.0) {
        // Smallest x with F([0,x]) >= 0 is 0.
        return 0.0;
    }
    if (atoms_.empty()) {
        if (level >= continuous_total_) {
            // Last point where mass is still accumulating.
            for (std::size_t i = segments_.size(); i-- > 0;)
                if (seg_mass_prefix_[i] < seg_mass_prefix_[i + 1]) {
                    return segments_[i].right;
                }
            return 1.0;
        }
        auto it = std::lower_bound(seg_mass_prefix_.begin() + 1, seg_mass_prefix_.end(), level);
        const std::size_t i = static_cast<std::size_t>(std::distance(seg_mass_prefix_.begin(), it)) - 1;
        const auto& s = segments_[i];
        const double target = level - seg_mass_prefix_[i];
        const double f_left = s.density(s.left);
        double y;
        if (std::abs(s.c1) < 1e-300) {
            y = f_left > 0.0 ? target / f_left : 0.0;
        } else {
            const double disc = std::max(0.0, f_left * f_left + 2.0 * s.c1 * target);
            const double denom = f_left + std::sqrt(disc);
            y = denom > 0.0 ? 2.0 * target / denom : 0.0;
        }
        return std::clamp(s.left + y, s.left, s.right);
    }
    double lo = 0.0, hi = 1.0;
    if (cdf(0.0, true) >= level) return 0.0;
    for (int it = 0; it < kRootMaxIter && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (cdf(mid, true) >= level)
            hi = mid;
        else
            lo = mid;
    }
    // Snap to an atom when the crossing happens at one.
    for (const auto& a : atoms_)
        if (std::abs(a.location - hi) <= 4.0 * std::numeric_limits<double>::epsilon() && cdf(a.location, true) >= level)
            return a.location;
    return hi;
}

std::vector<double> Prior::breakpoints() const {
    std::vector<double> pts;
    for (const auto& s : segments_) {
        pts.push_back(s.left);
        pts.push_back(s.right);
    }
    for (const auto& a : atoms_) pts.push_back(a.location);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

// ---------------------------------------------------------------------------
// Utility
// ---------------------------------------------------------------------------

double BaseSegment::at(double mu) const {
    if (!(right > left)) return value_left;
    const double t = std::clamp((mu - left) / (right - left), 0.0, 1.0);
    return value_left + t * (value_right - value_left);
}

Utility::Utility(std::vector<BaseSegment> base, std::vector<Spike> spikes,
                 std::optional<double> lipschitz, double upper_bound)
    : base_(std::move(base)), spikes_(std::move(spikes)), lipschitz_(lipschitz), upper_bound_(upper_bound) {
    if (!(upper_bound_ >= 0.0)) reject("utility: upper bound must be nonnegative");
    if (base_.empty()) reject("utility: at least one base segment is required");
    if (std::abs(base_.front().left) > kCoverTol || std::abs(base_.back().right - 1.0) > kCoverTol)
        reject("utility: base segments must cover [0,1]");
    base_.front().left = 0.0;
    base_.back().right = 1.0;
    const double slack = 1e-12 * std::max(1.0, upper_bound_);
    auto in_range = [&](double v) { return v >= -slack && v <= upper_bound_ + slack; };
    for (std::size_t i = 0; i < base_.size(); ++i) {
        const auto& s = base_[i];
        if (!(s.left < s.right)) reject("utility: base segment with left >= right");
        if (i + 1 < base_.size() && std::abs(s.right - base_[i + 1].left) > kCoverTol)
            reject("utility: base segments must be contiguous and ordered");
        if (!in_range(s.value_left) || !in_range(s.value_right))
            reject("utility: base value outside [0, upper bound]");
    }
    std::sort(spikes_.begin(), spikes_.end(),
              [](const Spike& a, const Spike& b) { return a.location < b.location; });
    for (std::size_t i = 0; i < spikes_.size(); ++i) {
        const auto& s = spikes_[i];
        if (!(s.location >= 0.0 && s.location <= 1.0)) reject("utility: spike outside [0,1]");
        if (!in_range(s.value)) reject("utility: spike value outside [0, upper bound]");
        if (i > 0 && spikes_[i - 1].location == s.location) reject("utility: duplicate spike location");
    }
    if (lipschitz_) {
        if (!(*lipschitz_ >= 0.0)) reject("utility: Lipschitz constant must be nonnegative");
        if (!spikes_.empty()) reject("utility: the Lipschitz flag is incompatible with spikes");
        for (const auto& s : base_)
            if (std::abs(s.slope()) > *lipschitz_ * (1.0 + 1e-12) + 1e-12)
                reject("utility: base slope exceeds the declared Lipschitz constant");
    }
}

Utility Utility::constant(double value) {
    return Utility({BaseSegment{0.0, 1.0, value, value}}, {}, 0.0, std::max(value, 0.0));
}

Utility Utility::identity() { return Utility({BaseSegment{0.0, 1.0, 0.0, 1.0}}, {}, 1.0, 1.0); }

Utility Utility::spikes_at(const std::vector<double>& locations) {
    std::vector<Spike> spikes;
    spikes.reserve(locations.size());
    for (double x : locations) spikes.push_back({x, 1.0});
    return Utility({BaseSegment{0.0, 1.0, 0.0, 0.0}}, std::move(spikes), std::nullopt, 1.0);
}

double Utility::operator()(double mu) const {
    if (!spikes_.empty()) {
        auto it = std::lower_bound(spikes_.begin(), spikes_.end(), mu,
                                   [](const Spike& s, double v) { return s.location < v; });
        const Spike* best = nullptr;
        double best_dist = kSnapTol;
        for (auto cand : {it, it == spikes_.begin() ? it : std::prev(it)}) {
            if (cand == spikes_.end()) continue;
            const double dist = std::abs(cand->location - mu);
            if (dist <= best_dist) {
                best_dist = dist;
                best = &*cand;
            }
        }
        if (best) return best->value;
    }
    return base_value(mu);
}

double Utility::base_value(double mu) const {
    const double x = std::clamp(mu, 0.0, 1.0);
    auto it = std::upper_bound(base_.begin(), base_.end(), x,
                               [](double v, const BaseSegment& s) { return v < s.left; });
    std::size_t i = it == base_.begin() ? 0 : static_cast<std::size_t>(std::distance(base_.begin(), it)) - 1;
    double value = base_[i].at(x);
    // Upper semi-continuous envelope at interior breakpoints.
    if (i > 0 && x - base_[i].left <= kSnapTol)
        value = std::max({value, base_[i - 1].value_right, base_[i].value_left});
    if (i + 1 < base_.size() && base_[i].right - x <= kSnapTol)
        value = std::max({value, base_[i].value_right, base_[i + 1].value_left});
    return value;
}

bool Utility::is_piecewise_constant() const {
    return std::all_of(base_.begin(), base_.end(),
                       [](const BaseSegment& s) { return s.value_left == s.value_right; });
}

std::vector<double> Utility::breakpoints() const {
    std::vector<double> pts;
    for (const auto& s : base_) pts.push_back(s.left);
    pts.push_back(1.0);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

// ---------------------------------------------------------------------------
// Interval statistics
// ---------------------------------------------------------------------------

double interval_mass(const Prior& prior, double a, double b, bool closed_left, bool closed_right) {
    check_unit_range(a, b, "interval_mass");
    if (a == b) {
        if (!(closed_left && closed_right)) return 0.0;
        return prior.cdf(a, true) - prior.cdf(a, false);
    }
    const double cont = prior.continuous_mass_upto(b) - prior.continuous_mass_upto(a);
    const double atoms = (prior.cdf(b, closed_right) - prior.continuous_mass_upto(b)) -
                         (prior.cdf(a, !closed_left) - prior.continuous_mass_upto(a));
    return std::clamp(cont + atoms, 0.0, 1.0);
}

double interval_moment(const Prior& prior, double a, double b, bool closed_left, bool closed_right) {
    check_unit_range(a, b, "interval_moment");
    if (a == b) {
        if (!(closed_left && closed_right)) return 0.0;
        return prior.moment(a, true) - prior.moment(a, false);
    }
    const double cont = prior.continuous_moment_upto(b) - prior.continuous_moment_upto(a);
    const double atoms = (prior.moment(b, closed_right) - prior.continuous_moment_upto(b)) -
                         (prior.moment(a, !closed_left) - prior.continuous_moment_upto(a));
    return std::max(0.0, cont + atoms);
}

double interval_mean(const Prior& prior, double a, double b, bool closed_left, bool closed_right) {
    check_unit_range(a, b, "interval_mean");
    if (prior.is_uniform() && a < b) return 0.5 * (a + b);
    const double mass = interval_mass(prior, a, b, closed_left, closed_right);
    if (!(mass > 0.0)) {
        std::ostringstream os;
        os << "interval_mean: interval [" << a << ", " << b << "] has zero prior mass";
        throw DegenerateInterval(os.str());
    }
    if (a == b) return a;
    return std::clamp(interval_moment(prior, a, b, closed_left, closed_right) / mass, a, b);
}

double integrated_cdf(const Prior& prior, double a, double x, bool closed_left) {
    if (x <= a) return 0.0;
    return x * interval_mass(prior, a, x, closed_left, true) - interval_moment(prior, a, x, closed_left, true);
}

namespace {

[[noreturn]] void infeasible(const char* op, double bound, double target, double reachable) {
    std::ostringstream os;
    os.precision(17);
    os << op << ": target mean " << target << " not attainable from endpoint " << bound
       << " (reachable limit " << reachable << ")";
    throw InfeasibleTarget(os.str());
}

}  // namespace

double solve_right_endpoint(const Prior& prior, double b, double target_mean, double tol) {
    if (!(b >= 0.0 && b < 1.0)) reject("solve_right_endpoint: need 0 <= b < 1");
    if (!(target_mean > b)) infeasible("solve_right_endpoint", b, target_mean, b);
    const double full_mass = interval_mass(prior, b, 1.0, true, true);
    if (!(full_mass > 0.0)) infeasible("solve_right_endpoint", b, target_mean, b);
    const double reach = interval_mean(prior, b, 1.0, true, true);
    if (target_mean > reach + tol) infeasible("solve_right_endpoint", b, target_mean, reach);
    if (target_mean >= reach) return 1.0;
    if (prior.is_uniform()) return std::min(1.0, 2.0 * target_mean - b);

    auto mean_upto = [&](double c) -> std::optional<double> {
        const bool closed = c >= 1.0;
        if (!(interval_mass(prior, b, c, true, closed) > 0.0)) return std::nullopt;
        return interval_mean(prior, b, c, true, closed);
    };
    double lo = b, hi = 1.0;
    for (int it = 0; it < kRootMaxIter; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const auto m = mean_upto(mid);
        if (m && std::abs(*m - target_mean) <= tol) return mid;
        if (!m || *m < target_mean)
            lo = mid;
        else
            hi = mid;
    }
    const auto m = mean_upto(hi);
    if (m && std::abs(*m - target_mean) <= tol) return hi;
    infeasible("solve_right_endpoint", b, target_mean, m.value_or(b));
}

double solve_left_endpoint(const Prior& prior, double b_right, double target_mean, double tol) {
    if (!(b_right > 0.0 && b_right <= 1.0)) reject("solve_left_endpoint: need 0 < b_right <= 1");
    const bool closed_right = b_right >= 1.0;
    if (!(target_mean < b_right)) infeasible("solve_left_endpoint", b_right, target_mean, b_right);
    const double full_mass = interval_mass(prior, 0.0, b_right, true, closed_right);
    if (!(full_mass > 0.0)) infeasible("solve_left_endpoint", b_right, target_mean, b_right);
    const double reach = interval_mean(prior, 0.0, b_right, true, closed_right);
    if (target_mean < reach - tol) infeasible("solve_left_endpoint", b_right, target_mean, reach);
    if (target_mean <= reach) return 0.0;
    if (prior.is_uniform()) return std::max(0.0, 2.0 * target_mean - b_right);

    auto mean_from = [&](double c) -> std::optional<double> {
        if (!(interval_mass(prior, c, b_right, true, closed_right) > 0.0)) return std::nullopt;
        return interval_mean(prior, c, b_right, true, closed_right);
    };
    double lo = 0.0, hi = b_right;
    for (int it = 0; it < kRootMaxIter; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const auto m = mean_from(mid);
        if (m && std::abs(*m - target_mean) <= tol) return mid;
        if (!m || *m > target_mean)
            hi = mid;
        else
            lo = mid;
    }
    const auto m = mean_from(lo);
    if (m && std::abs(*m - target_mean) <= tol) return lo;
    infeasible("solve_left_endpoint", b_right, target_mean, m.value_or(b_right));
}

}  // namespace persuade
