#include "persuade/policy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace persuade {

namespace {

constexpr double kBoundaryTol = 1e-12;

[[noreturn]] void invalid(const std::string& what) { throw InvalidPolicy(what); }

double atom_mass_at(const Prior& prior, double x) {
    for (const auto& a : prior.atoms())
        if (a.location == x) return a.mass;
    return 0.0;
}

bool has_atom_at(const Prior& prior, double x) {
    return std::any_of(prior.atoms().begin(), prior.atoms().end(),
                       [x](const Atom& a) { return a.location == x; });
}

struct CutPosition {
    double x;
    double left_share;  // fraction of the atom at x that lies left of the cut
};

std::vector<CutPosition> cut_positions(const Prior& prior, const PartitionalPolicy& policy) {
    validate_partitional(prior, policy);
    std::vector<CutPosition> out;
    out.reserve(policy.cuts.size() + 2);
    out.push_back({0.0, 0.0});
    std::vector<bool> used(policy.atom_splits.size(), false);
    for (double c : policy.cuts) {
        double share = 0.0;
        for (std::size_t k = 0; k < policy.atom_splits.size(); ++k) {
            if (!used[k] && policy.atom_splits[k].location == c) {
                used[k] = true;
                share = policy.atom_splits[k].fraction_to_left;
                break;
            }
        }
        out.push_back({c, share});
    }
    out.push_back({1.0, 1.0});
    return out;
}

}  // namespace

int BiPoolingPolicy::signal_count() const {
    int n = 0;
    for (const auto& s : segments) n += s.signal_count();
    return n;
}

double MeanDistribution::total_mass() const {
    double m = 0.0;
    for (const auto& p : points) m += p.mass;
    return m;
}

double MeanDistribution::mean() const {
    double m = 0.0;
    for (const auto& p : points) m += p.mass * p.mean;
    return m;
}

void validate_partitional(const Prior& prior, const PartitionalPolicy& policy) {
    for (std::size_t i = 0; i < policy.cuts.size(); ++i) {
        const double c = policy.cuts[i];
        if (!(c >= 0.0 && c <= 1.0)) invalid("partitional policy: cut outside [0,1]");
        if (i > 0 && c < policy.cuts[i - 1]) invalid("partitional policy: cuts must be sorted");
        if (i > 0 && c == policy.cuts[i - 1] && has_atom_at(prior, c)) {
            // Repeated cuts on an atom need explicit, nondecreasing splits.
            const auto n_splits = std::count_if(policy.atom_splits.begin(), policy.atom_splits.end(),
                                                [c](const AtomSplit& s) { return s.location == c; });
            const auto n_cuts = std::count(policy.cuts.begin(), policy.cuts.end(), c);
            if (n_splits != n_cuts)
                invalid("partitional policy: repeated cuts on an atom need one split per cut");
        }
    }
    double prev_loc = -1.0, prev_frac = 0.0;
    for (const auto& s : policy.atom_splits) {
        if (!(s.fraction_to_left >= 0.0 && s.fraction_to_left <= 1.0))
            invalid("partitional policy: split fraction outside [0,1]");
        if (!has_atom_at(prior, s.location)) invalid("partitional policy: split at a location without an atom");
        const auto n_cuts = std::count(policy.cuts.begin(), policy.cuts.end(), s.location);
        const auto n_splits = std::count_if(policy.atom_splits.begin(), policy.atom_splits.end(),
                                            [&](const AtomSplit& o) { return o.location == s.location; });
        if (n_cuts == 0) invalid("partitional policy: split location does not coincide with a cut");
        if (n_splits > n_cuts) invalid("partitional policy: more splits than cuts at one location");
        if (s.location < prev_loc) invalid("partitional policy: splits must be sorted by location");
        if (s.location == prev_loc && s.fraction_to_left < prev_frac)
            invalid("partitional policy: split fractions at one atom must be nondecreasing");
        prev_loc = s.location;
        prev_frac = s.fraction_to_left;
    }
}

std::vector<PolicyCell> partition_cells(const Prior& prior, const PartitionalPolicy& policy) {
    const auto pos = cut_positions(prior, policy);
    std::vector<PolicyCell> cells;
    cells.reserve(pos.size() - 1);
    for (std::size_t i = 0; i + 1 < pos.size(); ++i) {
        const auto& lo = pos[i];
        const auto& hi = pos[i + 1];
        PolicyCell cell{lo.x, hi.x, 0.0, lo.x};
        double moment = 0.0;
        if (lo.x == hi.x) {
            const double share = std::max(0.0, hi.left_share - lo.left_share);
            cell.mass = share * atom_mass_at(prior, lo.x);
            moment = cell.mass * lo.x;
        } else {
            const double a_lo = atom_mass_at(prior, lo.x) * (1.0 - lo.left_share);
            const double a_hi = atom_mass_at(prior, hi.x) * hi.left_share;
            cell.mass = interval_mass(prior, lo.x, hi.x, false, false) + a_lo + a_hi;
            moment = interval_moment(prior, lo.x, hi.x, false, false) + a_lo * lo.x + a_hi * hi.x;
        }
        if (cell.mass > 0.0) {
            if (prior.is_uniform())
                cell.mean = 0.5 * (lo.x + hi.x);
            else
                cell.mean = std::clamp(moment / cell.mass, lo.x, hi.x);
        }
        cells.push_back(cell);
    }
    return cells;
}

double evaluate_partitional(const Instance& instance, const PartitionalPolicy& policy) {
    double value = 0.0;
    for (const auto& cell : partition_cells(instance.prior, policy))
        if (cell.mass > 0.0) value += cell.mass * instance.utility(cell.mean);
    return value;
}

double segment_mass(const Prior& prior, double left, double right) {
    return interval_mass(prior, left, right, true, segment_closed_right(right));
}

double segment_mean(const Prior& prior, double left, double right) {
    return interval_mean(prior, left, right, true, segment_closed_right(right));
}

void validate_bipooling(const Prior& prior, const BiPoolingPolicy& policy, std::optional<int> signal_budget) {
    const auto& segs = policy.segments;
    if (segs.empty()) invalid("bi-pooling policy: no segments");
    if (std::abs(segs.front().left) > kBoundaryTol || std::abs(segs.back().right - 1.0) > kBoundaryTol)
        invalid("bi-pooling policy: segments must cover [0,1]");
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const auto& s = segs[i];
        if (!(s.left < s.right)) invalid("bi-pooling policy: segment with left >= right");
        if (i + 1 < segs.size() && s.right != segs[i + 1].left)
            invalid("bi-pooling policy: segments must be contiguous and ordered");
        const auto* two = s.two();
        if (!two) continue;
        std::ostringstream where;
        where.precision(17);
        where << "bi-pooling segment [" << s.left << ", " << s.right << "): ";
        if (!(s.left <= two->mu1 && two->mu1 < two->mu2 && two->mu2 <= s.right))
            invalid(where.str() + "need left <= mu1 < mu2 <= right");
        if (!(two->p1 > 0.0 && two->p1 < 1.0)) invalid(where.str() + "p1 must lie in (0,1)");
        const double mass = segment_mass(prior, s.left, s.right);
        if (!(mass > 0.0)) invalid(where.str() + "two signals on a zero-mass segment");
        const double m = segment_mean(prior, s.left, s.right);
        const double identity = two->p1 * two->mu1 + (1.0 - two->p1) * two->mu2;
        if (std::abs(identity - m) > kMeanIdentityTol) {
            std::ostringstream os;
            os.precision(17);
            os << where.str() << "mean identity violated: p1*mu1 + p2*mu2 = " << identity
               << " but segment mean is " << m;
            invalid(os.str());
        }
        const auto check = two_point_feasible(prior, s.left, s.right, two->mu1, two->mu2, kMeanIdentityTol);
        if (!check.feasible) invalid(where.str() + "posterior means are not inducible: " + check.reason);
    }
    if (signal_budget && policy.signal_count() > *signal_budget)
        invalid("bi-pooling policy: signal count exceeds the budget");
}

BiPoolingPolicy make_bipooling(const Prior& prior, std::vector<BiPoolingSegment> segments,
                               std::optional<int> signal_budget) {
    BiPoolingPolicy policy{std::move(segments)};
    validate_bipooling(prior, policy, signal_budget);
    return policy;
}

double evaluate_bipooling(const Instance& instance, const BiPoolingPolicy& policy) {
    validate_bipooling(instance.prior, policy);
    double value = 0.0;
    for (const auto& s : policy.segments) {
        const double mass = segment_mass(instance.prior, s.left, s.right);
        if (!(mass > 0.0)) continue;
        if (const auto* two = s.two()) {
            value += mass * (two->p1 * instance.utility(two->mu1) + (1.0 - two->p1) * instance.utility(two->mu2));
        } else {
            value += mass * instance.utility(segment_mean(instance.prior, s.left, s.right));
        }
    }
    return value;
}

MeanDistribution normalize_means(std::vector<MeanPoint> points) {
    std::erase_if(points, [](const MeanPoint& p) { return !(p.mass > 0.0); });
    std::sort(points.begin(), points.end(), [](const MeanPoint& a, const MeanPoint& b) { return a.mean < b.mean; });
    MeanDistribution out;
    for (const auto& p : points) {
        if (!out.points.empty() && p.mean - out.points.back().mean <= kSnapTol) {
            auto& q = out.points.back();
            const double mass = q.mass + p.mass;
            q.mean = (q.mean * q.mass + p.mean * p.mass) / mass;
            q.mass = mass;
        } else {
            out.points.push_back(p);
        }
    }
    return out;
}

MeanDistribution induced_mean_distribution(const Instance& instance, const PartitionalPolicy& policy) {
    std::vector<MeanPoint> pts;
    for (const auto& cell : partition_cells(instance.prior, policy)) pts.push_back({cell.mean, cell.mass});
    return normalize_means(std::move(pts));
}

MeanDistribution induced_mean_distribution(const Instance& instance, const BiPoolingPolicy& policy) {
    validate_bipooling(instance.prior, policy);
    std::vector<MeanPoint> pts;
    for (const auto& s : policy.segments) {
        const double mass = segment_mass(instance.prior, s.left, s.right);
        if (!(mass > 0.0)) continue;
        if (const auto* two = s.two()) {
            pts.push_back({two->mu1, two->p1 * mass});
            pts.push_back({two->mu2, (1.0 - two->p1) * mass});
        } else {
            pts.push_back({segment_mean(instance.prior, s.left, s.right), mass});
        }
    }
    return normalize_means(std::move(pts));
}

double expected_utility(const Utility& u, const MeanDistribution& g) {
    double v = 0.0;
    for (const auto& p : g.points) v += p.mass * u(p.mean);
    return v;
}

MpcReport check_mpc(const Prior& prior, const MeanDistribution& g, double tol) {
    MpcReport report;
    const double total = g.total_mass();
    report.mean_gap = g.mean() - prior.mean();
    if (std::abs(total - 1.0) > tol || std::abs(report.mean_gap) > tol) {
        report.ok = false;
        report.violation = MpcViolation::MeanPreservation;
        std::ostringstream os;
        os.precision(12);
        os << "mean preservation violated: E_G - E_F = " << report.mean_gap << ", total mass " << total;
        report.message = os.str();
        return report;
    }

    // Slack int_0^a F - int_0^a G is extremal at breakpoints of either
    // function or where F(a) equals a cumulative level of G.
    std::vector<double> pts = prior.breakpoints();
    pts.push_back(0.0);
    pts.push_back(1.0);
    double level = 0.0;
    for (const auto& p : g.points) {
        pts.push_back(std::clamp(p.mean, 0.0, 1.0));
        level += p.mass;
        if (level < 1.0) pts.push_back(prior.quantile(level));
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    report.worst_slack = 0.0;
    report.worst_at = 0.0;
    for (double a : pts) {
        double int_g = 0.0;
        for (const auto& p : g.points)
            if (a > p.mean) int_g += p.mass * (a - p.mean);
        const double slack = integrated_cdf(prior, 0.0, a) - int_g;
        if (slack < report.worst_slack) {
            report.worst_slack = slack;
            report.worst_at = a;
        }
    }
    if (report.worst_slack < -tol) {
        report.ok = false;
        report.violation = MpcViolation::Majorization;
        std::ostringstream os;
        os.precision(12);
        os << "majorization violated at a = " << report.worst_at << " with slack " << report.worst_slack;
        report.message = os.str();
    }
    return report;
}

TwoPointCheck two_point_feasible(const Prior& prior, double left, double right, double mu1, double mu2,
                                 double tol) {
    if (!(left <= mu1 && mu1 < mu2 && mu2 <= right))
        throw InvalidArgument("two_point_feasible: need left <= mu1 < mu2 <= right");
    const double mass = segment_mass(prior, left, right);
    if (!(mass > 0.0)) throw InvalidArgument("two_point_feasible: zero-mass interval");

    TwoPointCheck out;
    const double m = segment_mean(prior, left, right);
    out.p1 = (mu2 - m) / (mu2 - mu1);
    if (!(out.p1 > 0.0 && out.p1 < 1.0)) {
        std::ostringstream os;
        os.precision(12);
        os << "means do not bracket the interval mean " << m << " (p1 = " << out.p1 << ")";
        out.reason = os.str();
        out.gap = std::numeric_limits<double>::infinity();
        return out;
    }

    // The gap p1 (a - mu1) - int F_cond is concave on [mu1, mu2] and peaks
    // where the conditional CDF reaches p1.
    double a_star;
    if (prior.is_uniform())
        a_star = left + out.p1 * (right - left);
    else
        a_star = prior.quantile(prior.cdf(left, false) + out.p1 * mass);
    a_star = std::clamp(a_star, mu1, mu2);

    auto gap_at = [&](double a) {
        double g = out.p1 * std::max(0.0, a - mu1) + (1.0 - out.p1) * std::max(0.0, a - mu2);
        return g - integrated_cdf(prior, left, a, true) / mass;
    };
    out.gap = gap_at(a_star);
    out.gap_at = a_star;
    out.feasible = out.gap <= tol;
    if (!out.feasible) {
        std::ostringstream os;
        os.precision(12);
        os << "majorization gap " << out.gap << " > 0 at a = " << a_star;
        out.reason = os.str();
    }
    return out;
}

}  // namespace persuade
