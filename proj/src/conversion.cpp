#include "persuade/conversion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace persuade {

namespace {

// Algorithm branch: keep mu1 when p1 u(mu1) >= p2 u(mu2).
bool keeps_left(const Utility& u, const TwoSignal& t) {
    return t.p1 * u(t.mu1) >= (1.0 - t.p1) * u(t.mu2);
}

double split_point(const Instance& instance, const BiPoolingSegment& s, const TwoSignal& t, double tol) {
    const bool left = keeps_left(instance.utility, t);
    double c = 0.0;
    try {
        c = left ? solve_right_endpoint(instance.prior, s.left, t.mu1, tol)
                 : solve_left_endpoint(instance.prior, s.right, t.mu2, tol);
    } catch (const InfeasibleTarget& e) {
        std::ostringstream os;
        os << "conversion: no split point in [" << s.left << ", " << s.right << ") for posterior "
           << (left ? t.mu1 : t.mu2) << ": " << e.what();
        throw ConversionFailure(os.str());
    }
    if (!(c > s.left && c < s.right)) {
        std::ostringstream os;
        os << "conversion: split point " << c << " falls outside (" << s.left << ", " << s.right << ")";
        throw ConversionFailure(os.str());
    }
    return c;
}

}  // namespace

PartitionalPolicy convert_bipooling_to_partitional(const Instance& instance, const BiPoolingPolicy& policy,
                                                   double tol) {
    validate_bipooling(instance.prior, policy);
    PartitionalPolicy out;
    for (const auto& s : policy.segments) {
        if (s.left > 0.0) out.cuts.push_back(s.left);
        if (const TwoSignal* t = s.two()) out.cuts.push_back(split_point(instance, s, *t, tol));
    }
    validate_partitional(instance.prior, out);
    return out;
}

ConversionReport conversion_certificate(const Instance& instance, const BiPoolingPolicy& policy,
                                        const PartitionalPolicy& converted) {
    const Prior& prior = instance.prior;
    const Utility& u = instance.utility;
    ConversionReport report;
    report.u_bipooling = evaluate_bipooling(instance, policy);
    report.u_partitional = evaluate_partitional(instance, converted);
    report.ratio = report.u_bipooling > 0.0 ? report.u_partitional / report.u_bipooling : 1.0;
    report.violation = report.u_partitional < 0.5 * report.u_bipooling - kHalfGuaranteeTol;

    auto piece_value = [&](double a, double b) {
        const double mass = segment_mass(prior, a, b);
        return mass > 0.0 ? mass * u(segment_mean(prior, a, b)) : 0.0;
    };

    for (const auto& s : policy.segments) {
        SegmentCertificate c;
        c.left = s.left;
        c.right = s.right;
        c.signals = s.signal_count();
        const double mass = segment_mass(prior, s.left, s.right);
        std::vector<double> inner;
        for (double x : converted.cuts)
            if (x > s.left && x < s.right) inner.push_back(x);

        if (const TwoSignal* t = s.two()) {
            c.value_before = mass * (t->p1 * u(t->mu1) + (1.0 - t->p1) * u(t->mu2));
            const bool left = keeps_left(u, *t);
            c.branch = left ? 1 : 2;
            if (!inner.empty()) {
                c.cut = left ? inner.front() : inner.back();
                c.kept_mass = left ? segment_mass(prior, s.left, c.cut) : segment_mass(prior, c.cut, s.right);
            }
            c.target_mass = (left ? t->p1 : 1.0 - t->p1) * mass;
        } else {
            c.value_before = piece_value(s.left, s.right);
            c.kept_mass = c.target_mass = mass;
        }
        double a = s.left;
        for (double x : inner) {
            c.value_after += piece_value(a, x);
            a = x;
        }
        c.value_after += piece_value(a, s.right);
        report.segments.push_back(c);
    }
    return report;
}

}  // namespace persuade
