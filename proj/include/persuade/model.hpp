#pragma once

// Priors on [0,1], interim utilities over posterior means, and the interval
// statistics every solver is built on.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace persuade {

/// Posterior means within this distance of a spike (or a utility breakpoint)
/// evaluate as if they hit it exactly.
inline constexpr double kSnapTol = 1e-9;
inline constexpr double kRootTol = 1e-10;
inline constexpr int kRootMaxIter = 200;
inline constexpr double kMassTol = 1e-12;

static_assert(kSnapTol > kRootTol, "root solutions must land inside the snap window");

// Error hierarchy. InvalidArgument covers rejected inputs and budgets; the
// remaining types are numerical/domain failures raised by the solvers.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidArgument : Error {
    using Error::Error;
};
struct DegenerateInterval : Error {
    using Error::Error;
};
struct InfeasibleTarget : Error {
    using Error::Error;
};

/// Affine density c0 + c1 * theta on [left, right] (absolute coordinates).
struct DensitySegment {
    double left = 0.0;
    double right = 1.0;
    double c0 = 1.0;
    double c1 = 0.0;

    double density(double theta) const { return c0 + c1 * theta; }
    bool operator==(const DensitySegment&) const = default;
};

struct Atom {
    double location = 0.0;
    double mass = 0.0;
    bool operator==(const Atom&) const = default;
};

/// Probability measure on [0,1]: piecewise-affine density plus point masses.
class Prior {
public:
    Prior(std::vector<DensitySegment> segments, std::vector<Atom> atoms);

    static Prior uniform();
    /// Purely discrete prior; the density is identically zero.
    static Prior atomic(std::vector<Atom> atoms);

    const std::vector<DensitySegment>& segments() const { return segments_; }
    const std::vector<Atom>& atoms() const { return atoms_; }

    bool is_uniform() const { return uniform_; }
    bool has_atoms() const { return !atoms_.empty(); }
    bool is_purely_atomic() const { return continuous_total_ == 0.0; }

    double density(double theta) const;
    /// Upper bound on the density (f-bar).
    double density_bound() const;
    double mean() const;

    /// Continuous part only: integral of the density (resp. theta * density)
    /// over [0, x].
    double continuous_mass_upto(double x) const;
    double continuous_moment_upto(double x) const;

    /// F([0,x]) when inclusive, else F([0,x)).
    double cdf(double x, bool inclusive = true) const;
    /// Integral of theta dF over [0,x] (inclusive) or [0,x).
    double moment(double x, bool inclusive = true) const;

    /// Smallest x with F([0,x]) >= level.
    double quantile(double level) const;

    /// Breakpoints of the distribution: segment ends and atom locations.
    std::vector<double> breakpoints() const;

    bool operator==(const Prior& other) const {
        return segments_ == other.segments_ && atoms_ == other.atoms_;
    }

private:
    std::size_t segment_index(double x) const;

    std::vector<DensitySegment> segments_;
    std::vector<Atom> atoms_;
    std::vector<double> seg_mass_prefix_;    // continuous mass before segment i
    std::vector<double> seg_moment_prefix_;
    std::vector<double> atom_mass_prefix_;   // atom mass before atom i
    std::vector<double> atom_moment_prefix_;
    double continuous_total_ = 0.0;
    bool uniform_ = false;
};

/// Linear piece of the base utility on [left, right].
struct BaseSegment {
    double left = 0.0;
    double right = 1.0;
    double value_left = 0.0;
    double value_right = 0.0;

    double slope() const {
        return right > left ? (value_right - value_left) / (right - left) : 0.0;
    }
    double at(double mu) const;
    bool operator==(const BaseSegment&) const = default;
};

struct Spike {
    double location = 0.0;
    double value = 0.0;
    bool operator==(const Spike&) const = default;
};

/// Interim utility u(mu): piecewise-linear base plus point spikes.
///
/// Evaluation is upper semi-continuous at base breakpoints: a mean within
/// kSnapTol of a breakpoint takes the larger adjacent value. A mean within
/// kSnapTol of a spike takes the spike value.
class Utility {
public:
    Utility(std::vector<BaseSegment> base, std::vector<Spike> spikes,
            std::optional<double> lipschitz, double upper_bound);

    static Utility constant(double value);
    /// u(mu) = mu.
    static Utility identity();
    /// Spike-only utility: zero base, value 1 at each location.
    static Utility spikes_at(const std::vector<double>& locations);

    double operator()(double mu) const;
    double base_value(double mu) const;

    const std::vector<BaseSegment>& base() const { return base_; }
    const std::vector<Spike>& spikes() const { return spikes_; }
    const std::optional<double>& lipschitz() const { return lipschitz_; }
    double upper_bound() const { return upper_bound_; }

    bool is_piecewise_constant() const;
    /// Sorted, deduplicated interior and end breakpoints of the base.
    std::vector<double> breakpoints() const;

    bool operator==(const Utility&) const = default;

private:
    std::vector<BaseSegment> base_;
    std::vector<Spike> spikes_;  // sorted by location
    std::optional<double> lipschitz_;
    double upper_bound_ = 1.0;
};

struct Instance {
    Prior prior = Prior::uniform();
    Utility utility = Utility::constant(0.0);
    std::string label;

    bool operator==(const Instance&) const = default;
};

// Interval statistics. Closedness flags decide whether atoms sitting on the
// endpoints are counted.

double interval_mass(const Prior& prior, double a, double b,
                     bool closed_left = true, bool closed_right = true);
double interval_moment(const Prior& prior, double a, double b,
                       bool closed_left = true, bool closed_right = true);
/// E[theta | theta in the interval]. Throws DegenerateInterval on zero mass.
double interval_mean(const Prior& prior, double a, double b,
                     bool closed_left = true, bool closed_right = true);

/// Integral over [a, x] of F((a, t] restricted to the interval) dt, i.e. the
/// integrated (unnormalized) CDF of the prior restricted to the interval.
double integrated_cdf(const Prior& prior, double a, double x, bool closed_left = true);

/// c in (b, 1] with E[theta | theta in [b, c)] = target_mean, within tol.
double solve_right_endpoint(const Prior& prior, double b, double target_mean,
                            double tol = kRootTol);
/// c in [0, b_right) with E[theta | theta in [c, b_right)] = target_mean.
double solve_left_endpoint(const Prior& prior, double b_right, double target_mean,
                           double tol = kRootTol);

inline double utility_eval(const Utility& u, double mu) { return u(mu); }

}  // namespace persuade
