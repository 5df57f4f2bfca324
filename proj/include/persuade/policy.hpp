#pragma once

// Partitional and bi-pooling signaling policies, the distribution of
// posterior means they induce, and mean-preserving-contraction checks.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "persuade/model.hpp"

namespace persuade {

inline constexpr double kMeanIdentityTol = 1e-9;

struct InvalidPolicy : Error {
    using Error::Error;
};

/// Fraction of the atom at `location` sent to the interval that ends at the
/// matching cut. Cuts without a split send the atom to the right interval.
struct AtomSplit {
    double location = 0.0;
    double fraction_to_left = 0.0;
    bool operator==(const AtomSplit&) const = default;
};

/// Sorted cuts a_1 <= ... <= a_{K-1} in [0,1]; the endpoints 0 and 1 are
/// implicit. Intervals are left-closed, the last one closed on both sides.
struct PartitionalPolicy {
    std::vector<double> cuts;
    std::vector<AtomSplit> atom_splits;

    std::size_t interval_count() const { return cuts.size() + 1; }
    bool operator==(const PartitionalPolicy&) const = default;
};

struct OneSignal {
    bool operator==(const OneSignal&) const = default;
};

struct TwoSignal {
    double mu1 = 0.0;
    double mu2 = 0.0;
    double p1 = 0.5;  // conditional probability of the mu1 signal
    bool operator==(const TwoSignal&) const = default;
};

struct BiPoolingSegment {
    double left = 0.0;
    double right = 1.0;
    std::variant<OneSignal, TwoSignal> mode;

    int signal_count() const { return std::holds_alternative<TwoSignal>(mode) ? 2 : 1; }
    const TwoSignal* two() const { return std::get_if<TwoSignal>(&mode); }
    bool operator==(const BiPoolingSegment&) const = default;
};

/// Segment [left, right) of a policy; the segment ending at 1 is closed.
inline bool segment_closed_right(double right) { return right >= 1.0; }

/// Contiguous bi-pooling segments covering [0,1]. Construct through
/// make_bipooling() to validate against a prior.
struct BiPoolingPolicy {
    std::vector<BiPoolingSegment> segments;

    int signal_count() const;
    bool operator==(const BiPoolingPolicy&) const = default;
};

struct MeanPoint {
    double mean = 0.0;
    double mass = 0.0;
};

/// Finite-support distribution of posterior means, sorted by mean.
struct MeanDistribution {
    std::vector<MeanPoint> points;

    double total_mass() const;
    double mean() const;
};

struct TwoPointCheck {
    bool feasible = false;
    double p1 = 0.0;
    double gap = 0.0;        // max of integrated G minus integrated F; <= 0 when feasible
    double gap_at = 0.0;
    std::string reason;
};

enum class MpcViolation { None, MeanPreservation, Majorization };

struct MpcReport {
    bool ok = true;
    MpcViolation violation = MpcViolation::None;
    double mean_gap = 0.0;      // E_G - E_F
    double worst_slack = 0.0;   // min over a of (int F - int G)
    double worst_at = 0.0;
    std::string message;
};

/// Throws InvalidPolicy on malformed cuts or splits.
void validate_partitional(const Prior& prior, const PartitionalPolicy& policy);

/// Validates segments (coverage, ordering, mean identity within
/// kMeanIdentityTol, two-point feasibility) and returns the policy.
BiPoolingPolicy make_bipooling(const Prior& prior, std::vector<BiPoolingSegment> segments,
                               std::optional<int> signal_budget = std::nullopt);
void validate_bipooling(const Prior& prior, const BiPoolingPolicy& policy,
                        std::optional<int> signal_budget = std::nullopt);

/// One interval of a partitional policy after atom apportioning.
struct PolicyCell {
    double left = 0.0;
    double right = 0.0;
    double mass = 0.0;
    double mean = 0.0;  // conditional mean; meaningless when mass == 0
};

/// Mass and conditional mean of every interval, in order (zero-mass cells kept).
std::vector<PolicyCell> partition_cells(const Prior& prior, const PartitionalPolicy& policy);

double evaluate_partitional(const Instance& instance, const PartitionalPolicy& policy);
double evaluate_bipooling(const Instance& instance, const BiPoolingPolicy& policy);

/// Mass of [left, right) under the segment convention, and its mean.
double segment_mass(const Prior& prior, double left, double right);
double segment_mean(const Prior& prior, double left, double right);

MeanDistribution induced_mean_distribution(const Instance& instance, const PartitionalPolicy& policy);
MeanDistribution induced_mean_distribution(const Instance& instance, const BiPoolingPolicy& policy);

/// Sorts and merges points whose means agree within kSnapTol.
MeanDistribution normalize_means(std::vector<MeanPoint> points);

double expected_utility(const Utility& u, const MeanDistribution& g);

MpcReport check_mpc(const Prior& prior, const MeanDistribution& g, double tol = 1e-9);

TwoPointCheck two_point_feasible(const Prior& prior, double left, double right, double mu1, double mu2,
                                 double tol = 1e-12);

}  // namespace persuade
