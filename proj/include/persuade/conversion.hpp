#pragma once

// Turning a bi-pooling policy into a partitional one that keeps at least
// half of its value.

#include <vector>

#include "persuade/model.hpp"
#include "persuade/policy.hpp"

namespace persuade {

struct ConversionFailure : Error {
    using Error::Error;
};

/// Each two-signal segment [b, b') keeps its more valuable posterior: the
/// left one (ties included) becomes the interval [b, c) with mean mu1, the
/// right one becomes [c, b') with mean mu2. One-signal segments are copied.
/// Throws ConversionFailure if a split point cannot be located within tol.
PartitionalPolicy convert_bipooling_to_partitional(const Instance& instance, const BiPoolingPolicy& policy,
                                                   double tol = kRootTol);

struct SegmentCertificate {
    double left = 0.0;
    double right = 0.0;
    int signals = 1;
    int branch = 0;            // 0 for one-signal segments, else the kept posterior (1 or 2)
    double cut = 0.0;          // split point inside a two-signal segment
    double target_mass = 0.0;  // p_kept * segment mass
    double kept_mass = 0.0;    // mass of the interval carrying the kept posterior
    double value_before = 0.0;
    double value_after = 0.0;
};

struct ConversionReport {
    double u_bipooling = 0.0;
    double u_partitional = 0.0;
    double ratio = 1.0;  // 1 when the bi-pooling value is zero
    bool violation = false;
    std::vector<SegmentCertificate> segments;
};

inline constexpr double kHalfGuaranteeTol = 1e-9;

ConversionReport conversion_certificate(const Instance& instance, const BiPoolingPolicy& policy,
                                        const PartitionalPolicy& converted);

}  // namespace persuade
