#pragma once

// Reduction from Partition to optimal K-partitional persuasion, carried out
// in exact rational arithmetic.

#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "persuade/model.hpp"

namespace persuade {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Positive integers c_1..c_n; asks for signs b with sum b_i c_i = 0.
struct PartitionInput {
    std::vector<BigInt> c;
};

/// Throws InvalidArgument unless n >= 1 and every c_i >= 1.
void validate_partition_input(const PartitionInput& input);

struct ReductionArtifacts {
    PartitionInput input;
    Rational d;               // 1 / 2^(n+1)
    Rational T;               // 1 + sum c_i
    std::vector<Rational> X;  // sorted spike locations, 2n+1 of them
    int K = 2;                // n + 1 signals
    /// Uniform prior with value-1 spikes at X rounded to double. Grid solvers
    /// fed this instance cannot certify NO answers.
    Instance instance;
};

ReductionArtifacts reduce_partition(const PartitionInput& input);

/// Same spikes as X, smoothed into tents of height 1 and slope L; the
/// utility is the pointwise maximum of the tents, clipped at zero.
Instance reduction_lipschitz_instance(const ReductionArtifacts& artifacts, double L);

struct EncodedSolution {
    std::vector<Rational> cuts;  // A_0 .. A_{n-1}
    Rational last;               // A_n; equals 1 exactly for a certificate
    bool certificate = false;
};

/// A_j = d (2^(j+1) + (-1)^(j+1) / T * sum_{i<=j} b_i c_i), j = 0..n.
EncodedSolution encode_solution(const PartitionInput& input, const std::vector<int>& signs);

struct CertificateCheck {
    Rational utility;
    bool pass = false;
    std::vector<Rational> posteriors;  // interval midpoints, left to right
    std::vector<bool> hits;            // midpoint lies in X
    std::string reason;
};

/// Exact expected utility of the partition of [0,1] at `cuts` under the
/// uniform prior: every interval's posterior is its midpoint.
CertificateCheck verify_certificate(const ReductionArtifacts& artifacts, const std::vector<Rational>& cuts);

/// Reads b off a passing certificate; nullopt if the cuts do not decode.
std::optional<std::vector<int>> decode_policy(const ReductionArtifacts& artifacts,
                                              const std::vector<Rational>& cuts);

/// Exhaustive sign search through encode + verify; first passing b in
/// lexicographic order with +1 before -1.
std::optional<std::vector<int>> find_certificate(const ReductionArtifacts& artifacts, int threads = 1);

/// Subset-sum decision, independent of the reduction.
bool partition_solvable(const PartitionInput& input);

Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);

}  // namespace persuade
