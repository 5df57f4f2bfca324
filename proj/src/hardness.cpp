#include "persuade/hardness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>

#include "parallel.hpp"

namespace persuade {

namespace {

Rational pow2(std::size_t e) {
    BigInt v = 1;
    v <<= static_cast<unsigned>(e);
    return Rational(v);
}

BigInt total(const PartitionInput& input) {
    BigInt s = 0;
    for (const auto& x : input.c) s += x;
    return s;
}

}  // namespace

void validate_partition_input(const PartitionInput& input) {
    if (input.c.empty()) throw InvalidArgument("partition input: need at least one integer");
    for (const auto& x : input.c)
        if (x < 1) throw InvalidArgument("partition input: every c_i must be a positive integer");
}

ReductionArtifacts reduce_partition(const PartitionInput& input) {
    validate_partition_input(input);
    const std::size_t n = input.c.size();
    ReductionArtifacts a;
    a.input = input;
    a.d = Rational(1) / pow2(n + 1);
    a.T = Rational(1 + total(input));
    a.K = static_cast<int>(n) + 1;
    a.X.push_back(a.d);
    for (std::size_t j = 1; j <= n; ++j) {
        const Rational centre = 3 * pow2(j - 1);
        const Rational offset = Rational(input.c[j - 1]) / (2 * a.T);
        a.X.push_back(a.d * (centre - offset));
        a.X.push_back(a.d * (centre + offset));
    }
    std::sort(a.X.begin(), a.X.end());
    std::vector<double> locations;
    for (const auto& x : a.X) locations.push_back(static_cast<double>(x));
    std::string label = "reduction(";
    for (std::size_t i = 0; i < n; ++i) label += (i ? "," : "") + input.c[i].str();
    a.instance = Instance{Prior::uniform(), Utility::spikes_at(locations), label + ")"};
    return a;
}

Instance reduction_lipschitz_instance(const ReductionArtifacts& artifacts, double L) {
    if (!(L > 0.0)) throw InvalidArgument("reduction_lipschitz_instance: slope must be positive");
    std::vector<double> xs;
    for (const auto& x : artifacts.X) xs.push_back(static_cast<double>(x));
    const double reach = 1.0 / L;
    auto envelope = [&](double t) {
        double v = 0.0;
        for (double x : xs) v = std::max(v, 1.0 - L * std::abs(t - x));
        return v;
    };
    // The envelope of equal tents only bends at tent peaks, feet, and the
    // crossing points between neighbours.
    std::set<double> knots{0.0, 1.0};
    for (std::size_t i = 0; i < xs.size(); ++i) {
        knots.insert(xs[i]);
        knots.insert(xs[i] - reach);
        knots.insert(xs[i] + reach);
        if (i + 1 < xs.size()) knots.insert(0.5 * (xs[i] + xs[i + 1]));
    }
    std::vector<double> pts;
    for (double k : knots)
        if (k >= 0.0 && k <= 1.0) pts.push_back(k);
    std::vector<BaseSegment> base;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        base.push_back({pts[i], pts[i + 1], envelope(pts[i]), envelope(pts[i + 1])});
    return Instance{Prior::uniform(), Utility(std::move(base), {}, L, 1.0), artifacts.instance.label + "-lipschitz"};
}

EncodedSolution encode_solution(const PartitionInput& input, const std::vector<int>& signs) {
    validate_partition_input(input);
    const std::size_t n = input.c.size();
    if (signs.size() != n) throw InvalidArgument("encode_solution: need one sign per integer");
    const Rational d = Rational(1) / pow2(n + 1);
    const Rational T(1 + total(input));
    EncodedSolution out;
    Rational partial = 0;
    for (std::size_t j = 0; j <= n; ++j) {
        if (j > 0) {
            if (signs[j - 1] != 1 && signs[j - 1] != -1) throw InvalidArgument("encode_solution: signs must be +1 or -1");
            partial += signs[j - 1] * Rational(input.c[j - 1]);
        }
        const int parity = (j + 1) % 2 == 0 ? 1 : -1;
        const Rational a = d * (pow2(j + 1) + parity * partial / T);
        if (j < n)
            out.cuts.push_back(a);
        else
            out.last = a;
    }
    out.certificate = out.last == 1;
    return out;
}

CertificateCheck verify_certificate(const ReductionArtifacts& artifacts, const std::vector<Rational>& cuts) {
    CertificateCheck out;
    out.utility = 0;
    if (static_cast<int>(cuts.size()) > artifacts.K - 1) {
        out.reason = "more cuts than the signal budget allows";
        return out;
    }
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        if (cuts[i] < 0 || cuts[i] > 1 || (i > 0 && cuts[i] < cuts[i - 1])) {
            out.reason = "cuts must be sorted within [0,1]";
            return out;
        }
    }
    Rational a = 0;
    for (std::size_t i = 0; i <= cuts.size(); ++i) {
        const Rational b = i < cuts.size() ? cuts[i] : Rational(1);
        const Rational mid = (a + b) / 2;
        const bool hit = std::binary_search(artifacts.X.begin(), artifacts.X.end(), mid);
        out.posteriors.push_back(mid);
        out.hits.push_back(hit);
        if (hit) out.utility += b - a;
        a = b;
    }
    out.pass = out.utility == 1;
    if (!out.pass) out.reason = "some interval posterior misses every spike";
    return out;
}

std::optional<std::vector<int>> decode_policy(const ReductionArtifacts& artifacts, const std::vector<Rational>& cuts) {
    const std::size_t n = artifacts.input.c.size();
    if (cuts.size() != n || !verify_certificate(artifacts, cuts).pass) return std::nullopt;
    const auto mids = verify_certificate(artifacts, cuts).posteriors;
    if (mids[0] != artifacts.d) return std::nullopt;
    std::vector<int> b(n);
    for (std::size_t j = 1; j <= n; ++j) {
        const Rational centre = artifacts.d * 3 * pow2(j - 1);
        const Rational offset = artifacts.d * Rational(artifacts.input.c[j - 1]) / (2 * artifacts.T);
        int s = 0;
        if (mids[j] == centre + offset)
            s = 1;
        else if (mids[j] == centre - offset)
            s = -1;
        else
            return std::nullopt;
        const int parity = (j + 1) % 2 == 0 ? 1 : -1;
        b[j - 1] = s * parity;
    }
    return b;
}

std::optional<std::vector<int>> find_certificate(const ReductionArtifacts& artifacts, int threads) {
    const std::size_t n = artifacts.input.c.size();
    if (n > 30) throw InvalidArgument("find_certificate: at most 30 integers");
    const std::size_t count = std::size_t{1} << n;
    auto signs_of = [n](std::size_t mask) {
        std::vector<int> b(n);
        for (std::size_t i = 0; i < n; ++i) b[i] = (mask >> (n - 1 - i)) & 1u ? -1 : 1;
        return b;
    };
    std::atomic<std::size_t> first{count};
    detail::parallel_for(0, count, threads, [&](std::size_t mask) {
        if (mask >= first.load()) return;
        const auto enc = encode_solution(artifacts.input, signs_of(mask));
        auto cuts = enc.cuts;
        if (!verify_certificate(artifacts, cuts).pass) return;
        std::size_t cur = first.load();
        while (mask < cur && !first.compare_exchange_weak(cur, mask)) {
        }
    });
    if (first.load() == count) return std::nullopt;
    // The cuts omit the right endpoint, so the last sign is whatever the
    // final interval's midpoint says; read it back through the decoder.
    return decode_policy(artifacts, encode_solution(artifacts.input, signs_of(first.load())).cuts);
}

bool partition_solvable(const PartitionInput& input) {
    validate_partition_input(input);
    const BigInt sum = total(input);
    if (sum % 2 != 0) return false;
    if (sum > 10'000'000) throw InvalidArgument("partition_solvable: total too large for the subset-sum table");
    const auto half = static_cast<std::size_t>(sum / 2);
    std::vector<char> reach(half + 1, 0);
    reach[0] = 1;
    for (const auto& x : input.c) {
        const auto v = static_cast<std::size_t>(x);
        for (std::size_t s = half + 1; s-- > v;)
            if (reach[s - v]) reach[s] = 1;
    }
    return reach[half] != 0;
}

Rational parse_rational(const std::string& text) {
    try {
        return Rational(text);
    } catch (const std::exception&) {
        throw InvalidArgument("not an exact fraction: '" + text + "'");
    }
}

std::string to_string(const Rational& r) { return r.str(); }

}  // namespace persuade
