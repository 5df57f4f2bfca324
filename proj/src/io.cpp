#include "persuade/io.hpp"

#include <fstream>
#include <sstream>

namespace persuade {

namespace {

[[noreturn]] void fail(const std::string& what) { throw ParseError(what); }

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) fail(std::string("missing field '") + key + "'");
    return j.at(key);
}

const Json& array_field(const Json& j, const char* key) {
    const Json& v = field(j, key);
    if (!v.is_array()) fail(std::string("field '") + key + "' must be an array");
    return v;
}

// Row of a fixed-width numeric table such as [l, r, c0, c1].
std::vector<double> row(const Json& j, std::size_t width, const char* what) {
    if (!j.is_array() || j.size() != width)
        fail(std::string(what) + ": expected an array of " + std::to_string(width) + " numbers");
    std::vector<double> out;
    for (const auto& v : j) out.push_back(number_from_json(v));
    return out;
}

}  // namespace

double number_from_json(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (!j.is_string()) fail("expected a number, got " + j.dump());
    const auto s = j.get<std::string>();
    if (s.find('/') != std::string::npos) {
        try {
            return static_cast<double>(parse_rational(s));
        } catch (const Error&) {
            fail("malformed fraction '" + s + "'");
        }
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) fail("malformed number '" + s + "'");
    return v;
}

Json to_json(const Instance& instance) {
    Json prior;
    if (instance.prior.is_uniform()) {
        prior = {{"kind", "uniform"}};
    } else {
        Json segs = Json::array(), atoms = Json::array();
        for (const auto& s : instance.prior.segments()) segs.push_back({s.left, s.right, s.c0, s.c1});
        for (const auto& a : instance.prior.atoms()) atoms.push_back({a.location, a.mass});
        prior = {{"kind", "piecewise_density"}, {"segments", segs}, {"atoms", atoms}};
    }
    const Utility& u = instance.utility;
    Json base = Json::array(), spikes = Json::array();
    for (const auto& s : u.base()) base.push_back({s.left, s.right, s.value_left, s.value_right});
    for (const auto& s : u.spikes()) spikes.push_back({s.location, s.value});
    Json utility = {{"base", base}, {"spikes", spikes}, {"ubound", u.upper_bound()}};
    utility["lipschitz"] = u.lipschitz() ? Json(*u.lipschitz()) : Json(nullptr);
    return {{"prior", prior}, {"utility", utility}, {"label", instance.label}};
}

Instance instance_from_json(const Json& j) {
    const Json& p = field(j, "prior");
    const Json& kind = field(p, "kind");
    if (!kind.is_string()) fail("prior.kind must be a string");
    std::optional<Prior> prior;
    try {
        if (kind == "uniform") {
            prior = Prior::uniform();
        } else if (kind == "piecewise_density") {
            std::vector<DensitySegment> segs;
            std::vector<Atom> atoms;
            for (const auto& r : array_field(p, "segments")) {
                const auto v = row(r, 4, "density segment");
                segs.push_back({v[0], v[1], v[2], v[3]});
            }
            if (p.contains("atoms"))
                for (const auto& r : array_field(p, "atoms")) {
                    const auto v = row(r, 2, "atom");
                    atoms.push_back({v[0], v[1]});
                }
            if (segs.empty()) segs.push_back({0.0, 1.0, 0.0, 0.0});
            prior = Prior(std::move(segs), std::move(atoms));
        } else {
            fail("unknown prior kind " + kind.dump());
        }
    } catch (const InvalidArgument& e) {
        fail(e.what());
    }

    const Json& uj = field(j, "utility");
    std::vector<BaseSegment> base;
    std::vector<Spike> spikes;
    for (const auto& r : array_field(uj, "base")) {
        const auto v = row(r, 4, "base segment");
        base.push_back({v[0], v[1], v[2], v[3]});
    }
    if (uj.contains("spikes"))
        for (const auto& r : array_field(uj, "spikes")) {
            const auto v = row(r, 2, "spike");
            spikes.push_back({v[0], v[1]});
        }
    std::optional<double> lipschitz;
    if (uj.contains("lipschitz") && !uj.at("lipschitz").is_null()) lipschitz = number_from_json(uj.at("lipschitz"));
    double ubound = 1.0;
    if (uj.contains("ubound")) ubound = number_from_json(uj.at("ubound"));
    std::string label;
    if (j.contains("label")) {
        if (!j.at("label").is_string()) fail("label must be a string");
        label = j.at("label").get<std::string>();
    }
    try {
        return Instance{std::move(*prior), Utility(std::move(base), std::move(spikes), lipschitz, ubound), label};
    } catch (const InvalidArgument& e) {
        fail(e.what());
    }
}

Json to_json(const PartitionalPolicy& policy) {
    Json splits = Json::array();
    for (const auto& s : policy.atom_splits) splits.push_back({s.location, s.fraction_to_left});
    return {{"cuts", policy.cuts}, {"atom_splits", splits}};
}

PartitionalPolicy partitional_from_json(const Json& j) {
    PartitionalPolicy out;
    for (const auto& c : array_field(j, "cuts")) out.cuts.push_back(number_from_json(c));
    if (j.contains("atom_splits"))
        for (const auto& r : array_field(j, "atom_splits")) {
            const auto v = row(r, 2, "atom split");
            out.atom_splits.push_back({v[0], v[1]});
        }
    return out;
}

Json to_json(const BiPoolingPolicy& policy) {
    Json segs = Json::array();
    for (const auto& s : policy.segments) {
        if (const TwoSignal* t = s.two())
            segs.push_back({{"l", s.left}, {"r", s.right}, {"mu1", t->mu1}, {"mu2", t->mu2}, {"p1", t->p1}});
        else
            segs.push_back({{"l", s.left}, {"r", s.right}, {"one", true}});
    }
    return {{"segments", segs}};
}

BiPoolingPolicy bipooling_from_json(const Json& j) {
    BiPoolingPolicy out;
    for (const auto& s : array_field(j, "segments")) {
        BiPoolingSegment seg{number_from_json(field(s, "l")), number_from_json(field(s, "r")), OneSignal{}};
        if (s.contains("mu1") || s.contains("mu2")) {
            seg.mode = TwoSignal{number_from_json(field(s, "mu1")), number_from_json(field(s, "mu2")),
                                 number_from_json(field(s, "p1"))};
        } else if (!s.contains("one")) {
            fail("bi-pooling segment needs either \"one\" or mu1/mu2/p1");
        }
        out.segments.push_back(seg);
    }
    return out;
}

Json to_json(const ReductionArtifacts& a) {
    Json c = Json::array(), X = Json::array(), scaled = Json::array();
    for (const auto& v : a.input.c) c.push_back(v.str());
    // Common denominator 2^(n+1) * 2T.
    const Rational common = 2 * a.T / a.d;
    for (const auto& x : a.X) {
        X.push_back(to_string(x));
        scaled.push_back(to_string(x * common));
    }
    return {{"c", c},
            {"d", to_string(a.d)},
            {"T", to_string(a.T)},
            {"K", a.K},
            {"X", X},
            {"common_denominator", to_string(common)},
            {"X_numerators", scaled},
            {"instance", to_json(a.instance)}};
}

ReductionArtifacts artifacts_from_json(const Json& j) {
    PartitionInput input;
    for (const auto& v : array_field(j, "c")) {
        try {
            if (v.is_number_integer())
                input.c.emplace_back(v.get<long long>());
            else if (v.is_string())
                input.c.emplace_back(v.get<std::string>());
            else
                fail("c entries must be integers");
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            fail("c entries must be integers");
        }
    }
    ReductionArtifacts a;
    try {
        a = reduce_partition(input);
    } catch (const InvalidArgument& e) {
        fail(e.what());
    }
    if (j.contains("X")) {
        std::vector<Rational> stored;
        for (const auto& x : array_field(j, "X")) {
            if (!x.is_string()) fail("X entries must be exact fraction strings");
            try {
                stored.push_back(parse_rational(x.get<std::string>()));
            } catch (const InvalidArgument& e) {
                fail(e.what());
            }
        }
        if (stored != a.X) fail("stored X does not match the reduction of c");
    }
    return a;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        fail("'" + path + "': " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << text;
    if (!out) throw ParseError("write failed for '" + path + "'");
}

}  // namespace persuade
