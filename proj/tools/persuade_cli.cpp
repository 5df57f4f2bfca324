// persuade: command-line front end for the persuasion solvers.
//
// Exit codes: 0 success, 2 input error (flags, files, JSON), 3 solver or
// domain error.

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "persuade/analysis.hpp"
#include "persuade/conversion.hpp"
#include "persuade/hardness.hpp"
#include "persuade/io.hpp"
#include "persuade/solver_dp.hpp"
#include "persuade/solver_unrestricted.hpp"

using namespace persuade;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitSolver = 3;

// Marks failures that happen while reading inputs.
struct InputError : Error {
    using Error::Error;
};

std::string format_value(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    std::string s = os.str();
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

std::string join(const std::vector<double>& xs, int precision = 12) {
    std::ostringstream os;
    os << std::setprecision(precision);
    for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
    return os.str();
}

std::vector<std::string> split(const std::string& text, char sep = ',') {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<double> parse_numbers(const std::string& text) {
    std::vector<double> out;
    for (const auto& s : split(text)) {
        try {
            out.push_back(number_from_json(Json(s)));
        } catch (const ParseError& e) {
            throw InputError(e.what());
        }
    }
    return out;
}

int default_threads() {
    if (const char* env = std::getenv("PERSUADE_THREADS")) {
        try {
            return std::max(1, std::stoi(env));
        } catch (const std::exception&) {
        }
    }
    return 1;
}

struct InstanceSource {
    std::string file;
    std::string builtin;
    double p = 0.0;

    void attach(CLI::App* cmd) {
        auto* f = cmd->add_option("--instance", file, "instance JSON file");
        auto* b = cmd->add_option("--builtin", builtin, "example_1_1, example_2_1, tight, tight(p), reduction(c,...)");
        f->excludes(b);
        cmd->add_option("--p", p, "parameter for --builtin tight");
    }

    Instance load() const {
        try {
            if (!file.empty()) return instance_from_json(read_json_file(file));
            if (builtin.empty()) throw InputError("one of --instance or --builtin is required");
            if (builtin == "tight") return tight_instance(p);
            return builtin_instance(builtin);
        } catch (const InputError&) {
            throw;
        } catch (const Error& e) {
            throw InputError(e.what());
        }
    }
};

void emit(const std::string& out, const Json& j) {
    if (out.empty())
        std::cout << j.dump(2) << "\n";
    else
        write_text_file(out, j.dump(2) + "\n");
}

Json load_json(const std::string& path) {
    try {
        return read_json_file(path);
    } catch (const Error& e) {
        throw InputError(e.what());
    }
}

std::vector<double> boundaries(const BiPoolingPolicy& policy) {
    std::vector<double> xs;
    for (const auto& s : policy.segments)
        if (s.left > 0.0) xs.push_back(s.left);
    return xs;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian persuasion and explainable information design solver"};
    app.require_subcommand(1);
    int threads = default_threads();
    app.add_option("--threads", threads, "worker threads (default: $PERSUADE_THREADS or 1)");

    // solve
    auto* solve = app.add_subcommand("solve", "optimal K-partitional or K-signal policy on a grid");
    InstanceSource solve_src;
    solve_src.attach(solve);
    int solve_k = 2;
    double solve_eps = 0.05;
    std::string solve_mode = "partitional", solve_extra, solve_out;
    solve->add_option("--k", solve_k, "signal budget K")->required();
    solve->add_option("--epsilon", solve_eps, "uniform grid spacing");
    solve->add_option("--mode", solve_mode, "partitional or unrestricted")
        ->check(CLI::IsMember({"partitional", "unrestricted"}));
    solve->add_option("--grid-extra", solve_extra, "extra grid points, comma separated");
    solve->add_option("--out", solve_out, "write the policy JSON here instead of stdout");

    // convert
    auto* convert = app.add_subcommand("convert", "bi-pooling policy to partitional policy");
    InstanceSource conv_src;
    conv_src.attach(convert);
    std::string conv_policy, conv_out;
    convert->add_option("--policy", conv_policy, "bi-pooling policy JSON")->required();
    convert->add_option("--out", conv_out, "write policy and certificate JSON here");

    // poe
    auto* poe_cmd = app.add_subcommand("poe", "price of explainability as CSV");
    InstanceSource poe_src;
    poe_src.attach(poe_cmd);
    std::string poe_k = "2", poe_eps = "0.05", poe_out;
    int poe_q = 200;
    poe_cmd->add_option("--k", poe_k, "signal budgets, comma separated");
    poe_cmd->add_option("--epsilon", poe_eps, "grid spacings, comma separated");
    poe_cmd->add_option("--q", poe_q, "resolution of the atomic-prior oracles");
    poe_cmd->add_option("--out", poe_out, "CSV file (default stdout)");

    // reduce
    auto* reduce = app.add_subcommand("reduce", "Partition reduction artifacts");
    std::string red_c, red_out;
    double red_lipschitz = 0.0;
    reduce->add_option("--c", red_c, "positive integers, comma separated")->required();
    reduce->add_option("--lipschitz", red_lipschitz, "emit the tent-smoothed instance with this slope");
    reduce->add_option("--out", red_out, "artifacts JSON file (default stdout)");

    // verify
    auto* verify = app.add_subcommand("verify", "check a cut list against reduction artifacts");
    std::string ver_artifacts, ver_c, ver_cuts;
    auto* va = verify->add_option("--artifacts", ver_artifacts, "artifacts JSON from reduce");
    verify->add_option("--c", ver_c, "rebuild artifacts from these integers")->excludes(va);
    verify->add_option("--cuts", ver_cuts, "exact cuts, e.g. 28/224,58/224")->required();

    // eval
    auto* eval = app.add_subcommand("eval", "value and mean-preservation check of a policy");
    InstanceSource eval_src;
    eval_src.attach(eval);
    std::string eval_policy;
    eval->add_option("--policy", eval_policy, "partitional or bi-pooling policy JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        if (*solve) {
            const Instance inst = solve_src.load();
            const auto extra = parse_numbers(solve_extra);
            DpGrid grid = default_grid(inst, solve_eps);
            if (!extra.empty()) grid = grid.with(extra, kFromUser);
            const SolveOptions opts{threads};
            if (solve_mode == "partitional") {
                const auto sol = solve_partitional_dp(inst, solve_k, grid, opts);
                std::cout << "value=" << format_value(sol.value) << " cuts=" << join(sol.policy.cuts) << "\n";
                emit(solve_out, to_json(sol.policy));
            } else {
                const auto sol = solve_bipooling_dp(inst, solve_k, grid, opts);
                std::cout << "value=" << format_value(sol.value) << " cuts=" << join(boundaries(sol.policy))
                          << " signals=" << sol.policy.signal_count() << "\n";
                emit(solve_out, to_json(sol.policy));
            }
        } else if (*convert) {
            const Instance inst = conv_src.load();
            BiPoolingPolicy pi;
            try {
                pi = bipooling_from_json(load_json(conv_policy));
            } catch (const ParseError& e) {
                throw InputError(e.what());
            }
            const auto converted = convert_bipooling_to_partitional(inst, pi);
            const auto rep = conversion_certificate(inst, pi, converted);
            std::cout << "value=" << format_value(rep.u_partitional) << " cuts=" << join(converted.cuts)
                      << " ratio=" << format_value(rep.ratio) << " violation=" << (rep.violation ? "true" : "false")
                      << "\n";
            Json segs = Json::array();
            for (const auto& s : rep.segments)
                segs.push_back({{"l", s.left},
                                {"r", s.right},
                                {"signals", s.signals},
                                {"branch", s.branch},
                                {"cut", s.cut},
                                {"target_mass", s.target_mass},
                                {"kept_mass", s.kept_mass},
                                {"value_before", s.value_before},
                                {"value_after", s.value_after}});
            emit(conv_out, {{"policy", to_json(converted)},
                            {"certificate",
                             {{"u_bipooling", rep.u_bipooling},
                              {"u_partitional", rep.u_partitional},
                              {"ratio", rep.ratio},
                              {"violation", rep.violation},
                              {"segments", segs}}}});
        } else if (*poe_cmd) {
            const Instance inst = poe_src.load();
            std::vector<int> ks;
            for (const auto& s : split(poe_k)) {
                try {
                    ks.push_back(std::stoi(s));
                } catch (const std::exception&) {
                    throw InputError("--k: not an integer '" + s + "'");
                }
            }
            const auto epsilons = parse_numbers(poe_eps);
            std::ostringstream csv;
            csv << "label,K,epsilon,opt_part,opt,ratio,wall_time_ms\n" << std::setprecision(12);
            for (int k : ks) {
                for (double eps : epsilons) {
                    const auto t0 = std::chrono::steady_clock::now();
                    const auto r = poe(inst, k, default_grid(inst, eps), PoeOptions{threads, poe_q});
                    const double ms =
                        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
                    csv << inst.label << "," << k << "," << eps << "," << r.opt_part << "," << r.opt << ",";
                    if (r.ratio) csv << *r.ratio;
                    csv << "," << ms << "\n";
                }
            }
            if (poe_out.empty())
                std::cout << csv.str();
            else
                write_text_file(poe_out, csv.str());
        } else if (*reduce) {
            PartitionInput input;
            for (const auto& s : split(red_c)) {
                try {
                    input.c.emplace_back(s);
                } catch (const std::exception&) {
                    throw InputError("--c: not an integer '" + s + "'");
                }
            }
            ReductionArtifacts a;
            try {
                a = reduce_partition(input);
            } catch (const InvalidArgument& e) {
                throw InputError(e.what());
            }
            Json j = to_json(a);
            if (red_lipschitz > 0.0) j["lipschitz_instance"] = to_json(reduction_lipschitz_instance(a, red_lipschitz));
            std::cout << "K=" << a.K << " d=" << to_string(a.d) << " T=" << to_string(a.T) << " X=";
            for (std::size_t i = 0; i < j["X_numerators"].size(); ++i)
                std::cout << (i ? "," : "") << j["X_numerators"][i].get<std::string>();
            std::cout << " /" << j["common_denominator"].get<std::string>() << "\n";
            emit(red_out, j);
        } else if (*verify) {
            ReductionArtifacts a;
            try {
                if (!ver_artifacts.empty()) {
                    a = artifacts_from_json(load_json(ver_artifacts));
                } else {
                    PartitionInput input;
                    for (const auto& s : split(ver_c)) input.c.emplace_back(s);
                    a = reduce_partition(input);
                }
            } catch (const InputError&) {
                throw;
            } catch (const std::exception& e) {
                throw InputError(e.what());
            }
            std::vector<Rational> cuts;
            for (const auto& s : split(ver_cuts)) {
                try {
                    cuts.push_back(parse_rational(s));
                } catch (const InvalidArgument& e) {
                    throw InputError(e.what());
                }
            }
            const auto check = verify_certificate(a, cuts);
            const Rational& u = check.utility;
            std::cout << "result=" << (check.pass ? "pass" : "fail") << " utility="
                      << boost::multiprecision::numerator(u) << "/" << boost::multiprecision::denominator(u) << "\n";
            Rational left = 0;
            for (std::size_t i = 0; i < check.posteriors.size(); ++i) {
                const Rational right = i < cuts.size() ? cuts[i] : Rational(1);
                std::cout << "interval [" << to_string(left) << ", " << to_string(right)
                          << "] posterior=" << to_string(check.posteriors[i])
                          << " in_X=" << (check.hits[i] ? "yes" : "no") << "\n";
                left = right;
            }
            if (check.pass) {
                if (const auto b = decode_policy(a, cuts)) {
                    std::cout << "signs=";
                    for (std::size_t i = 0; i < b->size(); ++i) std::cout << (i ? "," : "") << ((*b)[i] > 0 ? "+1" : "-1");
                    std::cout << "\n";
                }
            } else if (!check.reason.empty()) {
                std::cout << "reason=" << check.reason << "\n";
            }
        } else if (*eval) {
            const Instance inst = eval_src.load();
            Json pj = load_json(eval_policy);
            if (pj.contains("policy")) pj = pj["policy"];  // output of convert
            double value = 0.0;
            MeanDistribution g;
            try {
                if (pj.contains("cuts")) {
                    const auto pol = partitional_from_json(pj);
                    value = evaluate_partitional(inst, pol);
                    g = induced_mean_distribution(inst, pol);
                } else {
                    const auto pol = bipooling_from_json(pj);
                    value = evaluate_bipooling(inst, pol);
                    g = induced_mean_distribution(inst, pol);
                }
            } catch (const ParseError& e) {
                throw InputError(e.what());
            }
            const auto mpc = check_mpc(inst.prior, g);
            std::cout << "value=" << format_value(value) << " mpc=" << (mpc.ok ? "ok" : "violated") << "\n";
            for (const auto& p : g.points)
                std::cout << std::setprecision(12) << "posterior=" << p.mean << " mass=" << p.mass << "\n";
            if (!mpc.ok) std::cout << "mpc_message=" << mpc.message << "\n";
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
    return 0;
}
