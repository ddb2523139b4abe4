#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qlin/io.hpp"
#include "qlin/linearize.hpp"
#include "qlin/rng.hpp"
#include "qlin/solver.hpp"
#include "qlin/threading.hpp"

namespace {

using namespace qlin;

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitInputError = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open input file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open output file: " + path);
    out << text;
}

BnbOptions options_from_env() {
    BnbOptions opts;
    if (const char* limit = std::getenv("QLIN_NODE_LIMIT")) {
        try {
            opts.node_limit = std::stoll(limit);
        } catch (const std::exception&) {
            throw InputError(std::string("QLIN_NODE_LIMIT: not an integer: ") + limit);
        }
        if (opts.node_limit < 1) throw InputError("QLIN_NODE_LIMIT: must be positive");
    }
    return opts;
}

// threading instances are reduced to their QP before linearizing/solving
ZeroOneQP to_qp(const Instance& instance) {
    if (std::holds_alternative<ZeroOneQP>(instance)) return std::get<ZeroOneQP>(instance);
    return build_qp(std::get<ThreadingInstance>(instance)).qp;
}

void print_assignment(const std::vector<int>& x) {
    std::cout << "x:";
    for (int v : x) std::cout << " " << v;
    std::cout << "\n";
}

int run_linearize(const std::string& in_path, const std::string& out_path,
                  const std::string& method, const std::string& bounds_mode) {
    const ZeroOneQP qp = to_qp(parse_instance(read_file(in_path)));
    const RelaxationMode mode =
        bounds_mode == "lp" ? RelaxationMode::LpOverX : RelaxationMode::Box;
    const BoundsProfile bounds = compute_bounds(qp, mode);
    const MilpModel model = build_formulation(qp, bounds, formulation_from_string(method));
    write_file(out_path, export_lp(model));
    const LinearizationReport report = size_report(model);
    std::cout << "wrote " << out_path << ": method=" << report.method
              << " variables=" << report.variable_count
              << " constraints=" << report.constraint_count << "\n";
    return kExitOk;
}

int run_solve(const std::string& in_path, const std::string& method,
              const std::string& solver, const std::string& bounds_mode) {
    const ZeroOneQP qp = to_qp(parse_instance(read_file(in_path)));
    if (solver == "brute") {
        const BruteForceResult bf = brute_force_solve(qp);
        if (!bf.feasible) {
            std::cout << "status: infeasible\n";
            return kExitInfeasible;
        }
        std::cout << "status: optimal\n";
        std::cout << "objective: " << format_double(bf.value) << "\n";
        print_assignment(bf.x);
        return kExitOk;
    }
    const RelaxationMode mode =
        bounds_mode == "lp" ? RelaxationMode::LpOverX : RelaxationMode::Box;
    const BoundsProfile bounds = compute_bounds(qp, mode);
    const MilpModel model = build_formulation(qp, bounds, formulation_from_string(method));
    const SolveResult res = branch_and_bound(model, options_from_env());
    std::cout << "status: " << to_string(res.status) << "\n";
    if (res.status == SolveStatus::Infeasible) return kExitInfeasible;
    if (res.x.empty()) {
        std::cout << "incumbent: none\n";
        std::cout << "bound: " << format_double(res.best_bound) << "\n";
        return kExitInfeasible;
    }
    std::cout << "objective: " << format_double(res.objective) << "\n";
    print_assignment(res.x);
    std::cout << "bound: " << format_double(res.best_bound) << "\n";
    std::cout << "nodes: " << res.nodes << "\n";
    std::cout << "time: " << res.wall_seconds << "s\n";
    return res.status == SolveStatus::Optimal ? kExitOk : kExitInfeasible;
}

int run_thread(const std::string& in_path, bool use_dp, const std::string& method) {
    const Instance instance = parse_instance(read_file(in_path));
    if (!std::holds_alternative<ThreadingInstance>(instance)) {
        throw InputError("thread: input must be a threading instance");
    }
    const ThreadingInstance& inst = std::get<ThreadingInstance>(instance);
    Threading threading;
    if (use_dp) {
        threading = solve_pairwise_free_dp(inst);
        std::cout << "method: dp\n";
    } else {
        const ThreadingQP built = build_qp(inst);
        const BoundsProfile bounds = compute_bounds(built.qp, RelaxationMode::Box);
        const MilpModel model =
            build_formulation(built.qp, bounds, formulation_from_string(method));
        const SolveResult res = branch_and_bound(model, options_from_env());
        if (res.status == SolveStatus::Infeasible) {
            std::cout << "status: infeasible\n";
            return kExitInfeasible;
        }
        if (res.status == SolveStatus::NodeLimit) {
            std::cout << "status: node-limit (bound " << format_double(res.best_bound) << ")\n";
            return kExitInfeasible;
        }
        threading = decode(res.x, inst, built.index_map);
        std::cout << "method: " << method << " (bnb, " << res.nodes << " nodes)\n";
    }
    std::cout << "value: " << format_double(threading.value) << "\n";
    std::cout << "relative:";
    for (int j : threading.relative) std::cout << " " << j;
    std::cout << "\nabsolute:";
    for (long long t : threading.absolute) std::cout << " " << t;
    std::cout << "\n";
    return kExitOk;
}

int run_compare(const std::string& in_path, const std::string& bounds_mode) {
    const ZeroOneQP qp = to_qp(parse_instance(read_file(in_path)));
    const RelaxationMode mode =
        bounds_mode == "lp" ? RelaxationMode::LpOverX : RelaxationMode::Box;
    const auto rows = compare_formulations(qp, mode);
    std::cout << "method        vars  cons  lp-bound      optimum       nodes  time\n";
    char line[160];
    for (const auto& row : rows) {
        const std::string lp = row.lp_status == LpStatus::Optimal
                                   ? format_double(row.lp_value)
                                   : to_string(row.lp_status);
        const std::string opt = row.status == SolveStatus::Optimal ? format_double(row.optimum)
                                                                   : to_string(row.status);
        std::snprintf(line, sizeof line, "%-12s %5d %5d  %-12s  %-12s %6lld  %.3fs",
                      row.method.c_str(), row.variables, row.constraints, lp.c_str(), opt.c_str(),
                      row.nodes, row.seconds);
        std::cout << line << "\n";
    }
    if (rows.front().status == SolveStatus::Infeasible) return kExitInfeasible;
    return kExitOk;
}

// integer perturbation of every coefficient block, preserving shape
ZeroOneQP perturb(const ZeroOneQP& base, Rng& rng) {
    ZeroOneQP qp = base;
    for (auto& v : qp.c) v += static_cast<double>(rng.next_int(-3, 3));
    for (auto& row : qp.Q) {
        for (auto& v : row) v += static_cast<double>(rng.next_int(-3, 3));
    }
    if (qp.quad_constraint) {
        for (auto& v : qp.quad_constraint->h) v += static_cast<double>(rng.next_int(-3, 3));
        for (auto& row : qp.quad_constraint->G) {
            for (auto& v : row) v += static_cast<double>(rng.next_int(-3, 3));
        }
        qp.quad_constraint->g += static_cast<double>(rng.next_int(-3, 3));
    }
    return qp;
}

bool verify_one(const ZeroOneQP& qp, const std::string& label) {
    if (qp.n > 16) {
        throw InputError("verify: enumeration over binary points needs n <= 16, got n=" +
                         std::to_string(qp.n));
    }
    const BoundsProfile bounds = compute_bounds(qp, RelaxationMode::Box);
    const MilpModel bp = linearize_bp(qp, bounds);
    bool ok = true;
    long long lemma_checked = 0;
    long long lifts_checked = 0;

    std::vector<int> x(qp.n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << qp.n); ++mask) {
        for (int i = 0; i < qp.n; ++i) x[i] = static_cast<int>((mask >> i) & 1ULL);
        for (int i = 0; i < qp.n; ++i) {
            const Lemma31Check check = verify_lemma31(qp, bounds, x, i);
            ++lemma_checked;
            if (!check.holds || check.rhs_max_form != check.rhs_min_form) {
                std::cout << label << ": verify_lemma31 FAILED at row " << i << "\n";
                ok = false;
            }
        }
        if (!check_feasible(qp, x)) continue;
        const std::vector<double> lift = bp_equivalence_lift(qp, bp, x);
        ++lifts_checked;
        if (!point_satisfies(bp, lift)) {
            std::cout << label << ": bp lift infeasible at a feasible binary point\n";
            ok = false;
        }
        if (point_objective(bp, lift) != evaluate_objective(qp, x)) {
            std::cout << label << ": bp lift objective mismatch\n";
            ok = false;
        }
    }

    const BruteForceResult bf = brute_force_solve(qp, 16);
    for (Formulation f : kAllFormulations) {
        const SolveResult res = branch_and_bound(build_formulation(qp, bounds, f));
        if (!bf.feasible) {
            if (res.status != SolveStatus::Infeasible) {
                std::cout << label << ": " << to_string(f)
                          << " found a solution on an infeasible instance\n";
                ok = false;
            }
            continue;
        }
        if (res.status != SolveStatus::Optimal ||
            std::llround(res.objective) != std::llround(bf.value)) {
            std::cout << label << ": " << to_string(f) << " optimum disagrees with brute force\n";
            ok = false;
        }
    }
    std::cout << label << ": " << (ok ? "ok" : "FAILED") << " (lemma points " << lemma_checked
              << ", lifts " << lifts_checked << ", brute force "
              << (bf.feasible ? format_double(bf.value) : "infeasible") << ")\n";
    return ok;
}

int run_verify(const std::string& in_path, int samples, std::uint64_t seed) {
    const ZeroOneQP base = to_qp(parse_instance(read_file(in_path)));
    Rng rng(seed);
    bool ok = verify_one(base, "base");
    for (int s = 1; s <= samples; ++s) {
        ok = verify_one(perturb(base, rng), "perturbation " + std::to_string(s)) && ok;
    }
    std::cout << (ok ? "verify: OK" : "verify: FAILED") << "\n";
    return ok ? kExitOk : kExitInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zero-one quadratic program linearization toolkit"};
    app.require_subcommand(1);

    std::string in_path, out_path;
    std::string method = "piecewise";
    std::string bounds_mode = "box";
    std::string solver = "bnb";
    bool use_dp = false;
    int samples = 20;
    std::uint64_t seed = 1;

    CLI::App* lin = app.add_subcommand("linearize", "write a reformulation in LP format");
    lin->add_option("--in", in_path, "instance JSON")->required();
    lin->add_option("--out", out_path, "output LP file")->required();
    lin->add_option("--method", method, "bp|compact|relaxed|relaxed-cuts|piecewise");
    lin->add_option("--bounds", bounds_mode, "box|lp")->check(CLI::IsMember({"box", "lp"}));

    CLI::App* solve = app.add_subcommand("solve", "solve an instance to binary optimality");
    solve->add_option("--in", in_path, "instance JSON")->required();
    solve->add_option("--method", method, "bp|compact|relaxed|relaxed-cuts|piecewise");
    solve->add_option("--solver", solver, "bnb|brute")->check(CLI::IsMember({"bnb", "brute"}));
    solve->add_option("--bounds", bounds_mode, "box|lp")->check(CLI::IsMember({"box", "lp"}));

    CLI::App* thread = app.add_subcommand("thread", "solve a threading instance");
    thread->add_option("--in", in_path, "instance JSON")->required();
    thread->add_flag("--dp", use_dp, "pairwise-free dynamic program");
    thread->add_option("--method", method, "formulation for the QP route");

    CLI::App* compare = app.add_subcommand("compare", "size/tightness table of all formulations");
    compare->add_option("--in", in_path, "instance JSON")->required();
    compare->add_option("--bounds", bounds_mode, "box|lp")->check(CLI::IsMember({"box", "lp"}));

    CLI::App* verify = app.add_subcommand("verify", "run the identity and equivalence suites");
    verify->add_option("--in", in_path, "instance JSON")->required();
    verify->add_option("--samples", samples, "number of seeded perturbations");
    verify->add_option("--seed", seed, "perturbation seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (lin->parsed()) return run_linearize(in_path, out_path, method, bounds_mode);
        if (solve->parsed()) return run_solve(in_path, method, solver, bounds_mode);
        if (thread->parsed()) return run_thread(in_path, use_dp, method);
        if (compare->parsed()) return run_compare(in_path, bounds_mode);
        if (verify->parsed()) return run_verify(in_path, samples, seed);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}
