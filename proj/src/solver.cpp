#include "qlin/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>

namespace qlin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

LpProblem to_lp(const MilpModel& model) {
    LpProblem p;
    p.num_vars = static_cast<int>(model.variables.size());
    p.objective = model.objective;
    p.objective_offset = model.objective_offset;
    p.lower.resize(p.num_vars);
    p.upper.resize(p.num_vars);
    for (int j = 0; j < p.num_vars; ++j) {
        const auto& v = model.variables[j];
        if (v.kind == VarKind::Binary) {
            p.lower[j] = 0.0;
            p.upper[j] = 1.0;
        } else {
            p.lower[j] = v.lower;
            p.upper[j] = v.upper;
        }
    }
    for (const auto& con : model.constraints) {
        std::vector<std::pair<int, double>> terms;
        terms.reserve(con.terms.size());
        for (const auto& t : con.terms) terms.emplace_back(t.var, t.coeff);
        p.add_row(std::move(terms), con.sense, con.rhs);
    }
    return p;
}

LpResult solve_or_throw(LpProblem& problem, const MilpModel& model, const LpBackend& backend) {
    LpResult res = backend ? backend(problem) : solve_lp(problem);
    if (res.status == LpStatus::IterationLimit) {
        throw NumericalError("simplex hit the iteration limit on model '" + model.name + "' (" +
                             std::to_string(model.constraints.size()) + " rows, " +
                             std::to_string(model.variables.size()) + " vars, " +
                             std::to_string(res.iterations) + " iterations)");
    }
    return res;
}

}  // namespace

const char* to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::NodeLimit: return "node-limit";
    }
    return "?";
}

LpSolution solve_lp_relaxation(const MilpModel& model, const LpBackend& backend) {
    model.validate();
    LpProblem p = to_lp(model);
    LpResult res = solve_or_throw(p, model, backend);
    LpSolution out;
    out.status = res.status;
    out.values = std::move(res.values);
    out.objective = res.objective;
    out.iterations = res.iterations;
    return out;
}

SolveResult branch_and_bound(const MilpModel& model, const BnbOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    model.validate();

    std::vector<int> binaries;
    for (int j = 0; j < static_cast<int>(model.variables.size()); ++j) {
        if (model.variables[j].kind == VarKind::Binary) binaries.push_back(j);
    }

    const LpProblem base = to_lp(model);

    struct Node {
        double bound;
        long long seq;
        std::vector<std::pair<int, int>> fixes;  // (variable, value)
    };
    struct NodeOrder {
        bool operator()(const Node& a, const Node& b) const {
            if (a.bound != b.bound) return a.bound > b.bound;
            return a.seq > b.seq;
        }
    };
    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;

    SolveResult out;
    out.best_bound = kInf;
    long long seq = 0;
    open.push(Node{-kInf, seq++, {}});

    bool have_incumbent = false;
    double incumbent_value = kInf;
    std::vector<int> incumbent;
    long long nodes = 0;
    bool node_limit_hit = false;
    double open_floor = kInf;  // bound of the node being cut off by the limit

    while (!open.empty()) {
        Node node = open.top();
        open.pop();
        if (have_incumbent && node.bound >= incumbent_value - kBoundTol) continue;
        if (nodes >= options.node_limit) {
            node_limit_hit = true;
            open_floor = node.bound;
            break;
        }
        ++nodes;

        LpProblem p = base;
        for (const auto& [var, value] : node.fixes) {
            p.lower[var] = value;
            p.upper[var] = value;
        }
        const LpResult lp = solve_or_throw(p, model, options.lp_backend);
        if (lp.status == LpStatus::Infeasible) continue;
        if (lp.status == LpStatus::Unbounded) {
            throw NumericalError("LP relaxation of model '" + model.name +
                                 "' is unbounded; refusing to branch");
        }
        if (have_incumbent && lp.objective >= incumbent_value - kBoundTol) continue;

        // most fractional binary
        int branch_var = -1;
        double worst_frac = kIntegralityTol;
        for (int j : binaries) {
            const double v = lp.values[j];
            const double frac = std::abs(v - std::round(v));
            if (frac > worst_frac) {
                worst_frac = frac;
                branch_var = j;
            }
        }
        if (branch_var < 0) {
            // integral: candidate incumbent
            if (!have_incumbent || lp.objective < incumbent_value - kBoundTol) {
                have_incumbent = true;
                incumbent_value = lp.objective;
                incumbent.clear();
                incumbent.reserve(binaries.size());
                for (int j : binaries) {
                    incumbent.push_back(static_cast<int>(std::llround(lp.values[j])));
                }
            }
            continue;
        }

        Node down{lp.objective, seq++, node.fixes};
        down.fixes.emplace_back(branch_var, 0);
        Node up{lp.objective, seq++, node.fixes};
        up.fixes.emplace_back(branch_var, 1);
        open.push(std::move(down));
        open.push(std::move(up));
    }

    out.nodes = nodes;
    if (node_limit_hit) {
        out.status = SolveStatus::NodeLimit;
        double floor = std::min(open_floor, have_incumbent ? incumbent_value : kInf);
        while (!open.empty()) {
            floor = std::min(floor, open.top().bound);
            open.pop();
        }
        out.best_bound = floor;
        if (have_incumbent) {
            out.x = std::move(incumbent);
            out.objective = incumbent_value;
        } else {
            out.objective = kInf;  // no incumbent found before the cap
        }
    } else if (have_incumbent) {
        out.status = SolveStatus::Optimal;
        out.x = std::move(incumbent);
        out.objective = incumbent_value;
        out.best_bound = incumbent_value;
    } else {
        out.status = SolveStatus::Infeasible;
        out.objective = kInf;
        out.best_bound = kInf;
    }
    out.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

std::vector<FormulationRow> compare_formulations(const ZeroOneQP& qp, RelaxationMode mode) {
    const BoundsProfile bounds = compute_bounds(qp, mode);
    std::vector<FormulationRow> rows;
    for (Formulation f : kAllFormulations) {
        const MilpModel model = build_formulation(qp, bounds, f);
        const LinearizationReport report = size_report(model);
        FormulationRow row;
        row.method = report.method;
        row.variables = report.variable_count;
        row.constraints = report.constraint_count;
        const LpSolution lp = solve_lp_relaxation(model);
        row.lp_status = lp.status;
        row.lp_value = lp.objective;
        const SolveResult res = branch_and_bound(model);
        row.status = res.status;
        row.optimum = res.objective;
        row.nodes = res.nodes;
        row.seconds = res.wall_seconds;
        rows.push_back(std::move(row));
    }
    for (const auto& row : rows) {
        if (row.status != rows.front().status) {
            throw NumericalError("formulation statuses disagree: " + rows.front().method +
                                 " is " + to_string(rows.front().status) + ", " + row.method +
                                 " is " + to_string(row.status));
        }
        if (row.status == SolveStatus::Optimal &&
            std::abs(row.optimum - rows.front().optimum) > kIntegralityTol) {
            throw NumericalError("formulation optima disagree: " + rows.front().method + "=" +
                                 std::to_string(rows.front().optimum) + ", " + row.method + "=" +
                                 std::to_string(row.optimum));
        }
    }
    return rows;
}

}
