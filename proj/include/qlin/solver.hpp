#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qlin/linearize.hpp"
#include "qlin/milp.hpp"
#include "qlin/qp.hpp"
#include "qlin/simplex.hpp"

namespace qlin {

inline constexpr double kFeasibilityTol = 1e-7;
inline constexpr double kIntegralityTol = 1e-6;
inline constexpr double kBoundTol = 1e-9;

struct LpSolution {
    LpStatus status = LpStatus::Optimal;
    std::vector<double> values;  // by model variable index
    double objective = 0.0;
    long long iterations = 0;
};

// Relaxation backend hook; empty means the bundled simplex. A replacement
// must honour the LpProblem/LpResult contract (deterministic, basic optimal
// solutions) for the solver guarantees to carry over.
using LpBackend = std::function<LpResult(const LpProblem&)>;

// Continuous relaxation of the model (binaries relaxed to [0,1]).
// Deterministic; throws NumericalError on simplex breakdown.
LpSolution solve_lp_relaxation(const MilpModel& model, const LpBackend& backend = {});

struct BnbOptions {
    long long node_limit = 1'000'000;
    LpBackend lp_backend;  // empty: bundled simplex
};

enum class SolveStatus { Optimal, Infeasible, NodeLimit };

const char* to_string(SolveStatus status);

struct SolveResult {
    SolveStatus status = SolveStatus::Infeasible;
    std::vector<int> x;  // incumbent values of the binary variables, model order
    double objective = 0.0;
    double best_bound = 0.0;
    long long nodes = 0;
    double wall_seconds = 0.0;
};

/*
 * Exact optimum over binary assignments by LP-based branch-and-bound:
 * best-first node selection, branching on the most fractional binary
 * (ties -> lowest index, down branch first). Deterministic given the model.
 */
SolveResult branch_and_bound(const MilpModel& model, const BnbOptions& options = {});

struct FormulationRow {
    std::string method;
    int variables = 0;
    int constraints = 0;
    LpStatus lp_status = LpStatus::Optimal;
    double lp_value = 0.0;
    SolveStatus status = SolveStatus::Infeasible;
    double optimum = 0.0;
    long long nodes = 0;
    double seconds = 0.0;
};

// One row per formulation; asserts that the binary optima agree across rows
// (NumericalError otherwise, since disagreement means a broken reformulation).
std::vector<FormulationRow> compare_formulations(const ZeroOneQP& qp,
                                                 RelaxationMode mode = RelaxationMode::Box);

}
