#pragma once

#include <utility>
#include <vector>

#include "qlin/common.hpp"

namespace qlin {

/*
 * Minimal dense LP interface: minimize objective . v subject to rows and
 * variable bounds (entries may be +/-infinity). Kept free of the MILP
 * representation so low-level callers (bound profiles) can use it directly.
 */
struct LpProblem {
    struct Row {
        std::vector<std::pair<int, double>> terms;
        ConstraintSense sense = ConstraintSense::LessEqual;
        double rhs = 0.0;
    };

    int num_vars = 0;
    std::vector<double> objective;
    double objective_offset = 0.0;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<Row> rows;

    int add_row(std::vector<std::pair<int, double>> terms, ConstraintSense sense, double rhs);
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(LpStatus status);

struct LpResult {
    LpStatus status = LpStatus::Optimal;
    double objective = 0.0;
    std::vector<double> values;
    long long iterations = 0;
};

/*
 * Two-phase primal simplex on a dense tableau with native variable bounds.
 * Deterministic: a steepest-edge-flavoured pricing rule for a bounded number
 * of pivots, Bland's rule afterwards; ratio-test ties prefer the larger
 * pivot, then the lower column index.
 */
LpResult solve_lp(const LpProblem& problem);

}
