#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "qlin/rng.hpp"
#include "qlin/solver.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/model_check.hpp"

using namespace qlin;
using namespace qlin::testing;

TEST_CASE("lp relaxation of the piecewise model of QP-A") {
    const ZeroOneQP qp = make_qp_a();
    const MilpModel model = linearize_piecewise(qp, compute_bounds(qp, RelaxationMode::Box));
    const LpSolution lp = solve_lp_relaxation(model);
    REQUIRE(lp.status == LpStatus::Optimal);
    CHECK(lp.objective == doctest::Approx(-1.0));
}

TEST_CASE("lp relaxation detects contradictory rows") {
    MilpModel model;
    model.name = "contradiction";
    const int x1 = model.add_variable("x1", VarKind::Binary, 0, 1, VarFamily::X);
    model.add_constraint("X", {{x1, 1.0}}, ConstraintSense::LessEqual, 0.0);
    model.add_constraint("X", {{x1, 1.0}}, ConstraintSense::GreaterEqual, 1.0);
    CHECK(solve_lp_relaxation(model).status == LpStatus::Infeasible);
}

TEST_CASE("lp relaxation of an empty objective is 0") {
    MilpModel model;
    model.name = "zero";
    const int x1 = model.add_variable("x1", VarKind::Binary, 0, 1, VarFamily::X);
    const int x2 = model.add_variable("x2", VarKind::Binary, 0, 1, VarFamily::X);
    model.add_constraint("X", {{x1, 1.0}, {x2, 1.0}}, ConstraintSense::LessEqual, 1.0);
    const LpSolution lp = solve_lp_relaxation(model);
    REQUIRE(lp.status == LpStatus::Optimal);
    CHECK(lp.objective == 0.0);
}

TEST_CASE("lp solutions respect feasibility tolerances") {
    Rng rng(601);
    for (int t = 0; t < 15; ++t) {
        const int n = static_cast<int>(rng.next_int(1, 8));
        const ZeroOneQP qp = random_qp(rng, n, rng.next_bool(), 3);
        const BoundsProfile b = compute_bounds(qp, RelaxationMode::Box);
        for (Formulation f : kAllFormulations) {
            const MilpModel model = build_formulation(qp, b, f);
            const LpSolution lp = solve_lp_relaxation(model);
            if (lp.status != LpStatus::Optimal) continue;
            CHECK(satisfies(model, lp.values, kFeasibilityTol));
            CHECK(model_objective(model, lp.values) == doctest::Approx(lp.objective));
        }
    }
}

TEST_CASE("branch and bound on the fixtures") {
    const ZeroOneQP qpa = make_qp_a();
    const BoundsProfile ba = compute_bounds(qpa, RelaxationMode::Box);
    for (Formulation f : kAllFormulations) {
        const SolveResult r = branch_and_bound(build_formulation(qpa, ba, f));
        REQUIRE(r.status == SolveStatus::Optimal);
        CHECK(r.objective == doctest::Approx(-1.0));
        CHECK(r.x == std::vector<int>{0, 1});
        CHECK(r.best_bound == doctest::Approx(r.objective));
        CHECK(r.nodes >= 1);
    }
    const ZeroOneQP qpc = make_qp_c();
    const BoundsProfile bc = compute_bounds(qpc, RelaxationMode::Box);
    for (Formulation f : kAllFormulations) {
        const SolveResult r = branch_and_bound(build_formulation(qpc, bc, f));
        REQUIRE(r.status == SolveStatus::Optimal);
        CHECK(r.objective == doctest::Approx(4.0));
        CHECK(r.x == std::vector<int>{1, 1});
    }
}

TEST_CASE("branch and bound reports infeasibility") {
    ZeroOneQP qp = make_qp_a();
    qp.x_constraints.push_back({{1.0, 1.0}, ConstraintSense::LessEqual, -1.0});
    const BoundsProfile b = compute_bounds(qp, RelaxationMode::Box);
    const SolveResult r = branch_and_bound(linearize_piecewise(qp, b));
    CHECK(r.status == SolveStatus::Infeasible);
}

TEST_CASE("lp bound never exceeds the binary optimum") {
    Rng rng(611);
    for (int t = 0; t < 15; ++t) {
        const int n = static_cast<int>(rng.next_int(1, 9));
        const ZeroOneQP qp = random_qp(rng, n, rng.next_bool(), 3);
        const BoundsProfile b = compute_bounds(qp, RelaxationMode::Box);
        const BruteForceResult bf = brute_force_solve(qp);
        if (!bf.feasible) continue;
        for (Formulation f : kAllFormulations) {
            const MilpModel model = build_formulation(qp, b, f);
            const LpSolution lp = solve_lp_relaxation(model);
            REQUIRE(lp.status == LpStatus::Optimal);
            CHECK(lp.objective <= bf.value + kBoundTol);
        }
    }
}

TEST_CASE("branch and bound equals brute force on wider instances") {
    Rng rng(613);
    for (int t = 0; t < 6; ++t) {
        const int n = static_cast<int>(rng.next_int(10, 14));
        const ZeroOneQP qp = random_qp(rng, n, rng.next_bool(), 3);
        const BoundsProfile b = compute_bounds(qp, RelaxationMode::Box);
        const BruteForceResult bf = brute_force_solve(qp);
        const SolveResult r = branch_and_bound(linearize_piecewise(qp, b));
        if (!bf.feasible) {
            CHECK(r.status == SolveStatus::Infeasible);
        } else {
            REQUIRE(r.status == SolveStatus::Optimal);
            CHECK(std::llround(r.objective) == std::llround(bf.value));
        }
    }
}

TEST_CASE("all formulations stay exact at n = 14") {
    Rng rng(619);
    ZeroOneQP qp = random_qp(rng, 14, true, 2);
    const BoundsProfile b = compute_bounds(qp, RelaxationMode::Box);
    const BruteForceResult bf = brute_force_solve(qp);
    for (Formulation f : kAllFormulations) {
        const SolveResult r = branch_and_bound(build_formulation(qp, b, f));
        if (!bf.feasible) {
            CHECK(r.status == SolveStatus::Infeasible);
        } else {
            REQUIRE(r.status == SolveStatus::Optimal);
            CHECK(std::llround(r.objective) == std::llround(bf.value));
        }
    }
}

TEST_CASE("a plugged lp backend is used and preserves results") {
    const ZeroOneQP qp = make_qp_c();
    const MilpModel model = linearize_bp(qp, compute_bounds(qp, RelaxationMode::Box));

    int calls = 0;
    BnbOptions opts;
    opts.lp_backend = [&calls](const LpProblem& p) {
        ++calls;
        return solve_lp(p);
    };
    const SolveResult plugged = branch_and_bound(model, opts);
    const SolveResult bundled = branch_and_bound(model);
    CHECK(calls > 0);
    CHECK(plugged.status == bundled.status);
    CHECK(plugged.objective == bundled.objective);
    CHECK(plugged.nodes == bundled.nodes);
    CHECK(plugged.x == bundled.x);

    int relax_calls = 0;
    const LpSolution with_backend =
        solve_lp_relaxation(model, [&relax_calls](const LpProblem& p) {
            ++relax_calls;
            return solve_lp(p);
        });
    CHECK(relax_calls == 1);
    CHECK(with_backend.objective == solve_lp_relaxation(model).objective);
}

TEST_CASE("compare_formulations agrees on infeasible instances") {
    ZeroOneQP qp = make_qp_a();
    qp.x_constraints.push_back({{1.0, 1.0}, ConstraintSense::GreaterEqual, 3.0});
    const auto rows = compare_formulations(qp);
    REQUIRE(rows.size() == 5);
    for (const auto& row : rows) CHECK(row.status == SolveStatus::Infeasible);
}

TEST_CASE("branch and bound is deterministic") {
    const ZeroOneQP qp = make_qp_c();
    const MilpModel model = linearize_bp(qp, compute_bounds(qp, RelaxationMode::Box));
    const SolveResult a = branch_and_bound(model);
    const SolveResult b = branch_and_bound(model);
    CHECK(a.nodes == b.nodes);
    CHECK(a.x == b.x);
    CHECK(a.objective == b.objective);
}

TEST_CASE("node limit yields a gap report") {
    Rng rng(617);
    const ZeroOneQP qp = random_qp(rng, 10, false, 0);
    const MilpModel model = linearize_bp(qp, compute_bounds(qp, RelaxationMode::Box));
    BnbOptions opts;
    opts.node_limit = 2;
    const SolveResult r = branch_and_bound(model, opts);
    CHECK(r.status == SolveStatus::NodeLimit);
    CHECK(r.nodes <= 2);
    const SolveResult full = branch_and_bound(model);
    REQUIRE(full.status == SolveStatus::Optimal);
    CHECK(r.best_bound <= full.objective + kBoundTol);
}

TEST_CASE("compare_formulations on the fixtures") {
    const auto rows_c = compare_formulations(make_qp_c());
    REQUIRE(rows_c.size() == 5);
    for (const auto& row : rows_c) {
        CHECK(row.status == SolveStatus::Optimal);
        CHECK(row.optimum == doctest::Approx(4.0));
    }
    // piecewise has the fewest variables on QP-C
    int pw_vars = 0;
    for (const auto& row : rows_c) {
        if (row.method == "piecewise") pw_vars = row.variables;
    }
    CHECK(pw_vars == 6);
    for (const auto& row : rows_c) {
        if (row.method != "piecewise") CHECK(row.variables > pw_vars);
    }

    const auto rows_a = compare_formulations(make_qp_a());
    REQUIRE(rows_a.size() == 5);
    for (const auto& row : rows_a) {
        CHECK(row.status == SolveStatus::Optimal);
        CHECK(row.optimum == doctest::Approx(-1.0));
    }
}
