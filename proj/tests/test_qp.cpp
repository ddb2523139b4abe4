#include <doctest.h>

#include <limits>
#include <vector>

#include "qlin/qp.hpp"
#include "qlin/rng.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace qlin;
using namespace qlin::testing;

TEST_CASE("evaluate_objective on QP-A") {
    const ZeroOneQP qp = make_qp_a();
    CHECK(evaluate_objective(qp, {0, 0}) == 0.0);
    CHECK(evaluate_objective(qp, {0, 1}) == -1.0);
    CHECK(evaluate_objective(qp, {1, 1}) == 4.0);
    CHECK_THROWS_AS(evaluate_objective(qp, {0, 1, 0}), InputError);
    CHECK_THROWS_AS(evaluate_objective(qp, {0, 2}), InputError);
}

TEST_CASE("evaluate_objective keeps asymmetric Q as given") {
    ZeroOneQP qp;
    qp.n = 2;
    qp.c = {0.0, 0.0};
    qp.Q = {{1.0, 3.0}, {0.0, 2.0}};
    CHECK(evaluate_objective(qp, {1, 1}) == 6.0);
    CHECK(evaluate_objective(qp, {1, 0}) == 1.0);
}

TEST_CASE("objective is invariant under symmetrization") {
    Rng rng(41);
    for (int t = 0; t < 20; ++t) {
        const int n = static_cast<int>(rng.next_int(1, 6));
        const ZeroOneQP qp = random_qp(rng, n, false, 0);
        ZeroOneQP sym = qp;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                sym.Q[i][j] = (qp.Q[i][j] + qp.Q[j][i]) / 2.0;
            }
        }
        std::vector<int> x(n);
        for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
            for (int i = 0; i < n; ++i) x[i] = static_cast<int>((mask >> i) & 1ULL);
            CHECK(evaluate_objective(qp, x) == evaluate_objective(sym, x));
        }
    }
}

TEST_CASE("check_feasible on QP-C") {
    const ZeroOneQP qp = make_qp_c();
    CHECK(check_feasible(qp, {1, 1}));
    CHECK_FALSE(check_feasible(qp, {0, 1}));
    const ZeroOneQP unconstrained = make_qp_a();
    CHECK(check_feasible(unconstrained, {0, 0}));
    CHECK(check_feasible(unconstrained, {1, 0}));
}

TEST_CASE("check_feasible honours linear senses") {
    ZeroOneQP qp = make_qp_a();
    qp.x_constraints.push_back({{1.0, 1.0}, ConstraintSense::LessEqual, 1.0});
    CHECK(check_feasible(qp, {1, 0}));
    CHECK_FALSE(check_feasible(qp, {1, 1}));
    qp.x_constraints.back().sense = ConstraintSense::Equal;
    CHECK_FALSE(check_feasible(qp, {0, 0}));
    CHECK(check_feasible(qp, {0, 1}));
    qp.x_constraints.back().sense = ConstraintSense::GreaterEqual;
    CHECK(check_feasible(qp, {1, 1}));
    CHECK_FALSE(check_feasible(qp, {0, 0}));
}

TEST_CASE("compute_bounds in box mode") {
    const BoundsProfile a = compute_bounds(make_qp_a(), RelaxationMode::Box);
    CHECK(a.gamma_min == std::vector<double>{0.0, 0.0});
    CHECK(a.gamma_max == std::vector<double>{2.0, 2.0});
    CHECK(a.lambda_min == std::vector<double>{0.0, 0.0});
    CHECK(a.lambda_max == std::vector<double>{0.0, 0.0});
    CHECK_FALSE(a.cuts_available);

    const BoundsProfile c = compute_bounds(make_qp_c(), RelaxationMode::Box);
    CHECK(c.lambda_min == std::vector<double>{0.0, 0.0});
    CHECK(c.lambda_max == std::vector<double>{1.0, 1.0});
    CHECK(c.cuts_available);

    ZeroOneQP row;
    row.n = 3;
    row.c = {0.0, 0.0, 0.0};
    row.Q = {{1.0, -2.0, 3.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
    const BoundsProfile b = compute_bounds(row, RelaxationMode::Box);
    CHECK(b.gamma_min[0] == -2.0);
    CHECK(b.gamma_max[0] == 4.0);
}

TEST_CASE("compute_wmax") {
    const ZeroOneQP qp = make_qp_c();
    CHECK(compute_wmax(qp, RelaxationMode::Box) == std::vector<double>{0.0, 0.0});

    ZeroOneQP same = qp;
    same.quad_constraint->G = same.Q;
    CHECK(compute_wmax(same, RelaxationMode::Box) == std::vector<double>{0.0, 0.0});

    ZeroOneQP spread = qp;
    spread.quad_constraint->G = {{2.0, 1.0}, {1.0, 0.0}};
    // G_1 - Q_1 = (2,-1) -> positive part sums to 2
    CHECK(compute_wmax(spread, RelaxationMode::Box)[0] == 2.0);

    CHECK(compute_wmax(make_qp_a(), RelaxationMode::Box) == std::vector<double>{0.0, 0.0});
}

TEST_CASE("bound validity over the binary feasible set") {
    Rng rng(141);
    for (int t = 0; t < 30; ++t) {
        const int n = static_cast<int>(rng.next_int(1, 12));
        const ZeroOneQP qp = random_qp(rng, n, rng.next_bool(), 3);
        for (const RelaxationMode mode : {RelaxationMode::Box, RelaxationMode::LpOverX}) {
            BoundsProfile b;
            try {
                b = compute_bounds(qp, mode);
            } catch (const InfeasibleError&) {
                continue;  // relaxed X empty: nothing to certify
            }
            std::vector<int> x(n);
            for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
                for (int i = 0; i < n; ++i) x[i] = static_cast<int>((mask >> i) & 1ULL);
                if (!check_feasible(qp, x)) continue;
                for (int i = 0; i < n; ++i) {
                    double qx = 0.0;
                    for (int j = 0; j < n; ++j) {
                        if (x[j]) qx += qp.Q[i][j];
                    }
                    CHECK(b.gamma_min[i] <= qx + 1e-9);
                    CHECK(qx <= b.gamma_max[i] + 1e-9);
                    if (qp.quad_constraint) {
                        double gx = 0.0;
                        for (int j = 0; j < n; ++j) {
                            if (x[j]) gx += qp.quad_constraint->G[i][j];
                        }
                        CHECK(b.lambda_min[i] <= gx + 1e-9);
                        CHECK(gx <= b.lambda_max[i] + 1e-9);
                    }
                }
            }
        }
    }
}

TEST_CASE("lp bounds dominate box bounds") {
    Rng rng(142);
    int compared = 0;
    for (int t = 0; t < 30; ++t) {
        const int n = static_cast<int>(rng.next_int(2, 8));
        ZeroOneQP qp = random_qp(rng, n, rng.next_bool(), 3);
        if (qp.x_constraints.empty()) continue;
        const BoundsProfile box = compute_bounds(qp, RelaxationMode::Box);
        BoundsProfile lp;
        try {
            lp = compute_bounds(qp, RelaxationMode::LpOverX);
        } catch (const InfeasibleError&) {
            continue;
        }
        ++compared;
        for (int i = 0; i < n; ++i) {
            CHECK(lp.gamma_min[i] >= box.gamma_min[i] - 1e-7);
            CHECK(lp.gamma_max[i] <= box.gamma_max[i] + 1e-7);
            if (qp.quad_constraint) {
                CHECK(lp.lambda_min[i] >= box.lambda_min[i] - 1e-7);
                CHECK(lp.lambda_max[i] <= box.lambda_max[i] + 1e-7);
                CHECK(lp.w_max[i] <= box.w_max[i] + 1e-7);
            }
        }
    }
    CHECK(compared > 5);
}

TEST_CASE("lp bounds error on an infeasible relaxed X") {
    ZeroOneQP qp = make_qp_a();
    qp.x_constraints.push_back({{1.0, 1.0}, ConstraintSense::GreaterEqual, 3.0});
    CHECK_THROWS_AS(compute_bounds(qp, RelaxationMode::LpOverX), InfeasibleError);
}

TEST_CASE("brute_force_solve on the fixtures") {
    const BruteForceResult a = brute_force_solve(make_qp_a());
    REQUIRE(a.feasible);
    CHECK(a.x == std::vector<int>{0, 1});
    CHECK(a.value == -1.0);

    const BruteForceResult c = brute_force_solve(make_qp_c());
    REQUIRE(c.feasible);
    CHECK(c.x == std::vector<int>{1, 1});
    CHECK(c.value == 4.0);

    ZeroOneQP pinned = make_qp_a();
    pinned.x_constraints.push_back({{1.0, 1.0}, ConstraintSense::LessEqual, 0.0});
    const BruteForceResult p = brute_force_solve(pinned);
    REQUIRE(p.feasible);
    CHECK(p.x == std::vector<int>{0, 0});
    CHECK(p.value == 0.0);
}

TEST_CASE("brute_force_solve edge behaviour") {
    ZeroOneQP qp = make_qp_a();
    CHECK_THROWS_AS(brute_force_solve(qp, 1), InputError);

    ZeroOneQP empty = make_qp_a();
    empty.x_constraints.push_back({{1.0, 1.0}, ConstraintSense::LessEqual, -1.0});
    CHECK_FALSE(brute_force_solve(empty).feasible);

    // ties break to the lexicographically smallest x
    ZeroOneQP flat;
    flat.n = 3;
    flat.c = {0.0, 0.0, 0.0};
    flat.Q.assign(3, std::vector<double>(3, 0.0));
    CHECK(brute_force_solve(flat).x == std::vector<int>{0, 0, 0});

    // determinism
    const BruteForceResult r1 = brute_force_solve(make_qp_c());
    const BruteForceResult r2 = brute_force_solve(make_qp_c());
    CHECK(r1.x == r2.x);
    CHECK(r1.value == r2.value);
}

TEST_CASE("validate rejects malformed instances") {
    ZeroOneQP qp = make_qp_a();
    qp.c.pop_back();
    CHECK_THROWS_AS(qp.validate(), InputError);

    ZeroOneQP bad_q = make_qp_a();
    bad_q.Q[0].push_back(1.0);
    CHECK_THROWS_AS(bad_q.validate(), InputError);

    ZeroOneQP nan_c = make_qp_a();
    nan_c.c[0] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(nan_c.validate(), InputError);

    ZeroOneQP zero;
    zero.n = 0;
    CHECK_THROWS_AS(zero.validate(), InputError);
}
