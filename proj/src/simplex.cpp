#include "qlin/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qlin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kPhaseOneTol = 1e-7;
constexpr double kRatioTieTol = 1e-9;

enum class ColStatus : char { AtLower, AtUpper, Free, Basic };

enum class PhaseOutcome { Optimal, Unbounded, IterationLimit };

/*
 * Dense bounded-variable simplex state. Columns are structural variables,
 * then one slack per row, then any artificials added to repair the initial
 * basis. The tableau holds B^{-1} A for all columns.
 */
struct Simplex {
    int nrows = 0;
    int ncols = 0;
    std::vector<double> tab;  // row-major, nrows x ncols
    std::vector<double> lb, ub;
    std::vector<ColStatus> stat;
    std::vector<double> nval;  // value of each nonbasic column
    std::vector<int> basis;    // basic column per row
    std::vector<double> xb;    // value of the basic column per row
    long long iters = 0;
    long long bland_after = 0;
    long long iter_cap = 0;

    double* row(int r) { return tab.data() + static_cast<std::size_t>(r) * ncols; }

    double column_value(int j) const {
        if (stat[j] != ColStatus::Basic) return nval[j];
        for (int r = 0; r < nrows; ++r) {
            if (basis[r] == j) return xb[r];
        }
        return 0.0;
    }

    PhaseOutcome run(const std::vector<double>& cost);
};

PhaseOutcome Simplex::run(const std::vector<double>& cost) {
    std::vector<double> reduced(ncols);
    std::vector<double> norm2(ncols);

    while (true) {
        if (iters >= iter_cap) return PhaseOutcome::IterationLimit;
        ++iters;
        const bool bland = iters > bland_after;

        // reduced costs d = c - c_B^T B^{-1} A, accumulated row-wise
        std::copy(cost.begin(), cost.end(), reduced.begin());
        for (int r = 0; r < nrows; ++r) {
            const double cb = cost[basis[r]];
            if (cb == 0.0) continue;
            const double* tr = row(r);
            for (int j = 0; j < ncols; ++j) reduced[j] -= cb * tr[j];
        }
        if (!bland) {
            std::fill(norm2.begin(), norm2.end(), 1.0);
            for (int r = 0; r < nrows; ++r) {
                const double* tr = row(r);
                for (int j = 0; j < ncols; ++j) norm2[j] += tr[j] * tr[j];
            }
        }

        // entering column
        int enter = -1;
        int dir = 0;
        double best_score = 0.0;
        for (int j = 0; j < ncols; ++j) {
            if (stat[j] == ColStatus::Basic) continue;
            if (lb[j] == ub[j]) continue;  // fixed
            int dj = 0;
            switch (stat[j]) {
                case ColStatus::AtLower:
                    if (reduced[j] < -kDualTol) dj = 1;
                    break;
                case ColStatus::AtUpper:
                    if (reduced[j] > kDualTol) dj = -1;
                    break;
                case ColStatus::Free:
                    if (reduced[j] < -kDualTol) dj = 1;
                    else if (reduced[j] > kDualTol) dj = -1;
                    break;
                case ColStatus::Basic:
                    break;
            }
            if (dj == 0) continue;
            if (bland) {
                enter = j;
                dir = dj;
                break;
            }
            const double score = reduced[j] * reduced[j] / norm2[j];
            if (score > best_score) {
                best_score = score;
                enter = j;
                dir = dj;
            }
        }
        if (enter < 0) return PhaseOutcome::Optimal;

        // ratio test; the entering variable's own opposite bound competes too
        double t_best = kInf;
        int leave_row = -1;
        bool leave_at_upper = false;
        double best_pivot = 0.0;
        for (int r = 0; r < nrows; ++r) {
            const double a_rq = row(r)[enter];
            const double delta = dir * a_rq;
            double t;
            bool to_upper;
            if (delta > kPivotTol) {
                const double l = lb[basis[r]];
                if (l == -kInf) continue;
                t = (xb[r] - l) / delta;
                to_upper = false;
            } else if (delta < -kPivotTol) {
                const double u = ub[basis[r]];
                if (u == kInf) continue;
                t = (u - xb[r]) / (-delta);
                to_upper = true;
            } else {
                continue;
            }
            if (t < 0.0) t = 0.0;
            bool take = false;
            if (t < t_best - kRatioTieTol) {
                take = true;
            } else if (t <= t_best + kRatioTieTol && leave_row >= 0) {
                if (bland) {
                    take = basis[r] < basis[leave_row];
                } else if (std::abs(a_rq) > std::abs(best_pivot)) {
                    take = true;
                }
            }
            if (take) {
                t_best = t;
                leave_row = r;
                leave_at_upper = to_upper;
                best_pivot = a_rq;
            }
        }
        const bool can_flip = lb[enter] > -kInf && ub[enter] < kInf;
        const double t_flip = can_flip ? ub[enter] - lb[enter] : kInf;

        if (leave_row < 0 && t_flip == kInf) return PhaseOutcome::Unbounded;

        if (t_flip <= t_best) {
            // bound flip, no basis change
            for (int r = 0; r < nrows; ++r) xb[r] -= t_flip * dir * row(r)[enter];
            stat[enter] = dir > 0 ? ColStatus::AtUpper : ColStatus::AtLower;
            nval[enter] = dir > 0 ? ub[enter] : lb[enter];
            continue;
        }

        const int r = leave_row;
        const int leaving = basis[r];
        const double entering_value = nval[enter] + dir * t_best;
        for (int i = 0; i < nrows; ++i) {
            if (i != r) xb[i] -= t_best * dir * row(i)[enter];
        }
        stat[leaving] = leave_at_upper ? ColStatus::AtUpper : ColStatus::AtLower;
        nval[leaving] = leave_at_upper ? ub[leaving] : lb[leaving];

        double* tr = row(r);
        const double piv = tr[enter];
        const double inv = 1.0 / piv;
        for (int j = 0; j < ncols; ++j) tr[j] *= inv;
        tr[enter] = 1.0;
        for (int i = 0; i < nrows; ++i) {
            if (i == r) continue;
            double* ti = row(i);
            const double f = ti[enter];
            if (f == 0.0) continue;
            for (int j = 0; j < ncols; ++j) ti[j] -= f * tr[j];
            ti[enter] = 0.0;
        }
        basis[r] = enter;
        stat[enter] = ColStatus::Basic;
        xb[r] = entering_value;
    }
}

}  // namespace

int LpProblem::add_row(std::vector<std::pair<int, double>> terms, ConstraintSense sense,
                       double rhs) {
    rows.push_back(Row{std::move(terms), sense, rhs});
    return static_cast<int>(rows.size()) - 1;
}

const char* to_string(LpStatus status) {
    switch (status) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
        case LpStatus::IterationLimit: return "iteration-limit";
    }
    return "?";
}

LpResult solve_lp(const LpProblem& problem) {
    const int nv = problem.num_vars;
    const int nr = static_cast<int>(problem.rows.size());
    if (static_cast<int>(problem.objective.size()) != nv ||
        static_cast<int>(problem.lower.size()) != nv ||
        static_cast<int>(problem.upper.size()) != nv) {
        throw InputError("lp: objective/bound sizes do not match num_vars");
    }

    LpResult out;
    for (int j = 0; j < nv; ++j) {
        if (problem.lower[j] > problem.upper[j]) {
            out.status = LpStatus::Infeasible;
            return out;
        }
    }

    Simplex s;
    s.nrows = nr;

    // column bounds: structurals, then one slack per row
    s.lb = problem.lower;
    s.ub = problem.upper;
    s.lb.resize(nv + nr);
    s.ub.resize(nv + nr);
    for (int r = 0; r < nr; ++r) {
        switch (problem.rows[r].sense) {
            case ConstraintSense::LessEqual:
                s.lb[nv + r] = 0.0;
                s.ub[nv + r] = kInf;
                break;
            case ConstraintSense::Equal:
                s.lb[nv + r] = 0.0;
                s.ub[nv + r] = 0.0;
                break;
            case ConstraintSense::GreaterEqual:
                s.lb[nv + r] = -kInf;
                s.ub[nv + r] = 0.0;
                break;
        }
    }

    s.stat.assign(nv + nr, ColStatus::AtLower);
    s.nval.assign(nv + nr, 0.0);
    for (int j = 0; j < nv; ++j) {
        if (s.lb[j] > -kInf) {
            s.stat[j] = ColStatus::AtLower;
            s.nval[j] = s.lb[j];
        } else if (s.ub[j] < kInf) {
            s.stat[j] = ColStatus::AtUpper;
            s.nval[j] = s.ub[j];
        } else {
            s.stat[j] = ColStatus::Free;
            s.nval[j] = 0.0;
        }
    }

    // residual of each row at the initial nonbasic point decides whether the
    // slack can be basic or an artificial must absorb the violation
    std::vector<double> residual(nr, 0.0);
    double rhs_scale = 1.0;
    for (int r = 0; r < nr; ++r) {
        double ax = 0.0;
        for (const auto& [j, a] : problem.rows[r].terms) {
            if (j < 0 || j >= nv) throw InputError("lp: row references unknown variable");
            ax += a * s.nval[j];
        }
        residual[r] = problem.rows[r].rhs - ax;
        rhs_scale = std::max(rhs_scale, std::abs(problem.rows[r].rhs));
    }

    std::vector<int> art_col(nr, -1);
    int nart = 0;
    for (int r = 0; r < nr; ++r) {
        if (residual[r] < s.lb[nv + r] - 0.0 || residual[r] > s.ub[nv + r] + 0.0) {
            art_col[r] = nv + nr + nart;
            ++nart;
        }
    }

    s.ncols = nv + nr + nart;
    s.lb.resize(s.ncols);
    s.ub.resize(s.ncols);
    s.stat.resize(s.ncols, ColStatus::AtLower);
    s.nval.resize(s.ncols, 0.0);
    s.tab.assign(static_cast<std::size_t>(nr) * s.ncols, 0.0);
    s.basis.assign(nr, -1);
    s.xb.assign(nr, 0.0);

    std::vector<double> phase1_cost(s.ncols, 0.0);
    for (int r = 0; r < nr; ++r) {
        double* tr = s.row(r);
        for (const auto& [j, a] : problem.rows[r].terms) tr[j] += a;
        tr[nv + r] = 1.0;
        if (art_col[r] < 0) {
            s.basis[r] = nv + r;
            s.stat[nv + r] = ColStatus::Basic;
            s.xb[r] = residual[r];
        } else {
            // clamp the slack to its nearest bound, artificial takes the rest
            const double sb = residual[r] < s.lb[nv + r] ? s.lb[nv + r] : s.ub[nv + r];
            s.stat[nv + r] = residual[r] < s.lb[nv + r] ? ColStatus::AtLower : ColStatus::AtUpper;
            s.nval[nv + r] = sb;
            const int ac = art_col[r];
            const double av = residual[r] - sb;
            tr[ac] = 1.0;
            if (av > 0.0) {
                s.lb[ac] = 0.0;
                s.ub[ac] = kInf;
                phase1_cost[ac] = 1.0;
            } else {
                s.lb[ac] = -kInf;
                s.ub[ac] = 0.0;
                phase1_cost[ac] = -1.0;
            }
            s.basis[r] = ac;
            s.stat[ac] = ColStatus::Basic;
            s.xb[r] = av;
        }
    }

    s.bland_after = 200 + 4LL * (nr + s.ncols);
    s.iter_cap = 50000 + 200LL * (nr + s.ncols);

    if (nart > 0) {
        const PhaseOutcome ph1 = s.run(phase1_cost);
        if (ph1 == PhaseOutcome::IterationLimit) {
            out.status = LpStatus::IterationLimit;
            out.iterations = s.iters;
            return out;
        }
        if (ph1 == PhaseOutcome::Unbounded) {
            throw NumericalError("simplex: phase 1 reported unbounded (" +
                                 std::to_string(nr) + " rows, " + std::to_string(s.ncols) +
                                 " cols)");
        }
        double infeas = 0.0;
        for (int j = nv + nr; j < s.ncols; ++j) infeas += phase1_cost[j] * s.column_value(j);
        if (infeas > kPhaseOneTol * rhs_scale) {
            out.status = LpStatus::Infeasible;
            out.iterations = s.iters;
            return out;
        }
        // lock artificials at zero for phase 2
        for (int j = nv + nr; j < s.ncols; ++j) {
            s.lb[j] = 0.0;
            s.ub[j] = 0.0;
            if (s.stat[j] != ColStatus::Basic) {
                s.stat[j] = ColStatus::AtLower;
                s.nval[j] = 0.0;
            }
        }
    }

    std::vector<double> phase2_cost(s.ncols, 0.0);
    std::copy(problem.objective.begin(), problem.objective.end(), phase2_cost.begin());
    const PhaseOutcome ph2 = s.run(phase2_cost);
    out.iterations = s.iters;
    if (ph2 == PhaseOutcome::IterationLimit) {
        out.status = LpStatus::IterationLimit;
        return out;
    }
    if (ph2 == PhaseOutcome::Unbounded) {
        out.status = LpStatus::Unbounded;
        return out;
    }

    out.status = LpStatus::Optimal;
    out.values.assign(nv, 0.0);
    for (int j = 0; j < nv; ++j) out.values[j] = s.nval[j];
    for (int r = 0; r < nr; ++r) {
        if (s.basis[r] < nv) out.values[s.basis[r]] = s.xb[r];
    }
    double obj = problem.objective_offset;
    for (int j = 0; j < nv; ++j) obj += problem.objective[j] * out.values[j];
    out.objective = obj;
    return out;
}

}
