#include "qlin/qp.hpp"

#include <cmath>
#include <cstdint>

#include "qlin/simplex.hpp"

namespace qlin {

namespace {

void check_vector(const std::vector<double>& v, int n, const std::string& what) {
    if (static_cast<int>(v.size()) != n) {
        throw InputError(what + ": expected length " + std::to_string(n) + ", got " +
                         std::to_string(v.size()));
    }
    for (double e : v) {
        if (!std::isfinite(e)) throw InputError(what + ": non-finite coefficient");
    }
}

void check_matrix(const Matrix& m, int n, const std::string& what) {
    if (static_cast<int>(m.size()) != n) {
        throw InputError(what + ": expected " + std::to_string(n) + " rows, got " +
                         std::to_string(m.size()));
    }
    for (int i = 0; i < n; ++i) {
        check_vector(m[i], n, what + "[" + std::to_string(i) + "]");
    }
}

void check_binary_vector(const std::vector<int>& x, int n) {
    if (static_cast<int>(x.size()) != n) {
        throw InputError("x: expected length " + std::to_string(n) + ", got " +
                         std::to_string(x.size()));
    }
    for (int e : x) {
        if (e != 0 && e != 1) throw InputError("x: entries must be 0 or 1");
    }
}

double quad_value(const std::vector<double>& lin, const Matrix& quad, const std::vector<int>& x) {
    const int n = static_cast<int>(x.size());
    double value = 0.0;
    for (int i = 0; i < n; ++i) {
        if (!x[i]) continue;
        value += lin[i];
        const auto& row = quad[i];
        for (int j = 0; j < n; ++j) {
            if (x[j]) value += row[j];
        }
    }
    return value;
}

bool feasible_raw(const ZeroOneQP& qp, const std::vector<int>& x) {
    if (qp.quad_constraint) {
        const auto& qc = *qp.quad_constraint;
        if (quad_value(qc.h, qc.G, x) < qc.g) return false;
    }
    for (const auto& con : qp.x_constraints) {
        double lhs = 0.0;
        for (int j = 0; j < qp.n; ++j) {
            if (x[j]) lhs += con.coeffs[j];
        }
        switch (con.sense) {
            case ConstraintSense::LessEqual:
                if (lhs > con.rhs) return false;
                break;
            case ConstraintSense::Equal:
                if (lhs != con.rhs) return false;
                break;
            case ConstraintSense::GreaterEqual:
                if (lhs < con.rhs) return false;
                break;
        }
    }
    return true;
}

// LP extreme of coeffs . x over [0,1]^n intersected with X's constraints.
double lp_row_extreme(const ZeroOneQP& qp, const std::vector<double>& coeffs, bool maximize) {
    LpProblem p;
    p.num_vars = qp.n;
    p.lower.assign(qp.n, 0.0);
    p.upper.assign(qp.n, 1.0);
    p.objective.resize(qp.n);
    for (int j = 0; j < qp.n; ++j) p.objective[j] = maximize ? -coeffs[j] : coeffs[j];
    for (const auto& con : qp.x_constraints) {
        std::vector<std::pair<int, double>> terms;
        for (int j = 0; j < qp.n; ++j) {
            if (con.coeffs[j] != 0.0) terms.emplace_back(j, con.coeffs[j]);
        }
        p.add_row(std::move(terms), con.sense, con.rhs);
    }
    LpResult res = solve_lp(p);
    if (res.status == LpStatus::Infeasible) {
        throw InfeasibleError("relaxation of X is infeasible");
    }
    if (res.status != LpStatus::Optimal) {
        throw NumericalError(std::string("bound LP failed: ") + to_string(res.status));
    }
    return maximize ? -res.objective : res.objective;
}

void row_box_bounds(const Matrix& m, std::vector<double>& lo, std::vector<double>& hi) {
    const int n = static_cast<int>(m.size());
    lo.assign(n, 0.0);
    hi.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double q = m[i][j];
            if (q < 0.0) lo[i] += q;
            if (q > 0.0) hi[i] += q;
        }
    }
}

}  // namespace

const char* to_string(RelaxationMode mode) {
    return mode == RelaxationMode::Box ? "box" : "lp";
}

void ZeroOneQP::validate() const {
    if (n < 1) throw InputError("n: must be at least 1");
    check_vector(c, n, "c");
    check_matrix(Q, n, "Q");
    if (quad_constraint) {
        check_vector(quad_constraint->h, n, "quad_constraint.h");
        check_matrix(quad_constraint->G, n, "quad_constraint.G");
        if (!std::isfinite(quad_constraint->g)) {
            throw InputError("quad_constraint.g: non-finite value");
        }
    }
    for (std::size_t r = 0; r < x_constraints.size(); ++r) {
        const std::string what = "x_constraints[" + std::to_string(r) + "]";
        check_vector(x_constraints[r].coeffs, n, what + ".coeffs");
        if (!std::isfinite(x_constraints[r].rhs)) throw InputError(what + ".rhs: non-finite value");
    }
}

double evaluate_objective(const ZeroOneQP& qp, const std::vector<int>& x) {
    check_binary_vector(x, qp.n);
    return quad_value(qp.c, qp.Q, x);
}

bool check_feasible(const ZeroOneQP& qp, const std::vector<int>& x) {
    check_binary_vector(x, qp.n);
    return feasible_raw(qp, x);
}

BoundsProfile compute_bounds(const ZeroOneQP& qp, RelaxationMode mode) {
    qp.validate();
    BoundsProfile out;
    out.relaxation_mode = mode;
    out.cuts_available = qp.quad_constraint.has_value();
    if (mode == RelaxationMode::Box) {
        row_box_bounds(qp.Q, out.gamma_min, out.gamma_max);
        if (qp.quad_constraint) {
            row_box_bounds(qp.quad_constraint->G, out.lambda_min, out.lambda_max);
        }
    } else {
        out.gamma_min.resize(qp.n);
        out.gamma_max.resize(qp.n);
        for (int i = 0; i < qp.n; ++i) {
            out.gamma_min[i] = lp_row_extreme(qp, qp.Q[i], false);
            out.gamma_max[i] = lp_row_extreme(qp, qp.Q[i], true);
        }
        if (qp.quad_constraint) {
            out.lambda_min.resize(qp.n);
            out.lambda_max.resize(qp.n);
            for (int i = 0; i < qp.n; ++i) {
                out.lambda_min[i] = lp_row_extreme(qp, qp.quad_constraint->G[i], false);
                out.lambda_max[i] = lp_row_extreme(qp, qp.quad_constraint->G[i], true);
            }
        }
    }
    if (!qp.quad_constraint) {
        out.lambda_min.assign(qp.n, 0.0);
        out.lambda_max.assign(qp.n, 0.0);
    }
    out.w_max = compute_wmax(qp, mode);
    return out;
}

std::vector<double> compute_wmax(const ZeroOneQP& qp, RelaxationMode mode) {
    qp.validate();
    std::vector<double> w(qp.n, 0.0);
    if (!qp.quad_constraint) return w;
    const Matrix& G = qp.quad_constraint->G;
    if (mode == RelaxationMode::Box) {
        for (int i = 0; i < qp.n; ++i) {
            for (int j = 0; j < qp.n; ++j) {
                const double d = G[i][j] - qp.Q[i][j];
                if (d > 0.0) w[i] += d;
            }
        }
    } else {
        std::vector<double> diff(qp.n);
        for (int i = 0; i < qp.n; ++i) {
            for (int j = 0; j < qp.n; ++j) diff[j] = G[i][j] - qp.Q[i][j];
            w[i] = lp_row_extreme(qp, diff, true);
        }
    }
    return w;
}

BruteForceResult brute_force_solve(const ZeroOneQP& qp, int enumeration_cap) {
    qp.validate();
    if (qp.n > enumeration_cap) {
        throw InputError("brute force refused: n=" + std::to_string(qp.n) + " exceeds cap " +
                         std::to_string(enumeration_cap));
    }
    BruteForceResult best;
    std::vector<int> x(qp.n, 0);
    const std::uint64_t total = std::uint64_t{1} << qp.n;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        for (int i = 0; i < qp.n; ++i) {
            x[i] = static_cast<int>((mask >> (qp.n - 1 - i)) & 1ULL);
        }
        if (!feasible_raw(qp, x)) continue;
        const double value = quad_value(qp.c, qp.Q, x);
        if (!best.feasible || value < best.value) {
            best.feasible = true;
            best.x = x;
            best.value = value;
        }
    }
    return best;
}

}
