#include "qlin/linearize.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

namespace qlin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string numbered(const char* stem, int i) { return stem + std::to_string(i + 1); }

void check_bounds_match(const ZeroOneQP& qp, const BoundsProfile& b) {
    qp.validate();
    const auto n = static_cast<std::size_t>(qp.n);
    if (b.gamma_min.size() != n || b.gamma_max.size() != n || b.lambda_min.size() != n ||
        b.lambda_max.size() != n || b.w_max.size() != n) {
        throw InputError("bounds profile does not match the instance dimension");
    }
}

std::vector<int> add_binary_x(MilpModel& m, const ZeroOneQP& qp) {
    std::vector<int> x(qp.n);
    for (int i = 0; i < qp.n; ++i) {
        x[i] = m.add_variable(numbered("x", i), VarKind::Binary, 0.0, 1.0, VarFamily::X);
    }
    return x;
}

std::vector<int> add_family(MilpModel& m, const char* stem, int n, double lower, double upper,
                            VarFamily family) {
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) {
        idx[i] = m.add_variable(numbered(stem, i), VarKind::Continuous, lower, upper, family);
    }
    return idx;
}

// row of Q (or G) against the x block, plus extra terms
std::vector<LinearTerm> matrix_row_terms(const Matrix& mat, int i, const std::vector<int>& x,
                                         double scale = 1.0) {
    std::vector<LinearTerm> terms;
    const int n = static_cast<int>(x.size());
    for (int j = 0; j < n; ++j) {
        if (mat[i][j] != 0.0) terms.push_back({x[j], scale * mat[i][j]});
    }
    return terms;
}

void append_x_constraints(MilpModel& m, const ZeroOneQP& qp, const std::vector<int>& x) {
    for (const auto& con : qp.x_constraints) {
        std::vector<LinearTerm> terms;
        for (int j = 0; j < qp.n; ++j) {
            if (con.coeffs[j] != 0.0) terms.push_back({x[j], con.coeffs[j]});
        }
        m.add_constraint("X", std::move(terms), con.sense, con.rhs);
    }
}

}  // namespace

Lemma31Check verify_lemma31(const ZeroOneQP& qp, const BoundsProfile& bounds,
                            const std::vector<int>& x, int row) {
    check_bounds_match(qp, bounds);
    if (static_cast<int>(x.size()) != qp.n) {
        throw InputError("x: expected length " + std::to_string(qp.n));
    }
    for (int e : x) {
        if (e != 0 && e != 1) throw InputError("x: entries must be 0 or 1");
    }
    if (row < 0 || row >= qp.n) {
        throw InputError("row index " + std::to_string(row) + " out of range");
    }
    double qi_x = 0.0;
    for (int j = 0; j < qp.n; ++j) {
        if (x[j]) qi_x += qp.Q[row][j];
    }
    const double gmin = bounds.gamma_min[row];
    const double gmax = bounds.gamma_max[row];
    Lemma31Check out;
    out.lhs = x[row] ? qi_x : 0.0;
    out.rhs_max_form = std::max(gmin * x[row], qi_x + gmax * x[row] - gmax);
    out.rhs_min_form = std::min(gmax * x[row], qi_x + gmin * x[row] - gmin);
    out.holds = out.lhs == out.rhs_max_form && out.lhs == out.rhs_min_form;
    return out;
}

MilpModel linearize_bp(const ZeroOneQP& qp, const BoundsProfile& b) {
    check_bounds_match(qp, b);
    const int n = qp.n;
    const bool quad = qp.quad_constraint.has_value();

    MilpModel m;
    m.name = "bp";
    const auto x = add_binary_x(m, qp);
    const auto gamma = add_family(m, "gamma", n, -kInf, kInf, VarFamily::Gamma);
    std::vector<int> lambda, zp;
    if (quad) lambda = add_family(m, "lambda", n, -kInf, kInf, VarFamily::Lambda);
    const auto sp = add_family(m, "sp", n, -kInf, kInf, VarFamily::SPrime);
    if (quad) zp = add_family(m, "zp", n, -kInf, kInf, VarFamily::ZPrime);

    for (int i = 0; i < n; ++i) m.set_objective_coeff(x[i], qp.c[i]);
    for (int i = 0; i < n; ++i) m.set_objective_coeff(sp[i], 1.0);

    for (int i = 0; i < n; ++i) {
        auto terms = matrix_row_terms(qp.Q, i, x);
        terms.push_back({gamma[i], -1.0});
        m.add_constraint("2.4", std::move(terms), ConstraintSense::Equal, 0.0);
    }
    if (quad) {
        const auto& qc = *qp.quad_constraint;
        std::vector<LinearTerm> terms;
        for (int j = 0; j < n; ++j) {
            if (qc.h[j] != 0.0) terms.push_back({x[j], qc.h[j]});
        }
        for (int i = 0; i < n; ++i) terms.push_back({zp[i], 1.0});
        m.add_constraint("2.5", std::move(terms), ConstraintSense::GreaterEqual, qc.g);
        for (int i = 0; i < n; ++i) {
            auto gx = matrix_row_terms(qc.G, i, x);
            gx.push_back({lambda[i], -1.0});
            m.add_constraint("2.6", std::move(gx), ConstraintSense::Equal, 0.0);
        }
    }
    // sandwich: gamma_min x_i <= s'_i <= gamma_max x_i
    for (int i = 0; i < n; ++i) {
        m.add_constraint("2.7", {{sp[i], 1.0}, {x[i], -b.gamma_min[i]}},
                         ConstraintSense::GreaterEqual, 0.0);
        m.add_constraint("2.7", {{sp[i], 1.0}, {x[i], -b.gamma_max[i]}},
                         ConstraintSense::LessEqual, 0.0);
    }
    // complement sandwich: gamma_min (1-x_i) <= gamma_i - s'_i <= gamma_max (1-x_i)
    for (int i = 0; i < n; ++i) {
        m.add_constraint("2.8", {{gamma[i], 1.0}, {sp[i], -1.0}, {x[i], b.gamma_min[i]}},
                         ConstraintSense::GreaterEqual, b.gamma_min[i]);
        m.add_constraint("2.8", {{gamma[i], 1.0}, {sp[i], -1.0}, {x[i], b.gamma_max[i]}},
                         ConstraintSense::LessEqual, b.gamma_max[i]);
    }
    if (quad) {
        for (int i = 0; i < n; ++i) {
            m.add_constraint("2.9", {{zp[i], 1.0}, {x[i], -b.lambda_min[i]}},
                             ConstraintSense::GreaterEqual, 0.0);
            m.add_constraint("2.9", {{zp[i], 1.0}, {x[i], -b.lambda_max[i]}},
                             ConstraintSense::LessEqual, 0.0);
        }
        for (int i = 0; i < n; ++i) {
            m.add_constraint("2.10", {{lambda[i], 1.0}, {zp[i], -1.0}, {x[i], b.lambda_min[i]}},
                             ConstraintSense::GreaterEqual, b.lambda_min[i]);
            m.add_constraint("2.10", {{lambda[i], 1.0}, {zp[i], -1.0}, {x[i], b.lambda_max[i]}},
                             ConstraintSense::LessEqual, b.lambda_max[i]);
        }
    }
    append_x_constraints(m, qp, x);
    return m;
}

MilpModel linearize_bp_compact(const ZeroOneQP& qp, const BoundsProfile& b) {
    check_bounds_match(qp, b);
    const int n = qp.n;
    const bool quad = qp.quad_constraint.has_value();

    MilpModel m;
    m.name = "compact";
    const auto x = add_binary_x(m, qp);
    const auto s = add_family(m, "s", n, 0.0, kInf, VarFamily::S);
    const auto y = add_family(m, "y", n, 0.0, kInf, VarFamily::Y);
    std::vector<int> z, lambda;
    if (quad) {
        z = add_family(m, "z", n, 0.0, kInf, VarFamily::Z);
        lambda = add_family(m, "lambda", n, -kInf, kInf, VarFamily::Lambda);
    }

    for (int i = 0; i < n; ++i) m.set_objective_coeff(x[i], qp.c[i] + b.gamma_min[i]);
    for (int i = 0; i < n; ++i) m.set_objective_coeff(s[i], 1.0);

    for (int i = 0; i < n; ++i) {
        auto terms = matrix_row_terms(qp.Q, i, x);
        terms.push_back({y[i], -1.0});
        terms.push_back({s[i], -1.0});
        m.add_constraint("2.14", std::move(terms), ConstraintSense::Equal, b.gamma_min[i]);
    }
    if (quad) {
        const auto& qc = *qp.quad_constraint;
        std::vector<LinearTerm> terms;
        for (int j = 0; j < n; ++j) {
            const double coeff = qc.h[j] + b.lambda_min[j];
            if (coeff != 0.0) terms.push_back({x[j], coeff});
        }
        for (int i = 0; i < n; ++i) terms.push_back({z[i], 1.0});
        m.add_constraint("2.15", std::move(terms), ConstraintSense::GreaterEqual, qc.g);
        for (int i = 0; i < n; ++i) {
            auto gx = matrix_row_terms(qc.G, i, x);
            gx.push_back({lambda[i], -1.0});
            m.add_constraint("2.16", std::move(gx), ConstraintSense::Equal, 0.0);
        }
    }
    for (int i = 0; i < n; ++i) {
        const double width = b.gamma_max[i] - b.gamma_min[i];
        m.add_constraint("2.17", {{s[i], 1.0}, {x[i], -width}}, ConstraintSense::LessEqual, 0.0);
    }
    for (int i = 0; i < n; ++i) {
        const double width = b.gamma_max[i] - b.gamma_min[i];
        m.add_constraint("2.18", {{y[i], 1.0}, {x[i], width}}, ConstraintSense::LessEqual, width);
    }
    if (quad) {
        for (int i = 0; i < n; ++i) {
            const double width = b.lambda_max[i] - b.lambda_min[i];
            m.add_constraint("2.19", {{z[i], 1.0}, {x[i], -width}}, ConstraintSense::LessEqual,
                             0.0);
        }
        for (int i = 0; i < n; ++i) {
            const double width = b.lambda_max[i] - b.lambda_min[i];
            m.add_constraint("2.20", {{lambda[i], 1.0}, {z[i], -1.0}},
                             ConstraintSense::GreaterEqual, b.lambda_min[i]);
            m.add_constraint("2.20", {{lambda[i], 1.0}, {z[i], -1.0}, {x[i], width}},
                             ConstraintSense::LessEqual, b.lambda_max[i]);
        }
    }
    append_x_constraints(m, qp, x);
    return m;
}

MilpModel linearize_bp_relaxed(const ZeroOneQP& qp, const BoundsProfile& b) {
    check_bounds_match(qp, b);
    const int n = qp.n;
    const bool quad = qp.quad_constraint.has_value();

    MilpModel m;
    m.name = "relaxed";
    const auto x = add_binary_x(m, qp);
    const auto s = add_family(m, "s", n, 0.0, kInf, VarFamily::S);
    const auto y = add_family(m, "y", n, 0.0, kInf, VarFamily::Y);
    std::vector<int> z;
    if (quad) z = add_family(m, "z", n, 0.0, kInf, VarFamily::Z);

    for (int i = 0; i < n; ++i) m.set_objective_coeff(x[i], qp.c[i] + b.gamma_min[i]);
    for (int i = 0; i < n; ++i) m.set_objective_coeff(s[i], 1.0);

    for (int i = 0; i < n; ++i) {
        auto terms = matrix_row_terms(qp.Q, i, x);
        terms.push_back({y[i], -1.0});
        terms.push_back({s[i], -1.0});
        m.add_constraint("2.24", std::move(terms), ConstraintSense::Equal, b.gamma_min[i]);
    }
    for (int i = 0; i < n; ++i) {
        const double width = b.gamma_max[i] - b.gamma_min[i];
        m.add_constraint("2.25", {{y[i], 1.0}, {x[i], width}}, ConstraintSense::LessEqual, width);
    }
    if (quad) {
        const auto& qc = *qp.quad_constraint;
        std::vector<LinearTerm> terms;
        for (int j = 0; j < n; ++j) {
            const double coeff = qc.h[j] + b.lambda_min[j];
            if (coeff != 0.0) terms.push_back({x[j], coeff});
        }
        for (int i = 0; i < n; ++i) terms.push_back({z[i], 1.0});
        m.add_constraint("2.27", std::move(terms), ConstraintSense::GreaterEqual, qc.g);
        for (int i = 0; i < n; ++i) {
            auto gx = matrix_row_terms(qc.G, i, x);
            gx.push_back({z[i], -1.0});
            m.add_constraint("2.28", std::move(gx), ConstraintSense::GreaterEqual,
                             b.lambda_min[i]);
        }
        for (int i = 0; i < n; ++i) {
            const double width = b.lambda_max[i] - b.lambda_min[i];
            m.add_constraint("2.29", {{z[i], 1.0}, {x[i], -width}}, ConstraintSense::LessEqual,
                             0.0);
        }
    }
    append_x_constraints(m, qp, x);
    return m;
}

MilpModel add_sherali_cuts(MilpModel model, const ZeroOneQP& qp, const BoundsProfile& b) {
    check_bounds_match(qp, b);
    if (!qp.quad_constraint) {
        throw InputError("cuts require the quadratic constraint; none present");
    }
    const auto x = model.variables_of_family(VarFamily::X);
    const auto s = model.variables_of_family(VarFamily::S);
    const auto z = model.variables_of_family(VarFamily::Z);
    const auto n = static_cast<std::size_t>(qp.n);
    if (x.size() != n || s.size() != n || z.size() != n) {
        throw InputError("cuts expect a relaxed-form model with x, s and z blocks");
    }
    for (int i = 0; i < qp.n; ++i) {
        const double coeff = b.lambda_min[i] - b.gamma_min[i] - b.w_max[i];
        model.add_constraint("cut-2.31", {{x[i], coeff}, {s[i], -1.0}, {z[i], 1.0}},
                             ConstraintSense::LessEqual, 0.0);
    }
    model.name = "relaxed-cuts";
    return model;
}

MilpModel linearize_piecewise(const ZeroOneQP& qp, const BoundsProfile& b) {
    check_bounds_match(qp, b);
    const int n = qp.n;
    const bool quad = qp.quad_constraint.has_value();

    MilpModel m;
    m.name = "piecewise";
    const auto x = add_binary_x(m, qp);
    const auto s = add_family(m, "s", n, -kInf, kInf, VarFamily::S);
    std::vector<int> z;
    if (quad) z = add_family(m, "z", n, -kInf, kInf, VarFamily::Z);

    for (int i = 0; i < n; ++i) m.set_objective_coeff(x[i], qp.c[i]);
    for (int i = 0; i < n; ++i) m.set_objective_coeff(s[i], 1.0);

    // epigraph of max{gamma_min x_i, Q_i x + gamma_max x_i - gamma_max}
    for (int i = 0; i < n; ++i) {
        m.add_constraint("3.6", {{s[i], 1.0}, {x[i], -b.gamma_min[i]}},
                         ConstraintSense::GreaterEqual, 0.0);
        auto terms = matrix_row_terms(qp.Q, i, x, -1.0);
        terms.push_back({s[i], 1.0});
        terms.push_back({x[i], -b.gamma_max[i]});
        m.add_constraint("3.6", std::move(terms), ConstraintSense::GreaterEqual,
                         -b.gamma_max[i]);
    }
    if (quad) {
        const auto& qc = *qp.quad_constraint;
        std::vector<LinearTerm> terms;
        for (int j = 0; j < n; ++j) {
            if (qc.h[j] != 0.0) terms.push_back({x[j], qc.h[j]});
        }
        for (int i = 0; i < n; ++i) terms.push_back({z[i], 1.0});
        m.add_constraint("3.9", std::move(terms), ConstraintSense::GreaterEqual, qc.g);
        for (int i = 0; i < n; ++i) {
            m.add_constraint("3.10", {{z[i], 1.0}, {x[i], -b.lambda_max[i]}},
                             ConstraintSense::LessEqual, 0.0);
        }
        for (int i = 0; i < n; ++i) {
            auto gx = matrix_row_terms(qc.G, i, x, -1.0);
            gx.push_back({z[i], 1.0});
            gx.push_back({x[i], -b.lambda_min[i]});
            m.add_constraint("3.11", std::move(gx), ConstraintSense::LessEqual,
                             -b.lambda_min[i]);
        }
    }
    append_x_constraints(m, qp, x);
    return m;
}

LinearizationReport size_report(const MilpModel& model) {
    LinearizationReport out;
    out.method = model.name;
    out.variable_count = static_cast<int>(model.variables.size());
    out.constraint_count = static_cast<int>(model.constraints.size());
    for (const auto& con : model.constraints) ++out.constraints_by_tag[con.tag];
    return out;
}

const char* to_string(Formulation formulation) {
    switch (formulation) {
        case Formulation::Bp: return "bp";
        case Formulation::Compact: return "compact";
        case Formulation::Relaxed: return "relaxed";
        case Formulation::RelaxedCuts: return "relaxed-cuts";
        case Formulation::Piecewise: return "piecewise";
    }
    return "?";
}

Formulation formulation_from_string(const std::string& text) {
    if (text == "bp") return Formulation::Bp;
    if (text == "compact") return Formulation::Compact;
    if (text == "relaxed") return Formulation::Relaxed;
    if (text == "relaxed-cuts") return Formulation::RelaxedCuts;
    if (text == "piecewise") return Formulation::Piecewise;
    throw InputError("method: expected bp|compact|relaxed|relaxed-cuts|piecewise, got '" + text +
                     "'");
}

MilpModel build_formulation(const ZeroOneQP& qp, const BoundsProfile& bounds,
                            Formulation formulation) {
    switch (formulation) {
        case Formulation::Bp: return linearize_bp(qp, bounds);
        case Formulation::Compact: return linearize_bp_compact(qp, bounds);
        case Formulation::Relaxed: return linearize_bp_relaxed(qp, bounds);
        case Formulation::RelaxedCuts: {
            MilpModel m = linearize_bp_relaxed(qp, bounds);
            if (qp.quad_constraint) return add_sherali_cuts(std::move(m), qp, bounds);
            m.name = "relaxed-cuts";
            return m;
        }
        case Formulation::Piecewise: return linearize_piecewise(qp, bounds);
    }
    throw InputError("unknown formulation");
}

std::vector<double> bp_equivalence_lift(const ZeroOneQP& qp, const MilpModel& bp_model,
                                        const std::vector<int>& x) {
    if (static_cast<int>(x.size()) != qp.n) {
        throw InputError("x: expected length " + std::to_string(qp.n));
    }
    const auto xs = bp_model.variables_of_family(VarFamily::X);
    const auto gammas = bp_model.variables_of_family(VarFamily::Gamma);
    const auto lambdas = bp_model.variables_of_family(VarFamily::Lambda);
    const auto sps = bp_model.variables_of_family(VarFamily::SPrime);
    const auto zps = bp_model.variables_of_family(VarFamily::ZPrime);
    const auto n = static_cast<std::size_t>(qp.n);
    if (xs.size() != n || gammas.size() != n || sps.size() != n ||
        (qp.quad_constraint && (lambdas.size() != n || zps.size() != n))) {
        throw InputError("lift expects the bp model of this instance");
    }
    std::vector<double> values(bp_model.variables.size(), 0.0);
    for (int i = 0; i < qp.n; ++i) {
        values[xs[i]] = x[i];
        double qx = 0.0;
        for (int j = 0; j < qp.n; ++j) {
            if (x[j]) qx += qp.Q[i][j];
        }
        values[gammas[i]] = qx;
        values[sps[i]] = x[i] ? qx : 0.0;
        if (qp.quad_constraint) {
            double gx = 0.0;
            for (int j = 0; j < qp.n; ++j) {
                if (x[j]) gx += qp.quad_constraint->G[i][j];
            }
            values[lambdas[i]] = gx;
            values[zps[i]] = x[i] ? gx : 0.0;
        }
    }
    return values;
}

}
