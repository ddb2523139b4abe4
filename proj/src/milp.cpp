#include "qlin/milp.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>

namespace qlin {

const char* to_string(VarFamily family) {
    switch (family) {
        case VarFamily::X: return "x";
        case VarFamily::Gamma: return "gamma";
        case VarFamily::Lambda: return "lambda";
        case VarFamily::SPrime: return "s_prime";
        case VarFamily::ZPrime: return "z_prime";
        case VarFamily::S: return "s";
        case VarFamily::Y: return "y";
        case VarFamily::Z: return "z";
        case VarFamily::EpigraphAux: return "epigraph_aux";
    }
    return "?";
}

int MilpModel::add_variable(std::string var_name, VarKind kind, double lower, double upper,
                            VarFamily family) {
    if (family == VarFamily::X && kind != VarKind::Binary) {
        throw InputError("variable " + var_name + ": family x must be binary");
    }
    if (family != VarFamily::X && kind == VarKind::Binary) {
        throw InputError("variable " + var_name + ": only family x may be binary");
    }
    variables.push_back(MilpVariable{std::move(var_name), kind, lower, upper, family});
    objective.push_back(0.0);
    return static_cast<int>(variables.size()) - 1;
}

void MilpModel::add_constraint(std::string tag, std::vector<LinearTerm> terms,
                               ConstraintSense sense, double rhs) {
    std::sort(terms.begin(), terms.end(),
              [](const LinearTerm& a, const LinearTerm& b) { return a.var < b.var; });
    std::vector<LinearTerm> merged;
    merged.reserve(terms.size());
    for (const auto& t : terms) {
        if (!merged.empty() && merged.back().var == t.var) {
            merged.back().coeff += t.coeff;
        } else {
            merged.push_back(t);
        }
    }
    std::erase_if(merged, [](const LinearTerm& t) { return t.coeff == 0.0; });
    constraints.push_back(MilpConstraint{std::move(tag), std::move(merged), sense, rhs});
}

void MilpModel::set_objective_coeff(int var, double coeff) {
    if (var < 0 || var >= static_cast<int>(variables.size())) {
        throw InputError("objective: unknown variable index " + std::to_string(var));
    }
    objective[var] = coeff;
}

std::vector<int> MilpModel::variables_of_family(VarFamily family) const {
    std::vector<int> out;
    for (int j = 0; j < static_cast<int>(variables.size()); ++j) {
        if (variables[j].family == family) out.push_back(j);
    }
    return out;
}

void MilpModel::validate() const {
    const int nv = static_cast<int>(variables.size());
    if (static_cast<int>(objective.size()) != nv) {
        throw InputError("model: objective length does not match variable count");
    }
    std::set<std::string> names;
    for (const auto& v : variables) {
        if (v.name.empty()) throw InputError("model: unnamed variable");
        if (!names.insert(v.name).second) {
            throw InputError("model: duplicate variable name " + v.name);
        }
        const bool is_x = v.family == VarFamily::X;
        if (is_x != (v.kind == VarKind::Binary)) {
            throw InputError("variable " + v.name + ": family/kind mismatch");
        }
        if (v.lower > v.upper) throw InputError("variable " + v.name + ": lower > upper");
    }
    for (double cf : objective) {
        if (std::isnan(cf)) throw InputError("model: NaN objective coefficient");
    }
    for (const auto& con : constraints) {
        if (con.tag.empty()) throw InputError("model: constraint without a tag");
        for (const auto& t : con.terms) {
            if (t.var < 0 || t.var >= nv) {
                throw InputError("constraint " + con.tag + ": unknown variable index");
            }
            if (!std::isfinite(t.coeff)) {
                throw InputError("constraint " + con.tag + ": non-finite coefficient");
            }
        }
        if (!std::isfinite(con.rhs)) throw InputError("constraint " + con.tag + ": non-finite rhs");
    }
}

double point_objective(const MilpModel& model, const std::vector<double>& values) {
    if (values.size() != model.variables.size()) {
        throw InputError("point: expected " + std::to_string(model.variables.size()) + " values");
    }
    double obj = model.objective_offset;
    for (std::size_t j = 0; j < values.size(); ++j) obj += model.objective[j] * values[j];
    return obj;
}

bool point_satisfies(const MilpModel& model, const std::vector<double>& values, double tol) {
    if (values.size() != model.variables.size()) {
        throw InputError("point: expected " + std::to_string(model.variables.size()) + " values");
    }
    for (std::size_t j = 0; j < values.size(); ++j) {
        const auto& v = model.variables[j];
        const double lo = v.kind == VarKind::Binary ? 0.0 : v.lower;
        const double hi = v.kind == VarKind::Binary ? 1.0 : v.upper;
        if (values[j] < lo - tol || values[j] > hi + tol) return false;
    }
    for (const auto& con : model.constraints) {
        double lhs = 0.0;
        for (const auto& t : con.terms) lhs += t.coeff * values[t.var];
        switch (con.sense) {
            case ConstraintSense::LessEqual:
                if (lhs > con.rhs + tol) return false;
                break;
            case ConstraintSense::Equal:
                if (std::abs(lhs - con.rhs) > tol) return false;
                break;
            case ConstraintSense::GreaterEqual:
                if (lhs < con.rhs - tol) return false;
                break;
        }
    }
    return true;
}

}
