#pragma once

#include <map>
#include <string>
#include <vector>

#include "qlin/common.hpp"

namespace qlin {

enum class VarKind { Binary, Continuous };

enum class VarFamily { X, Gamma, Lambda, SPrime, ZPrime, S, Y, Z, EpigraphAux };

const char* to_string(VarFamily family);

struct MilpVariable {
    std::string name;
    VarKind kind = VarKind::Continuous;
    double lower = 0.0;
    double upper = 0.0;
    VarFamily family = VarFamily::EpigraphAux;
};

struct LinearTerm {
    int var = 0;
    double coeff = 0.0;
};

struct MilpConstraint {
    std::string tag;
    std::vector<LinearTerm> terms;
    ConstraintSense sense = ConstraintSense::LessEqual;
    double rhs = 0.0;
};

/*
 * Language-neutral MILP intermediate representation: ordered variables, a
 * linear objective and tagged linear constraints. Produced by the
 * linearizers, consumed by the solver and the LP exporter. Family X
 * variables are binary, every other family is continuous.
 */
struct MilpModel {
    std::string name;
    std::vector<MilpVariable> variables;
    std::vector<double> objective;  // one coefficient per variable
    double objective_offset = 0.0;
    std::vector<MilpConstraint> constraints;

    int add_variable(std::string var_name, VarKind kind, double lower, double upper,
                     VarFamily family);
    // Terms are merged per variable, sorted by index; exact zeros are dropped.
    void add_constraint(std::string tag, std::vector<LinearTerm> terms, ConstraintSense sense,
                        double rhs);
    void set_objective_coeff(int var, double coeff);

    std::vector<int> variables_of_family(VarFamily family) const;

    void validate() const;  // throws InputError on a broken invariant
};

double point_objective(const MilpModel& model, const std::vector<double>& values);

// All rows and variable bounds hold at the point, within tol (binaries are
// checked against [0,1]).
bool point_satisfies(const MilpModel& model, const std::vector<double>& values,
                     double tol = 1e-9);

}
