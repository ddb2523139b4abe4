#pragma once

#include <optional>
#include <vector>

#include "qlin/common.hpp"

namespace qlin {

using Matrix = std::vector<std::vector<double>>;

struct LinearConstraint {
    std::vector<double> coeffs;
    ConstraintSense sense = ConstraintSense::LessEqual;
    double rhs = 0.0;

    bool operator==(const LinearConstraint&) const = default;
};

struct QuadConstraint {
    std::vector<double> h;
    Matrix G;
    double g = 0.0;

    bool operator==(const QuadConstraint&) const = default;
};

/*
 * Problem P: minimize c'x + x'Qx over binary x, subject to one optional
 * quadratic inequality h'x + x'Gx >= g and linear constraints X.
 * Q is stored as given; symmetry is not required.
 */
struct ZeroOneQP {
    int n = 0;
    std::vector<double> c;
    Matrix Q;
    std::optional<QuadConstraint> quad_constraint;
    std::vector<LinearConstraint> x_constraints;

    void validate() const;  // throws InputError

    bool operator==(const ZeroOneQP&) const = default;
};

enum class RelaxationMode { Box, LpOverX };

const char* to_string(RelaxationMode mode);

/*
 * Componentwise extremes of Qx (and Gx) over a relaxation of X, plus the
 * w_max vector feeding the cut family. lambda vectors are zero when the
 * quadratic constraint is absent.
 */
struct BoundsProfile {
    std::vector<double> gamma_min;
    std::vector<double> gamma_max;
    std::vector<double> lambda_min;
    std::vector<double> lambda_max;
    std::vector<double> w_max;
    RelaxationMode relaxation_mode = RelaxationMode::Box;
    bool cuts_available = false;
};

double evaluate_objective(const ZeroOneQP& qp, const std::vector<int>& x);
bool check_feasible(const ZeroOneQP& qp, const std::vector<int>& x);

BoundsProfile compute_bounds(const ZeroOneQP& qp, RelaxationMode mode);
std::vector<double> compute_wmax(const ZeroOneQP& qp, RelaxationMode mode);

inline constexpr int kDefaultEnumerationCap = 24;

struct BruteForceResult {
    bool feasible = false;
    std::vector<int> x;
    double value = 0.0;
};

// Exact oracle: enumerates all 2^n points, ties broken by lexicographically
// smallest x. Refuses instances beyond the enumeration cap.
BruteForceResult brute_force_solve(const ZeroOneQP& qp,
                                   int enumeration_cap = kDefaultEnumerationCap);

}
