#pragma once

#include <map>
#include <string>

#include "qlin/milp.hpp"
#include "qlin/qp.hpp"

namespace qlin {

/*
 * Both piecewise-linear forms of the product x_i * (Q_i x) at a binary point:
 * the convex max form, the concave min form, and whether they agree with the
 * product exactly. Exact equality is the expected outcome on integer data.
 */
struct Lemma31Check {
    double lhs = 0.0;
    double rhs_max_form = 0.0;
    double rhs_min_form = 0.0;
    bool holds = false;
};

// `row` is zero-based. Bounds must be valid over a superset of X (box bounds
// or the LP relaxation both qualify).
Lemma31Check verify_lemma31(const ZeroOneQP& qp, const BoundsProfile& bounds,
                            const std::vector<int>& x, int row);

// The five reformulations. Every builder appends X's linear constraints
// verbatim, tagged "X"; when the quadratic constraint is absent the whole
// lambda/z block is omitted rather than emitted as zero rows.
MilpModel linearize_bp(const ZeroOneQP& qp, const BoundsProfile& bounds);
MilpModel linearize_bp_compact(const ZeroOneQP& qp, const BoundsProfile& bounds);
MilpModel linearize_bp_relaxed(const ZeroOneQP& qp, const BoundsProfile& bounds);
MilpModel linearize_piecewise(const ZeroOneQP& qp, const BoundsProfile& bounds);

// Appends the s/z linking cuts to a relaxed-form model. Requires the
// quadratic constraint (the cuts tie the objective and constraint blocks).
MilpModel add_sherali_cuts(MilpModel model, const ZeroOneQP& qp, const BoundsProfile& bounds);

struct LinearizationReport {
    std::string method;
    int variable_count = 0;
    int constraint_count = 0;
    std::map<std::string, int> constraints_by_tag;
};

LinearizationReport size_report(const MilpModel& model);

enum class Formulation { Bp, Compact, Relaxed, RelaxedCuts, Piecewise };

inline constexpr Formulation kAllFormulations[] = {
    Formulation::Bp, Formulation::Compact, Formulation::Relaxed,
    Formulation::RelaxedCuts, Formulation::Piecewise};

const char* to_string(Formulation formulation);
Formulation formulation_from_string(const std::string& text);

// Dispatcher. RelaxedCuts degrades to the plain relaxed model when the
// instance has no quadratic constraint (the cut family is empty there).
MilpModel build_formulation(const ZeroOneQP& qp, const BoundsProfile& bounds,
                            Formulation formulation);

// The point the equivalence argument lifts a binary x to inside the bp
// model: gamma = Qx, lambda = Gx, s'_i = x_i gamma_i, z'_i = x_i lambda_i.
std::vector<double> bp_equivalence_lift(const ZeroOneQP& qp, const MilpModel& bp_model,
                                        const std::vector<int>& x);

}
