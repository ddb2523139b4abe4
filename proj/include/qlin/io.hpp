#pragma once

#include <string>
#include <variant>

#include "qlin/milp.hpp"
#include "qlin/qp.hpp"
#include "qlin/threading.hpp"

namespace qlin {

using Instance = std::variant<ZeroOneQP, ThreadingInstance>;

// JSON instance documents, kind "qp01" or "threading". Schema errors name
// the offending path; all type invariants are enforced at parse time.
Instance parse_instance(const std::string& text);
std::string serialize_instance(const Instance& instance);

// Conventional LP text format (Minimize / Subject To / Bounds / Binary /
// End). Byte-stable for a given model; coefficients printed with shortest
// round-trip decimals.
std::string export_lp(const MilpModel& model);

// Reads the exporter's dialect back into a model (variable families inferred
// from name stems, tags from constraint names).
MilpModel parse_lp(const std::string& text);

// Shortest decimal that parses back to exactly the same double.
std::string format_double(double value);

}
