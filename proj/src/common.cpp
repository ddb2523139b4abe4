#include "qlin/common.hpp"

namespace qlin {

const char* to_string(ConstraintSense sense) {
    switch (sense) {
        case ConstraintSense::LessEqual: return "<=";
        case ConstraintSense::Equal: return "=";
        case ConstraintSense::GreaterEqual: return ">=";
    }
    return "?";
}

ConstraintSense sense_from_string(const std::string& text) {
    if (text == "<=" || text == "<") return ConstraintSense::LessEqual;
    if (text == "=" || text == "==") return ConstraintSense::Equal;
    if (text == ">=" || text == ">") return ConstraintSense::GreaterEqual;
    throw InputError("sense: expected one of <=, =, >=, got '" + text + "'");
}

}
