#include "qlin/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cctype>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace qlin {

namespace {

using json = nlohmann::ordered_json;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string join_path(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

const json& member(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.is_object()) {
        throw InputError((path.empty() ? std::string("document") : path) + ": expected object");
    }
    const auto it = obj.find(key);
    if (it == obj.end()) throw InputError(join_path(path, key) + ": missing");
    return *it;
}

const json* optional_member(const json& obj, const std::string& key) {
    if (!obj.is_object()) return nullptr;
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return nullptr;
    return &*it;
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw InputError(path + ": expected number");
    return v.get<double>();
}

long long as_integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw InputError(path + ": expected integer");
    return v.get<long long>();
}

std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) throw InputError(path + ": expected string");
    return v.get<std::string>();
}

std::vector<double> as_vector(const json& v, const std::string& path, int expected) {
    if (!v.is_array()) throw InputError(path + ": expected array");
    if (expected >= 0 && static_cast<int>(v.size()) != expected) {
        throw InputError(path + ": expected length " + std::to_string(expected) + ", got " +
                         std::to_string(v.size()));
    }
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

Matrix as_matrix(const json& v, const std::string& path, int rows, int cols) {
    if (!v.is_array()) throw InputError(path + ": expected array of rows");
    if (static_cast<int>(v.size()) != rows) {
        throw InputError(path + ": expected " + std::to_string(rows) + " rows, got " +
                         std::to_string(v.size()));
    }
    Matrix out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(as_vector(v[i], path + "[" + std::to_string(i) + "]", cols));
    }
    return out;
}

ZeroOneQP parse_qp(const json& doc) {
    ZeroOneQP qp;
    qp.n = static_cast<int>(as_integer(member(doc, "", "n"), "n"));
    if (qp.n < 1) throw InputError("n: must be at least 1");
    qp.c = as_vector(member(doc, "", "c"), "c", qp.n);
    qp.Q = as_matrix(member(doc, "", "Q"), "Q", qp.n, qp.n);
    if (const json* qc = optional_member(doc, "quad_constraint")) {
        QuadConstraint out;
        out.h = as_vector(member(*qc, "quad_constraint", "h"), "quad_constraint.h", qp.n);
        out.G = as_matrix(member(*qc, "quad_constraint", "G"), "quad_constraint.G", qp.n, qp.n);
        out.g = as_number(member(*qc, "quad_constraint", "g"), "quad_constraint.g");
        qp.quad_constraint = std::move(out);
    }
    if (const json* cons = optional_member(doc, "x_constraints")) {
        if (!cons->is_array()) throw InputError("x_constraints: expected array");
        for (std::size_t r = 0; r < cons->size(); ++r) {
            const std::string path = "x_constraints[" + std::to_string(r) + "]";
            const json& c = (*cons)[r];
            LinearConstraint con;
            con.coeffs = as_vector(member(c, path, "coeffs"), path + ".coeffs", qp.n);
            const std::string sense_text =
                as_string(member(c, path, "sense"), path + ".sense");
            try {
                con.sense = sense_from_string(sense_text);
            } catch (const InputError&) {
                throw InputError(path + ".sense: expected one of <=, =, >=, got '" + sense_text +
                                 "'");
            }
            con.rhs = as_number(member(c, path, "rhs"), path + ".rhs");
            qp.x_constraints.push_back(std::move(con));
        }
    }
    qp.validate();
    return qp;
}

ThreadingInstance parse_threading(const json& doc) {
    ThreadingInstance inst;
    inst.segment_count = static_cast<int>(as_integer(member(doc, "", "m"), "m"));
    inst.sequence_length = as_integer(member(doc, "", "N"), "N");
    const json& lengths = member(doc, "", "lengths");
    if (!lengths.is_array()) throw InputError("lengths: expected array");
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        inst.lengths.push_back(as_integer(lengths[i], "lengths[" + std::to_string(i) + "]"));
    }
    if (const json* edges = optional_member(doc, "edges")) {
        if (!edges->is_array()) throw InputError("edges: expected array");
        for (std::size_t i = 0; i < edges->size(); ++i) {
            const std::string path = "edges[" + std::to_string(i) + "]";
            const json& e = (*edges)[i];
            if (!e.is_array() || e.size() != 2) throw InputError(path + ": expected pair [i,k]");
            inst.edges.emplace_back(static_cast<int>(as_integer(e[0], path + "[0]")),
                                    static_cast<int>(as_integer(e[1], path + "[1]")));
        }
    }
    // dimension check happens inside validate(), via derive_positions
    const json& scores = member(doc, "", "linear_scores");
    if (!scores.is_array()) throw InputError("linear_scores: expected array of rows");
    for (std::size_t i = 0; i < scores.size(); ++i) {
        inst.linear_scores.push_back(
            as_vector(scores[i], "linear_scores[" + std::to_string(i) + "]", -1));
    }
    if (const json* pairs = optional_member(doc, "pair_scores")) {
        if (!pairs->is_array()) throw InputError("pair_scores: expected array");
        for (std::size_t r = 0; r < pairs->size(); ++r) {
            const std::string path = "pair_scores[" + std::to_string(r) + "]";
            const json& p = (*pairs)[r];
            PairKey key;
            key.i = static_cast<int>(as_integer(member(p, path, "i"), path + ".i"));
            key.j = static_cast<int>(as_integer(member(p, path, "j"), path + ".j"));
            key.k = static_cast<int>(as_integer(member(p, path, "k"), path + ".k"));
            key.l = static_cast<int>(as_integer(member(p, path, "l"), path + ".l"));
            const double value = as_number(member(p, path, "value"), path + ".value");
            if (!inst.pair_scores.emplace(key, value).second) {
                throw InputError(path + ": duplicate pair key");
            }
        }
    }
    if (const json* gaps = optional_member(doc, "max_gap")) {
        if (!gaps->is_array()) throw InputError("max_gap: expected array");
        std::vector<long long> out;
        for (std::size_t i = 0; i < gaps->size(); ++i) {
            out.push_back(as_integer((*gaps)[i], "max_gap[" + std::to_string(i) + "]"));
        }
        inst.max_gap = std::move(out);
    }
    inst.validate();
    return inst;
}

json vector_to_json(const std::vector<double>& v) {
    json out = json::array();
    for (double e : v) out.push_back(e);
    return out;
}

json matrix_to_json(const Matrix& m) {
    json out = json::array();
    for (const auto& row : m) out.push_back(vector_to_json(row));
    return out;
}

json qp_to_json(const ZeroOneQP& qp) {
    json doc;
    doc["kind"] = "qp01";
    doc["n"] = qp.n;
    doc["c"] = vector_to_json(qp.c);
    doc["Q"] = matrix_to_json(qp.Q);
    if (qp.quad_constraint) {
        json qc;
        qc["h"] = vector_to_json(qp.quad_constraint->h);
        qc["G"] = matrix_to_json(qp.quad_constraint->G);
        qc["g"] = qp.quad_constraint->g;
        doc["quad_constraint"] = std::move(qc);
    }
    if (!qp.x_constraints.empty()) {
        json cons = json::array();
        for (const auto& c : qp.x_constraints) {
            json one;
            one["coeffs"] = vector_to_json(c.coeffs);
            one["sense"] = to_string(c.sense);
            one["rhs"] = c.rhs;
            cons.push_back(std::move(one));
        }
        doc["x_constraints"] = std::move(cons);
    }
    return doc;
}

json threading_to_json(const ThreadingInstance& inst) {
    json doc;
    doc["kind"] = "threading";
    doc["m"] = inst.segment_count;
    doc["N"] = inst.sequence_length;
    doc["lengths"] = inst.lengths;
    if (!inst.edges.empty()) {
        json edges = json::array();
        for (const auto& [i, k] : inst.edges) edges.push_back(json::array({i, k}));
        doc["edges"] = std::move(edges);
    }
    json scores = json::array();
    for (const auto& row : inst.linear_scores) scores.push_back(vector_to_json(row));
    doc["linear_scores"] = std::move(scores);
    if (!inst.pair_scores.empty()) {
        json pairs = json::array();
        for (const auto& [key, value] : inst.pair_scores) {
            json one;
            one["i"] = key.i;
            one["j"] = key.j;
            one["k"] = key.k;
            one["l"] = key.l;
            one["value"] = value;
            pairs.push_back(std::move(one));
        }
        doc["pair_scores"] = std::move(pairs);
    }
    if (inst.max_gap) doc["max_gap"] = *inst.max_gap;
    return doc;
}

// --- LP text format ---

void append_term(std::string& out, double coeff, const std::string& name, bool& first) {
    if (coeff == 0.0) return;
    const double mag = std::abs(coeff);
    if (first) {
        out += coeff < 0 ? " - " : " ";
        first = false;
    } else {
        out += coeff < 0 ? " - " : " + ";
    }
    if (mag != 1.0) {
        out += format_double(mag);
        out += " ";
    }
    out += name;
}

struct LpToken {
    enum Kind { Sign, Number, Name, Sense, Colon } kind;
    std::string text;
};

bool is_name_start(char ch) {
    return std::isalpha(static_cast<unsigned char>(ch)) || ch == '_';
}

std::vector<LpToken> tokenize_lp_line(const std::string& line) {
    std::vector<LpToken> out;
    std::size_t i = 0;
    while (i < line.size()) {
        const char ch = line[i];
        if (std::isspace(static_cast<unsigned char>(ch))) {
            ++i;
            continue;
        }
        if (ch == '\\') break;  // comment to end of line
        if (ch == ':') {
            out.push_back({LpToken::Colon, ":"});
            ++i;
            continue;
        }
        if (ch == '<' || ch == '>' || ch == '=') {
            std::string s(1, ch);
            if (i + 1 < line.size() && line[i + 1] == '=') {
                s += '=';
                ++i;
            }
            out.push_back({LpToken::Sense, s});
            ++i;
            continue;
        }
        if (ch == '+' || ch == '-') {
            out.push_back({LpToken::Sign, std::string(1, ch)});
            ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
            std::size_t j = i;
            while (j < line.size() &&
                   (std::isdigit(static_cast<unsigned char>(line[j])) || line[j] == '.' ||
                    line[j] == 'e' || line[j] == 'E' ||
                    ((line[j] == '+' || line[j] == '-') && j > i &&
                     (line[j - 1] == 'e' || line[j - 1] == 'E')))) {
                ++j;
            }
            out.push_back({LpToken::Number, line.substr(i, j - i)});
            i = j;
            continue;
        }
        if (is_name_start(ch)) {
            std::size_t j = i;
            while (j < line.size() && (std::isalnum(static_cast<unsigned char>(line[j])) ||
                                       line[j] == '_' || line[j] == '.')) {
                ++j;
            }
            out.push_back({LpToken::Name, line.substr(i, j - i)});
            i = j;
            continue;
        }
        throw InputError(std::string("lp: unexpected character '") + ch + "'");
    }
    return out;
}

double parse_lp_number(const std::string& text) {
    std::string lowered = text;
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lowered == "infinity" || lowered == "inf") return kInf;
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw InputError("lp: bad number '" + text + "'");
    }
    return value;
}

// family X is assigned by the Binary section, not by name
VarFamily family_from_name(const std::string& name) {
    static constexpr std::pair<const char*, VarFamily> stems[] = {
        {"gamma", VarFamily::Gamma}, {"lambda", VarFamily::Lambda},
        {"sp", VarFamily::SPrime},   {"zp", VarFamily::ZPrime},
        {"y", VarFamily::Y},         {"z", VarFamily::Z},
        {"s", VarFamily::S},
    };
    for (const auto& [stem, family] : stems) {
        const std::size_t len = std::char_traits<char>::length(stem);
        if (name.size() > len && name.compare(0, len, stem) == 0 &&
            std::all_of(name.begin() + len, name.end(),
                        [](unsigned char c) { return std::isdigit(c); })) {
            return family;
        }
    }
    return VarFamily::EpigraphAux;
}

std::string tag_from_constraint_name(const std::string& name) {
    if (name.size() > 1 && name.front() == 'c') {
        const auto us = name.rfind('_');
        if (us != std::string::npos && us > 1) return name.substr(1, us - 1);
    }
    return name;
}

}  // namespace

Instance parse_instance(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("invalid JSON: ") + e.what());
    }
    const std::string kind = as_string(member(doc, "", "kind"), "kind");
    if (kind == "qp01") return parse_qp(doc);
    if (kind == "threading") return parse_threading(doc);
    throw InputError("kind: unknown value '" + kind + "'");
}

std::string serialize_instance(const Instance& instance) {
    const json doc = std::holds_alternative<ZeroOneQP>(instance)
                         ? qp_to_json(std::get<ZeroOneQP>(instance))
                         : threading_to_json(std::get<ThreadingInstance>(instance));
    return doc.dump(2) + "\n";
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string export_lp(const MilpModel& model) {
    model.validate();
    std::string out = "Minimize\n obj:";
    bool first = true;
    for (std::size_t j = 0; j < model.variables.size(); ++j) {
        append_term(out, model.objective[j], model.variables[j].name, first);
    }
    if (model.objective_offset != 0.0) {
        out += first ? " " : " + ";
        out += format_double(model.objective_offset);
        first = false;
    }
    out += "\nSubject To\n";
    std::map<std::string, int> ordinal;
    for (const auto& con : model.constraints) {
        out += " c" + con.tag + "_" + std::to_string(++ordinal[con.tag]) + ":";
        bool row_first = true;
        for (const auto& t : con.terms) {
            append_term(out, t.coeff, model.variables[t.var].name, row_first);
        }
        if (row_first) out += " 0";
        out += std::string(" ") + to_string(con.sense) + " " + format_double(con.rhs) + "\n";
    }
    std::string bounds;
    for (const auto& v : model.variables) {
        if (v.kind == VarKind::Binary) continue;
        const double l = v.lower;
        const double u = v.upper;
        if (l == 0.0 && u == kInf) continue;
        if (l == -kInf && u == kInf) {
            bounds += " " + v.name + " free\n";
        } else if (l == u) {
            bounds += " " + v.name + " = " + format_double(l) + "\n";
        } else if (l == -kInf) {
            bounds += " -infinity <= " + v.name + " <= " + format_double(u) + "\n";
        } else if (u == kInf) {
            bounds += " " + v.name + " >= " + format_double(l) + "\n";
        } else {
            bounds += " " + format_double(l) + " <= " + v.name + " <= " + format_double(u) + "\n";
        }
    }
    if (!bounds.empty()) out += "Bounds\n" + bounds;
    std::string binaries;
    for (const auto& v : model.variables) {
        if (v.kind == VarKind::Binary) binaries += " " + v.name + "\n";
    }
    if (!binaries.empty()) out += "Binary\n" + binaries;
    out += "End\n";
    return out;
}

MilpModel parse_lp(const std::string& text) {
    MilpModel model;
    model.name = "parsed";
    std::map<std::string, int> index;

    const auto intern = [&](const std::string& name) {
        const auto it = index.find(name);
        if (it != index.end()) return it->second;
        const int id = model.add_variable(name, VarKind::Continuous, 0.0, kInf,
                                          family_from_name(name));
        index.emplace(name, id);
        return id;
    };

    enum class Section { None, Objective, Constraints, Bounds, Binary, Done };
    Section section = Section::None;

    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t\r"));
        trimmed.erase(trimmed.find_last_not_of(" \t\r") + 1);
        if (trimmed.empty() || trimmed[0] == '\\') continue;
        std::string lowered = trimmed;
        std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (lowered == "minimize" || lowered == "min") {
            section = Section::Objective;
            continue;
        }
        if (lowered == "subject to" || lowered == "st" || lowered == "s.t.") {
            section = Section::Constraints;
            continue;
        }
        if (lowered == "bounds") {
            section = Section::Bounds;
            continue;
        }
        if (lowered == "binary" || lowered == "binaries") {
            section = Section::Binary;
            continue;
        }
        if (lowered == "end") {
            section = Section::Done;
            break;
        }

        const std::vector<LpToken> tokens = tokenize_lp_line(line);
        if (tokens.empty()) continue;

        if (section == Section::Objective || section == Section::Constraints) {
            std::size_t pos = 0;
            std::string row_name;
            if (tokens.size() >= 2 && tokens[0].kind == LpToken::Name &&
                tokens[1].kind == LpToken::Colon) {
                row_name = tokens[0].text;
                pos = 2;
            }
            std::vector<LinearTerm> terms;
            double constant = 0.0;
            ConstraintSense sense = ConstraintSense::LessEqual;
            bool saw_sense = false;
            double rhs = 0.0;
            double sign = 1.0;
            bool have_coeff = false;
            double coeff = 1.0;
            for (; pos < tokens.size(); ++pos) {
                const LpToken& tok = tokens[pos];
                if (tok.kind == LpToken::Sign) {
                    if (tok.text == "-") sign = -sign;
                } else if (tok.kind == LpToken::Number) {
                    if (saw_sense) {
                        rhs = sign * parse_lp_number(tok.text);
                    } else if (have_coeff) {
                        // dangling previous number was a constant
                        constant += sign * coeff;
                        coeff = parse_lp_number(tok.text);
                    } else {
                        coeff = parse_lp_number(tok.text);
                        have_coeff = true;
                    }
                } else if (tok.kind == LpToken::Name) {
                    const int var = intern(tok.text);
                    terms.push_back({var, sign * (have_coeff ? coeff : 1.0)});
                    sign = 1.0;
                    have_coeff = false;
                    coeff = 1.0;
                } else if (tok.kind == LpToken::Sense) {
                    if (have_coeff) {
                        constant += sign * coeff;
                        have_coeff = false;
                    }
                    sense = sense_from_string(tok.text);
                    saw_sense = true;
                    sign = 1.0;
                } else {
                    throw InputError("lp: unexpected ':' in expression");
                }
            }
            if (have_coeff && !saw_sense) constant += sign * coeff;

            if (section == Section::Objective) {
                for (const auto& t : terms) model.objective[t.var] += t.coeff;
                model.objective_offset += constant;
            } else {
                if (!saw_sense) throw InputError("lp: constraint without a sense: " + line);
                model.add_constraint(tag_from_constraint_name(row_name), std::move(terms), sense,
                                     rhs - constant);
            }
        } else if (section == Section::Bounds) {
            // forms: "x free", "x = v", "x >= l", "l <= x <= u", "-infinity <= x <= u"
            if (tokens.size() == 2 && tokens[0].kind == LpToken::Name &&
                tokens[1].kind == LpToken::Name && tokens[1].text == "free") {
                const int var = intern(tokens[0].text);
                model.variables[var].lower = -kInf;
                model.variables[var].upper = kInf;
                continue;
            }
            double sign = 1.0;
            std::vector<std::string> senses;
            std::size_t pos = 0;
            int var = -1;
            std::vector<double> nums;
            std::vector<bool> var_slots;  // order of name/number appearances
            while (pos < tokens.size()) {
                const LpToken& tok = tokens[pos];
                if (tok.kind == LpToken::Sign) {
                    if (tok.text == "-") sign = -sign;
                } else if (tok.kind == LpToken::Number) {
                    nums.push_back(sign * parse_lp_number(tok.text));
                    var_slots.push_back(false);
                    sign = 1.0;
                } else if (tok.kind == LpToken::Name) {
                    std::string low = tok.text;
                    std::transform(low.begin(), low.end(), low.begin(), [](unsigned char c) {
                        return static_cast<char>(std::tolower(c));
                    });
                    if (low == "infinity" || low == "inf") {
                        nums.push_back(sign * kInf);
                        var_slots.push_back(false);
                    } else {
                        var = intern(tok.text);
                        var_slots.push_back(true);
                    }
                    sign = 1.0;
                } else if (tok.kind == LpToken::Sense) {
                    senses.push_back(tok.text);
                } else {
                    throw InputError("lp: unexpected token in bounds: " + line);
                }
                ++pos;
            }
            if (var < 0) throw InputError("lp: bounds line without a variable: " + line);
            if (senses.size() == 2 && nums.size() == 2) {
                model.variables[var].lower = nums[0];
                model.variables[var].upper = nums[1];
            } else if (senses.size() == 1 && nums.size() == 1) {
                const bool value_first = !var_slots.empty() && !var_slots.front();
                if (senses[0] == "=") {
                    model.variables[var].lower = nums[0];
                    model.variables[var].upper = nums[0];
                } else if ((senses[0] == ">=" && !value_first) ||
                           (senses[0] == "<=" && value_first)) {
                    model.variables[var].lower = nums[0];
                } else {
                    model.variables[var].upper = nums[0];
                }
            } else {
                throw InputError("lp: unsupported bounds line: " + line);
            }
        } else if (section == Section::Binary) {
            for (const auto& tok : tokens) {
                if (tok.kind != LpToken::Name) throw InputError("lp: bad binary line: " + line);
                const int var = intern(tok.text);
                model.variables[var].kind = VarKind::Binary;
                model.variables[var].family = VarFamily::X;
                model.variables[var].lower = 0.0;
                model.variables[var].upper = 1.0;
            }
        } else {
            throw InputError("lp: content outside any section: " + line);
        }
    }
    model.validate();
    return model;
}

}
