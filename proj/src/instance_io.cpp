#include "llsamp/instance_io.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "llsamp/errors.hpp"
#include "llsamp/families.hpp"

namespace llsamp {

using ordered_json = nlohmann::ordered_json;

namespace {

VarId lookup_var(const std::unordered_map<std::string, VarId>& index, const std::string& name) {
    auto it = index.find(name);
    if (it == index.end()) throw ParseError("unknown variable name: " + name);
    return it->second;
}

}  // namespace

CspFormula parse_json_instance(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    try {
        std::vector<Variable> vars;
        std::unordered_map<std::string, VarId> index;
        for (const auto& jv : doc.at("variables")) {
            Variable v;
            v.name = jv.at("name").get<std::string>();
            for (const auto& lab : jv.at("domain")) v.labels.push_back(lab.get<std::string>());
            if (index.count(v.name)) throw ParseError("duplicate variable name: " + v.name);
            index[v.name] = static_cast<VarId>(vars.size());
            vars.push_back(std::move(v));
        }
        if (vars.empty()) throw ParseError("instance has no variables");
        std::vector<ConstraintPayload> payloads;
        if (doc.contains("constraints")) {
            for (const auto& jc : doc.at("constraints")) {
                const std::string type = jc.at("type").get<std::string>();
                std::vector<VarId> scope;
                for (const auto& name : jc.at("vars"))
                    scope.push_back(lookup_var(index, name.get<std::string>()));
                if (type == "robust_sat") {
                    std::vector<Literal> lits;
                    const auto& neg = jc.at("negated");
                    if (neg.size() != scope.size()) throw ParseError("negated length mismatch");
                    for (size_t i = 0; i < scope.size(); ++i)
                        lits.push_back({scope[i], neg[i].get<bool>()});
                    payloads.emplace_back(make_robust_sat(std::move(lits), jc.at("delta").get<double>()));
                } else if (type == "robust_coloring") {
                    payloads.emplace_back(
                        make_robust_coloring(std::move(scope), jc.at("delta").get<double>()));
                } else if (type == "table") {
                    TableConstraint tab;
                    tab.scope = std::move(scope);
                    for (const auto& row : jc.at("forbidden")) {
                        std::vector<int> r;
                        for (const auto& x : row) r.push_back(x.get<int>());
                        tab.forbidden.push_back(std::move(r));
                    }
                    payloads.emplace_back(std::move(tab));
                } else {
                    throw ParseError("unknown constraint type: " + type);
                }
            }
        }
        return CspFormula(std::move(vars), std::move(payloads));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed instance document: ") + e.what());
    }
}

std::string serialize_json_instance(const CspFormula& f) {
    ordered_json doc;
    doc["variables"] = ordered_json::array();
    for (const Variable& v : f.variables()) {
        ordered_json jv;
        jv["name"] = v.name;
        jv["domain"] = v.labels;
        doc["variables"].push_back(std::move(jv));
    }
    doc["constraints"] = ordered_json::array();
    for (ConstraintId c = 0; c < f.num_constraints(); ++c) {
        const ConstraintPayload& p = f.constraint(c).payload;
        ordered_json jc;
        if (const auto* sat = std::get_if<RobustSatClause>(&p)) {
            jc["type"] = "robust_sat";
            ordered_json names = ordered_json::array(), neg = ordered_json::array();
            for (const Literal& l : sat->literals) {
                names.push_back(f.variable(l.var).name);
                neg.push_back(l.negated);
            }
            jc["vars"] = std::move(names);
            jc["negated"] = std::move(neg);
            jc["delta"] = sat->delta;
        } else if (const auto* col = std::get_if<RobustColoringEdge>(&p)) {
            bool offsets = false;
            for (int o : col->color_offsets) offsets |= o != 0;
            if (offsets) throw Error("cannot serialize a simplified coloring constraint");
            jc["type"] = "robust_coloring";
            ordered_json names = ordered_json::array();
            for (VarId v : col->vertices) names.push_back(f.variable(v).name);
            jc["vars"] = std::move(names);
            jc["delta"] = col->delta;
        } else {
            const auto& tab = std::get<TableConstraint>(p);
            jc["type"] = "table";
            ordered_json names = ordered_json::array();
            for (VarId v : tab.scope) names.push_back(f.variable(v).name);
            jc["vars"] = std::move(names);
            jc["forbidden"] = tab.forbidden;
        }
        doc["constraints"].push_back(std::move(jc));
    }
    return doc.dump(2) + "\n";
}

CspFormula parse_dimacs_rsat(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int n = -1, m = -1;
    double delta = 0.0;
    std::vector<ConstraintPayload> payloads;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'c') continue;
        std::istringstream ls(line);
        if (line[0] == 'p') {
            std::string p, fmt;
            if (!(ls >> p >> fmt >> n >> m >> delta) || fmt != "rsat")
                throw ParseError("bad DIMACS header, expected: p rsat <n> <m> <delta>");
            if (n < 1 || m < 0) throw ParseError("bad DIMACS header counts");
            continue;
        }
        if (n < 0) throw ParseError("clause line before header");
        std::vector<Literal> lits;
        long lit;
        bool terminated = false;
        while (ls >> lit) {
            if (lit == 0) {
                terminated = true;
                break;
            }
            long v = lit > 0 ? lit : -lit;
            if (v > n) throw ParseError("literal out of range: " + std::to_string(lit));
            lits.push_back({static_cast<VarId>(v - 1), lit < 0});
        }
        if (!terminated) throw ParseError("clause line not terminated by 0");
        if (!lits.empty()) payloads.emplace_back(make_robust_sat(std::move(lits), delta));
    }
    if (n < 0) throw ParseError("missing DIMACS header");
    if (m >= 0 && static_cast<size_t>(m) != payloads.size())
        throw ParseError("clause count mismatch: header says " + std::to_string(m) + ", found " +
                         std::to_string(payloads.size()));
    std::vector<Variable> vars(n);
    for (int i = 0; i < n; ++i) vars[i] = {"x" + std::to_string(i + 1), {"false", "true"}};
    return CspFormula(std::move(vars), std::move(payloads));
}

CspFormula parse_instance(const std::string& text) {
    for (char ch : text) {
        if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') continue;
        if (ch == '{') return parse_json_instance(text);
        break;
    }
    return parse_dimacs_rsat(text);
}

CspFormula load_instance(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open instance file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

std::string assignment_to_jsonl(const CspFormula& f, const std::vector<int>& values) {
    ordered_json line;
    for (VarId v = 0; v < f.num_variables(); ++v)
        line[f.variable(v).name] = f.variable(v).labels[values[v]];
    return line.dump();
}

std::vector<int> assignment_from_jsonl(const CspFormula& f, const std::string& text) {
    ordered_json line;
    try {
        line = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid assignment line: ") + e.what());
    }
    std::vector<int> values(f.num_variables(), -1);
    for (VarId v = 0; v < f.num_variables(); ++v) {
        const Variable& var = f.variable(v);
        if (!line.contains(var.name)) throw ParseError("assignment missing variable " + var.name);
        const std::string label = line.at(var.name).get<std::string>();
        int x = -1;
        for (size_t i = 0; i < var.labels.size(); ++i)
            if (var.labels[i] == label) x = static_cast<int>(i);
        if (x < 0) throw ParseError("label " + label + " not in domain of " + var.name);
        values[v] = x;
    }
    return values;
}

}  // namespace llsamp
