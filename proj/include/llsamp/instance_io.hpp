#pragma once

#include <string>
#include <vector>

#include "llsamp/csp.hpp"

namespace llsamp {

// JSON instance document:
//   {"variables": [{"name": "x", "domain": ["false","true"]}, ...],
//    "constraints": [
//       {"type": "robust_sat", "vars": [...], "negated": [...], "delta": d},
//       {"type": "robust_coloring", "vars": [...], "delta": d},
//       {"type": "table", "vars": [...], "forbidden": [[...], ...]}]}
// Forbidden rows are value indices into each variable's domain.
CspFormula parse_json_instance(const std::string& text);
std::string serialize_json_instance(const CspFormula& f);

// Extended DIMACS: "p rsat <n> <m> <delta>" then one clause per line of
// signed 1-based variable indices terminated by 0; 'c' lines are comments.
CspFormula parse_dimacs_rsat(const std::string& text);

// Dispatches on content: a document starting with '{' parses as JSON.
CspFormula parse_instance(const std::string& text);
CspFormula load_instance(const std::string& path);

// One assignment as a JSON-lines record mapping names to domain labels,
// in variable order.
std::string assignment_to_jsonl(const CspFormula& f, const std::vector<int>& values);
std::vector<int> assignment_from_jsonl(const CspFormula& f, const std::string& line);

}  // namespace llsamp
