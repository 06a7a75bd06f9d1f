#pragma once

// Shared instance builders for tests. All "golden" instances satisfy the
// weak parameter condition and have exhaustively enumerable joint spaces.

#include <string>
#include <vector>

#include "llsamp/csp.hpp"
#include "llsamp/families.hpp"

namespace golden {

using namespace llsamp;

inline std::vector<Variable> boolean_vars(int n, const std::string& prefix = "x") {
    std::vector<Variable> vars(n);
    for (int i = 0; i < n; ++i) vars[i] = {prefix + std::to_string(i), {"false", "true"}};
    return vars;
}

inline std::vector<Variable> ternary_vars(int n, const std::string& prefix = "v") {
    std::vector<Variable> vars(n);
    for (int i = 0; i < n; ++i) vars[i] = {prefix + std::to_string(i), {"r", "g", "b"}};
    return vars;
}

inline std::vector<Literal> positive(std::vector<VarId> ids) {
    std::vector<Literal> lits;
    for (VarId v : ids) lits.push_back({v, false});
    return lits;
}

// Two Boolean variables, one clause x0 | x1. Out of both regimes; used
// with hand-built parameters.
inline CspFormula clause_or() {
    std::vector<ConstraintPayload> cons;
    cons.emplace_back(make_robust_sat(positive({0, 1}), 0.5));
    return CspFormula(boolean_vars(2), std::move(cons));
}

// 12 Boolean variables, two plain k=6 clauses sharing variable 5 plus one
// unconstrained variable; q=2, k=6, Delta=2, p = 2^-6 (weak-accepted).
inline CspFormula chain12() {
    std::vector<ConstraintPayload> cons;
    cons.emplace_back(make_robust_sat(positive({0, 1, 2, 3, 4, 5}), 0.1));
    cons.emplace_back(make_robust_sat(positive({5, 6, 7, 8, 9, 10}), 0.1));
    return CspFormula(boolean_vars(12), std::move(cons));
}

// 10 ternary variables, two 6-uniform hyperedges forbidding monochromatic
// colorings, sharing vertices {4,5}; p = 3^-5, Delta=2, triangle-free.
inline CspFormula color10() {
    std::vector<ConstraintPayload> cons;
    cons.emplace_back(make_robust_coloring({0, 1, 2, 3, 4, 5}, 1.0 / 12));
    cons.emplace_back(make_robust_coloring({4, 5, 6, 7, 8, 9}, 1.0 / 12));
    return CspFormula(ternary_vars(10), std::move(cons));
}

// 12 Boolean variables, one robust k=9 clause requiring >= 2 true literals
// (p = 10/512), three unconstrained variables.
inline CspFormula robust12() {
    std::vector<ConstraintPayload> cons;
    cons.emplace_back(make_robust_sat(positive({0, 1, 2, 3, 4, 5, 6, 7, 8}), 2.0 / 9));
    return CspFormula(boolean_vars(12), std::move(cons));
}

// 8 ternary variables, two disjoint 4-var table constraints forbidding one
// row each; p = 3^-4.
inline CspFormula table8() {
    std::vector<ConstraintPayload> cons;
    cons.emplace_back(TableConstraint{{0, 1, 2, 3}, {{0, 0, 0, 0}}});
    cons.emplace_back(TableConstraint{{4, 5, 6, 7}, {{2, 1, 0, 1}}});
    return CspFormula(ternary_vars(8), std::move(cons));
}

// Mixed domains: 6 ternary variables under one monochromatic-forbidding
// edge plus 6 Boolean variables under one plain k=6 clause (disjoint
// components, Delta=1).
inline CspFormula mix12() {
    std::vector<Variable> vars = ternary_vars(6, "c");
    std::vector<Variable> bvars = boolean_vars(6, "b");
    vars.insert(vars.end(), bvars.begin(), bvars.end());
    std::vector<ConstraintPayload> cons;
    cons.emplace_back(make_robust_coloring({0, 1, 2, 3, 4, 5}, 1.0 / 12));
    cons.emplace_back(make_robust_sat(positive({6, 7, 8, 9, 10, 11}), 0.1));
    return CspFormula(std::move(vars), std::move(cons));
}

struct Golden {
    std::string name;
    CspFormula formula;
};

inline std::vector<Golden> all_golden() {
    std::vector<Golden> out;
    out.push_back({"chain12", chain12()});
    out.push_back({"color10", color10()});
    out.push_back({"robust12", robust12()});
    out.push_back({"table8", table8()});
    out.push_back({"mix12", mix12()});
    return out;
}

// Plain k-SAT arranged in clause pairs sharing one variable: q=2,
// Delta=2, p=2^-k (strong condition holds for k >= 26). Each pair covers
// 2k-1 variables; leftover variables are unconstrained.
inline CspFormula strong_chain(int n, int k = 26) {
    std::vector<ConstraintPayload> cons;
    const double delta = 0.5 / k;  // required_true = 1
    for (int base = 0; base + 2 * k - 1 <= n; base += 2 * k - 1) {
        std::vector<VarId> a(k), b(k);
        for (int i = 0; i < k; ++i) a[i] = base + i;
        for (int i = 0; i < k; ++i) b[i] = base + k - 1 + i;
        cons.emplace_back(make_robust_sat(positive(a), delta));
        cons.emplace_back(make_robust_sat(positive(b), delta));
    }
    return CspFormula(boolean_vars(n), std::move(cons));
}

}  // namespace golden
