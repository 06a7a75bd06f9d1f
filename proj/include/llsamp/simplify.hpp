#pragma once

#include <span>
#include <vector>

#include "llsamp/csp.hpp"

namespace llsamp {

struct SimplifiedFormula {
    CspFormula formula;                       // over V \ Lambda(sigma)
    std::vector<VarId> var_to_old;            // new id -> old id
    std::vector<VarId> old_to_new;            // old id -> new id, kNoVar if assigned
    std::vector<ConstraintId> constraint_to_old;
    // Set when a fully assigned, unsatisfied constraint was encountered
    // (only possible for infeasible sigma); such constraints cannot be
    // represented over the remaining variables and are dropped.
    bool infeasible_detected = false;
};

// Phi^sigma: constraints satisfied by sigma removed, assigned variables
// substituted into the rest. STAR variables stay free.
SimplifiedFormula simplify(const CspFormula& f, const PartialAssignment& sigma);

struct Component {
    std::vector<VarId> vars;                 // original ids, ascending
    std::vector<ConstraintId> constraints;   // original ids, ascending
};

// Connected components of the hypergraph of Phi^sigma whose vertex sets
// intersect `seeds` (seeds must be unassigned in sigma). Works lazily on
// the original formula; each unsatisfied constraint lands in exactly one
// component.
std::vector<Component> connected_components(const CspFormula& f, const PartialAssignment& sigma,
                                            std::span<const VarId> seeds);

}  // namespace llsamp
