#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "llsamp/csp.hpp"
#include "llsamp/rng.hpp"
#include "llsamp/simplify.hpp"
#include "llsamp/stats.hpp"

namespace llsamp {

// Draws X_S from mu_S^sigma: per component of Phi^sigma intersecting S,
// retries uniform assignments of the component variables until every
// component constraint is satisfied. Throws BudgetExceededError when a
// component exhausts trial_cap trials.
std::vector<std::pair<VarId, int>> rejection_sampling(const CspFormula& f,
                                                      const PartialAssignment& sigma,
                                                      std::span<const VarId> S, PhiloxRng& rng,
                                                      uint64_t trial_cap, RunStats* stats);

// Single prebuilt component; returns the value drawn at `target`.
// `values` is scratch storage indexed by variable id (size n).
int rejection_sample_component(const CspFormula& f, const Component& comp,
                               const PartialAssignment& sigma, VarId target, PhiloxRng& rng,
                               uint64_t trial_cap, RunStats* stats, std::vector<int>& values);

// Exhaustively decides whether the component admits a satisfying
// completion; requires the component assignment space to fit in `cap`.
// Used to tell an infeasible component apart from an exhausted budget.
bool component_feasible(const CspFormula& f, const Component& comp, const PartialAssignment& sigma,
                        uint64_t cap);

}  // namespace llsamp
