#include "llsamp/rejection.hpp"

#include "llsamp/errors.hpp"
#include "llsamp/families.hpp"

namespace llsamp {

namespace {

// One trial: uniform values on the component's free variables, then check
// its constraints against sigma overlaid with the trial values.
bool component_trial(const CspFormula& f, const Component& comp, const PartialAssignment& sigma,
                     PhiloxRng& rng, RunStats* stats, std::vector<int>& values) {
    for (VarId v : comp.vars)
        values[v] = static_cast<int>(rng.uniform_index(static_cast<uint32_t>(f.domain_size(v))));
    auto value = [&](VarId v) {
        int32_t s = sigma.state(v);
        return s >= 0 ? s : values[v];
    };
    for (ConstraintId c : comp.constraints) {
        if (stats) ++stats->eval_queries;
        if (violated_by_full(f.constraint(c).payload, f, value)) return false;
    }
    return true;
}

}  // namespace

int rejection_sample_component(const CspFormula& f, const Component& comp,
                               const PartialAssignment& sigma, VarId target, PhiloxRng& rng,
                               uint64_t trial_cap, RunStats* stats, std::vector<int>& values) {
    if (values.size() < static_cast<size_t>(f.num_variables())) values.resize(f.num_variables());
    if (stats) ++stats->rejection_runs;
    for (uint64_t t = 0; t < trial_cap; ++t) {
        if (stats) ++stats->rejection_trials;
        if (component_trial(f, comp, sigma, rng, stats, values)) return values[target];
    }
    throw BudgetExceededError("rejection sampling exhausted " + std::to_string(trial_cap) +
                              " trials on a component with " + std::to_string(comp.vars.size()) +
                              " variables");
}

std::vector<std::pair<VarId, int>> rejection_sampling(const CspFormula& f,
                                                      const PartialAssignment& sigma,
                                                      std::span<const VarId> S, PhiloxRng& rng,
                                                      uint64_t trial_cap, RunStats* stats) {
    std::vector<Component> comps = connected_components(f, sigma, S);
    std::vector<int> values(f.num_variables(), 0);
    std::vector<uint8_t> wanted(f.num_variables(), 0);
    for (VarId v : S) wanted[v] = 1;
    std::vector<std::pair<VarId, int>> out;
    out.reserve(S.size());
    for (const Component& comp : comps) {
        if (comp.vars.empty()) continue;
        rejection_sample_component(f, comp, sigma, comp.vars.front(), rng, trial_cap, stats, values);
        for (VarId v : comp.vars)
            if (wanted[v]) out.emplace_back(v, values[v]);
    }
    return out;
}

bool component_feasible(const CspFormula& f, const Component& comp, const PartialAssignment& sigma,
                        uint64_t cap) {
    uint64_t space = 1;
    for (VarId v : comp.vars) {
        space *= static_cast<uint64_t>(f.domain_size(v));
        if (space > cap) throw TooLargeError("component assignment space exceeds feasibility cap");
    }
    std::vector<int> values(f.num_variables(), 0);
    for (VarId v : comp.vars) values[v] = 0;
    auto value = [&](VarId v) {
        int32_t s = sigma.state(v);
        return s >= 0 ? s : values[v];
    };
    for (uint64_t it = 0;; ++it) {
        bool ok = true;
        for (ConstraintId c : comp.constraints)
            if (violated_by_full(f.constraint(c).payload, f, value)) {
                ok = false;
                break;
            }
        if (ok) return true;
        // odometer
        size_t pos = 0;
        for (; pos < comp.vars.size(); ++pos) {
            VarId v = comp.vars[pos];
            if (++values[v] < f.domain_size(v)) break;
            values[v] = 0;
        }
        if (pos == comp.vars.size()) return false;
    }
}

}  // namespace llsamp
