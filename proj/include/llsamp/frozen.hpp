#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "llsamp/csp.hpp"
#include "llsamp/params.hpp"
#include "llsamp/rng.hpp"
#include "llsamp/stats.hpp"

namespace llsamp {

struct FrozenOracleConfig {
    enum class Mode { Exact, MonteCarlo };
    Mode mode = Mode::Exact;
    double epsilon = 0.01;   // target sampling bias (Monte-Carlo)
    double delta = 0.005;    // fixed Monte-Carlo precision
    uint64_t trials = 0;     // N; 0 derives it from the formula

    static FrozenOracleConfig exact() { return {}; }
    static FrozenOracleConfig monte_carlo(double epsilon, uint64_t trials_override = 0) {
        FrozenOracleConfig c;
        c.mode = Mode::MonteCarlo;
        c.epsilon = epsilon;
        c.trials = trials_override;
        return c;
    }

    // N = ceil( ln(4e3 k Delta^7 n eps^-2) / (0.33 p' delta^2) )
    static uint64_t compute_trials(const CspFormula& f, const LllParameters& params, double epsilon,
                                   double delta = 0.005);
};

// Decides sigma-frozen constraints and sigma-fixed variables. Exact mode
// tests the closed-form conditional violation probability against p'.
// Monte-Carlo mode estimates it from N uniform completions and memoizes
// per scope-restriction so repeated queries stay consistent within a run.
// One instance per sampling run; not thread-safe.
class FrozenOracle {
public:
    FrozenOracle(const CspFormula& f, const LllParameters& params, FrozenOracleConfig config,
                 PhiloxRng* rng, RunStats* stats);

    bool is_frozen(ConstraintId c, const PartialAssignment& sigma);
    // v in Lambda+(sigma) or incident to a frozen constraint
    bool is_fixed(VarId v, const PartialAssignment& sigma);

    // Discards the memo for a fresh run.
    void reset();

    uint64_t trials() const { return trials_; }
    const FrozenOracleConfig& config() const { return config_; }

    // Per-query misclassification bound 2 exp(-(delta^2/3) 0.99 p' N).
    static double chernoff_error_bound(double p_prime, double delta, uint64_t trials);

private:
    std::string memo_key(ConstraintId c, const PartialAssignment& sigma) const;
    bool monte_carlo_decide(ConstraintId c, const PartialAssignment& sigma);

    const CspFormula& f_;
    const LllParameters& params_;
    FrozenOracleConfig config_;
    PhiloxRng* rng_;
    RunStats* stats_;
    uint64_t trials_ = 0;
    std::vector<std::unordered_map<std::string, bool>> memo_;
    std::vector<int> scratch_;
};

}  // namespace llsamp
