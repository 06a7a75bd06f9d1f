#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "llsamp/bernoulli.hpp"
#include "llsamp/csp.hpp"
#include "llsamp/frozen.hpp"
#include "llsamp/params.hpp"
#include "llsamp/rejection.hpp"
#include "llsamp/rng.hpp"
#include "llsamp/stats.hpp"

namespace llsamp {

// Optional instrumentation invoked at MarginSample entries and at every
// (re-)entry of MarginOverflow, before any randomness is consumed for the
// step. Used by the test harness to check local-uniformity brackets.
struct DebugHooks {
    // phase: 0 = MarginSample entry, 1 = MarginOverflow entry for v,
    //        2 = about to draw the next boundary variable u
    std::function<void(const CspFormula&, const PartialAssignment&, VarId, int)> on_entry;
};

struct SamplerConfig {
    FrozenOracleConfig frozen;
    uint64_t seed = 0;
    bool debug_assertions = false;
    // debug: assert "v is not sigma-fixed" at MarginSample entry; on by
    // default for the main-loop call sites, direct marginal calls on
    // out-of-regime fixtures turn it off
    bool assert_not_fixed = true;
    uint64_t coin_draw_budget = 100'000'000;
    uint64_t rejection_trial_cap = 10'000'000;
    uint64_t path_length_guard = 1'000'000;
    bool disable_uniform_shortcut = false;
};

// One sampling run: owns the partial assignment, its journal, the frozen
// oracle memo and the RNG substream. Strictly single-threaded; concurrent
// runs use separate instances with distinct streams.
class SamplerRun {
public:
    SamplerRun(const CspFormula& f, const LllParameters& params, const SamplerConfig& config,
               uint64_t stream, const DebugHooks* hooks = nullptr);

    // Restores the run to its initial state on a new RNG substream,
    // reusing the allocated scratch (epoch stamps survive resets).
    void reset(uint64_t stream);

    // Algorithm 1 plus a final full-evaluation pass; returns one value
    // index per variable.
    std::vector<int> sample();

    // Draws from mu_v^sigma at the current partial assignment. The
    // assignment is restored to its entry state before returning.
    int margin_sample(VarId v);

    // Draws from D = (mu_v^sigma - theta_v) / (1 - q_v theta_v).
    // Requires sigma(v) = star; undoes its own mutations on return.
    int margin_overflow(VarId v);

    // Definition of NextVar: smallest-index vertex on the boundary of the
    // star-connected fixed region of Phi^sigma, or nullopt.
    std::optional<VarId> next_var();

    PartialAssignment& assignment() { return sigma_; }
    const CspFormula& formula() const { return f_; }
    const LllParameters& params() const { return params_; }
    RunStats& stats() { return stats_; }
    FrozenOracle& frozen() { return frozen_; }
    PhiloxRng& rng() { return rng_; }
    const SamplerConfig& config() const { return config_; }

private:
    int zone_value(VarId v, double r) const;
    void check_margin_sample_entry(VarId v);
    void check_margin_overflow_entry(VarId v, int phase);
    void assert_p_prime_q_bound();
    bool cached_fixed(VarId v);
    bool cached_frozen(ConstraintId c);

    const CspFormula& f_;
    const LllParameters& params_;
    SamplerConfig config_;
    PhiloxRng rng_;
    PartialAssignment sigma_;
    RunStats stats_;
    FrozenOracle frozen_;
    const DebugHooks* hooks_;

    // epoch-stamped scratch for next_var (O(1) reset per call)
    uint32_t epoch_ = 0;
    std::vector<uint32_t> var_epoch_, con_epoch_;
    std::vector<uint32_t> fix_epoch_, froz_epoch_;
    std::vector<uint8_t> fix_val_, froz_val_;
    std::vector<VarId> dfs_stack_;
    uint64_t current_path_len_ = 0;
};

// Convenience wrapper: run `sample` on substream `ordinal`.
std::vector<int> sample_assignment(const CspFormula& f, const LllParameters& params,
                                   const SamplerConfig& config, uint64_t ordinal,
                                   const DebugHooks* hooks = nullptr, RunStats* stats_out = nullptr);

}  // namespace llsamp
