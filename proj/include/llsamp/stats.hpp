#pragma once

#include <cstdint>
#include <vector>

namespace llsamp {

// Per-run instrumentation. All counters are monotone within a run.
struct RunStats {
    uint64_t eval_queries = 0;
    uint64_t frozen_queries = 0;
    uint64_t monte_carlo_trials = 0;
    uint64_t rejection_trials = 0;
    uint64_t rejection_runs = 0;
    uint64_t coin_draws = 0;
    uint64_t factory_invocations = 0;
    uint64_t factory_uniform_shortcuts = 0;
    uint64_t next_var_calls = 0;
    uint64_t path_steps_total = 0;  // next_var != bottom iterations
    std::vector<uint32_t> margin_sample_path_lengths;  // one entry per MarginSample call
    // component sizes |C_v^sigma| seen at Bernoulli-factory invocations
    std::vector<uint32_t> factory_component_constraints;

    // per next_var call accounting (overwritten each call)
    uint64_t last_next_var_eval_queries = 0;
    uint64_t last_next_var_frozen_queries = 0;
    uint64_t last_next_var_star_con = 0;  // |C_{star-con}(sigma)|
};

}  // namespace llsamp
