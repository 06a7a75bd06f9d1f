#pragma once

#include <cstdint>
#include <vector>

#include "llsamp/sampler.hpp"

namespace llsamp {

// One draw from mu_v. Runs MarginSample at the all-unset assignment; when
// v is fixed there (an incident constraint is frozen before anything is
// assigned, possible only outside the accepted regimes), the draw falls
// back to rejection sampling on v's component, which is exact as well.
int marginal_sample(const CspFormula& f, const LllParameters& params, const SamplerConfig& config,
                    VarId v, uint64_t ordinal, const DebugHooks* hooks = nullptr,
                    RunStats* stats_out = nullptr);

// Same draw on a caller-owned, freshly reset run (lets tight loops reuse
// the run's scratch memory).
int marginal_sample_run(SamplerRun& run, VarId v);

struct MarginalEstimate {
    VarId var = kNoVar;
    std::vector<double> estimates;  // per value index
    uint64_t batch_size = 0;
    int batches = 0;
    uint64_t total_samples = 0;
    double epsilon = 0.0;
    double delta_fail = 0.0;
};

// Median-of-batches estimator: batches of ceil(48 q_v / eps^2) marginal
// samples, 2*ceil(log2(2 q_v / delta_fail)) + 1 batches (a single batch
// when delta_fail >= 1), coordinate-wise median of the batch frequencies.
// With probability >= 1 - delta_fail every estimate lands within
// (1 +- eps) of mu_v(x).
MarginalEstimate infer_marginal(const CspFormula& f, const LllParameters& params,
                                const SamplerConfig& config, VarId v, double epsilon,
                                double delta_fail, uint64_t stream_base = 0);

}  // namespace llsamp
