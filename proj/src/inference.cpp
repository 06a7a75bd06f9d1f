#include "llsamp/inference.hpp"

#include <algorithm>
#include <cmath>

#include "llsamp/errors.hpp"

namespace llsamp {

int marginal_sample_run(SamplerRun& run, VarId v) {
    if (run.frozen().is_fixed(v, run.assignment())) {
        std::vector<VarId> s = {v};
        auto values = rejection_sampling(run.formula(), run.assignment(), s, run.rng(),
                                         run.config().rejection_trial_cap, &run.stats());
        return values.front().second;
    }
    return run.margin_sample(v);
}

int marginal_sample(const CspFormula& f, const LllParameters& params, const SamplerConfig& config,
                    VarId v, uint64_t ordinal, const DebugHooks* hooks, RunStats* stats_out) {
    SamplerRun run(f, params, config, ordinal, hooks);
    int out = marginal_sample_run(run, v);
    if (stats_out) *stats_out = run.stats();
    return out;
}

MarginalEstimate infer_marginal(const CspFormula& f, const LllParameters& params,
                                const SamplerConfig& config, VarId v, double epsilon,
                                double delta_fail, uint64_t stream_base) {
    if (epsilon <= 0.0 || epsilon >= 1.0) throw ConditionViolatedError("infer_marginal: epsilon in (0,1)");
    if (delta_fail <= 0.0) throw ConditionViolatedError("infer_marginal: delta_fail > 0");
    const int qv = f.domain_size(v);
    const uint64_t batch_size =
        static_cast<uint64_t>(std::ceil(48.0 * qv / (epsilon * epsilon)));
    const int batches =
        delta_fail >= 1.0
            ? 1
            : 2 * static_cast<int>(std::ceil(std::log2(2.0 * qv / delta_fail))) + 1;

    std::vector<std::vector<double>> freq(qv, std::vector<double>(batches, 0.0));
    uint64_t ordinal = stream_base;
    SamplerRun run(f, params, config, ordinal);
    for (int b = 0; b < batches; ++b) {
        std::vector<uint64_t> counts(qv, 0);
        for (uint64_t i = 0; i < batch_size; ++i) {
            run.reset(ordinal++);
            ++counts[marginal_sample_run(run, v)];
        }
        for (int x = 0; x < qv; ++x)
            freq[x][b] = static_cast<double>(counts[x]) / static_cast<double>(batch_size);
    }

    MarginalEstimate out;
    out.var = v;
    out.batch_size = batch_size;
    out.batches = batches;
    out.total_samples = batch_size * static_cast<uint64_t>(batches);
    out.epsilon = epsilon;
    out.delta_fail = delta_fail;
    out.estimates.resize(qv);
    for (int x = 0; x < qv; ++x) {
        std::vector<double>& fx = freq[x];
        std::sort(fx.begin(), fx.end());
        out.estimates[x] = fx[fx.size() / 2];
    }
    return out;
}

}  // namespace llsamp
