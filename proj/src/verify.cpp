#include "llsamp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "llsamp/errors.hpp"
#include "llsamp/families.hpp"
#include "llsamp/inference.hpp"

namespace llsamp {

uint64_t ExactDistribution::encode(std::span<const int> full_values) const {
    uint64_t code = 0;
    for (size_t i = 0; i < free_vars.size(); ++i)
        code += radix[i] * static_cast<uint64_t>(full_values[free_vars[i]]);
    return code;
}

void ExactDistribution::decode(uint64_t code, std::vector<int>& full_values) const {
    for (size_t i = free_vars.size(); i-- > 0;) {
        full_values[free_vars[i]] = static_cast<int>(code / radix[i]);
        code %= radix[i];
    }
}

int ExactDistribution::free_index(VarId v) const {
    auto it = std::lower_bound(free_vars.begin(), free_vars.end(), v);
    if (it == free_vars.end() || *it != v) throw Error("variable is not free in this distribution");
    return static_cast<int>(it - free_vars.begin());
}

double ExactDistribution::marginal(VarId v, int x) const {
    if (solutions.empty()) throw Error("marginal of an unsatisfiable instance");
    return static_cast<double>(value_counts[free_index(v)][x]) /
           static_cast<double>(solutions.size());
}

ExactDistribution brute_force(const CspFormula& f, const PartialAssignment& sigma, uint64_t cap) {
    ExactDistribution out;
    for (VarId v = 0; v < f.num_variables(); ++v)
        if (!sigma.is_assigned(v)) out.free_vars.push_back(v);

    out.radix.resize(out.free_vars.size());
    uint64_t space = 1;
    for (size_t i = 0; i < out.free_vars.size(); ++i) {
        out.radix[i] = space;
        space *= static_cast<uint64_t>(f.domain_size(out.free_vars[i]));
        if (space > cap) throw TooLargeError("assignment space exceeds brute-force cap");
    }
    out.space_size = space;
    out.value_counts.resize(out.free_vars.size());
    for (size_t i = 0; i < out.free_vars.size(); ++i)
        out.value_counts[i].assign(f.domain_size(out.free_vars[i]), 0);

    std::vector<int> values(f.num_variables(), 0);
    for (VarId v = 0; v < f.num_variables(); ++v)
        if (sigma.is_assigned(v)) values[v] = sigma.state(v);
    auto value = [&](VarId v) { return values[v]; };

    for (uint64_t code = 0; code < space; ++code) {
        bool ok = true;
        for (ConstraintId c = 0; c < f.num_constraints() && ok; ++c)
            if (violated_by_full(f.constraint(c).payload, f, value)) ok = false;
        if (ok) {
            out.solutions.push_back(code);
            for (size_t i = 0; i < out.free_vars.size(); ++i)
                ++out.value_counts[i][values[out.free_vars[i]]];
        }
        // odometer in radix order keeps codes ascending
        for (size_t i = 0; i < out.free_vars.size(); ++i) {
            VarId v = out.free_vars[i];
            if (++values[v] < f.domain_size(v)) break;
            values[v] = 0;
        }
    }
    return out;
}

ExactDistribution brute_force(const CspFormula& f, uint64_t cap) {
    PartialAssignment empty(f);
    return brute_force(f, empty, cap);
}

GofResult gof_test(std::span<const uint64_t> counts, std::span<const double> probs,
                   double significance) {
    if (counts.size() != probs.size() || counts.empty())
        throw Error("gof_test: counts/probs size mismatch");
    const double n = static_cast<double>(std::accumulate(counts.begin(), counts.end(), uint64_t{0}));

    // pool smallest-expectation cells until every pooled cell has
    // expectation >= 5
    std::vector<size_t> order(counts.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return probs[a] < probs[b]; });
    std::vector<std::pair<double, double>> cells;  // (observed, expected)
    double obs_acc = 0.0, exp_acc = 0.0;
    for (size_t idx : order) {
        obs_acc += static_cast<double>(counts[idx]);
        exp_acc += probs[idx] * n;
        if (exp_acc >= 5.0) {
            cells.emplace_back(obs_acc, exp_acc);
            obs_acc = exp_acc = 0.0;
        }
    }
    if (exp_acc > 0.0 || obs_acc > 0.0) {
        if (!cells.empty()) {
            cells.back().first += obs_acc;
            cells.back().second += exp_acc;
        } else {
            cells.emplace_back(obs_acc, exp_acc);
        }
    }

    GofResult r;
    r.pooled_cells = cells.size();
    for (auto [obs, exp] : cells)
        if (exp > 0.0) r.statistic += (obs - exp) * (obs - exp) / exp;
    r.df = static_cast<int64_t>(cells.size()) - 1;
    if (r.df <= 0) {
        r.p_value = 1.0;
    } else {
        r.p_value = boost::math::gamma_q(static_cast<double>(r.df) / 2.0, r.statistic / 2.0);
    }
    r.pass = r.p_value >= significance;
    return r;
}

std::vector<TailRow> tail_diagnostic(const CspFormula& f, const LllParameters& params,
                                     const SamplerConfig& config, uint64_t calls, double p_max,
                                     std::vector<uint32_t>* lengths_out) {
    constexpr double kE = 2.718281828459045235;
    const double lhs = 8.0 * kE * p_max * std::pow(f.degree(), 3);
    const double rhs = 0.99 * params.p_prime;
    if (lhs > rhs)
        throw ConditionViolatedError("tail_diagnostic requires 8 e p Delta^3 <= 0.99 p' (lhs=" +
                                     std::to_string(lhs) + ", rhs=" + std::to_string(rhs) + ")");

    std::vector<uint32_t> lengths;
    lengths.reserve(calls);
    const int n = f.num_variables();
    SamplerRun run(f, params, config, 0);
    for (uint64_t j = 0; j < calls; ++j) {
        VarId v = static_cast<VarId>(j % n);
        run.reset(j);
        marginal_sample_run(run, v);
        lengths.push_back(run.stats().margin_sample_path_lengths.empty()
                              ? 0u
                              : run.stats().margin_sample_path_lengths.back());
    }

    const double band = 4.0 * std::sqrt(std::log(10.0) / (2.0 * static_cast<double>(calls)));
    const uint64_t k = f.max_arity();
    const uint64_t d2 = static_cast<uint64_t>(f.degree()) * static_cast<uint64_t>(f.degree());
    std::vector<TailRow> rows;
    for (int i = 0; i <= 3; ++i) {
        TailRow row;
        row.i = i;
        row.threshold = static_cast<uint64_t>(i) * k * d2;
        uint64_t hits = 0;
        for (uint32_t len : lengths)
            if (len >= row.threshold) ++hits;
        row.empirical = static_cast<double>(hits) / static_cast<double>(calls);
        row.bound = f.degree() * std::pow(2.0, -i);
        row.band = band;
        rows.push_back(row);
    }
    if (lengths_out) *lengths_out = std::move(lengths);
    return rows;
}

}  // namespace llsamp
