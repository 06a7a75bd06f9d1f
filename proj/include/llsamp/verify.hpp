#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "llsamp/csp.hpp"
#include "llsamp/params.hpp"
#include "llsamp/sampler.hpp"

namespace llsamp {

// Exhaustive ground truth over the free variables of sigma. Counts are
// exact 64-bit integers (the enumeration cap keeps them exact); they are
// converted to floating point only at comparison boundaries.
struct ExactDistribution {
    std::vector<VarId> free_vars;        // ascending variable ids
    std::vector<uint64_t> radix;         // mixed-radix place values, aligned to free_vars
    uint64_t space_size = 0;             // product of free domain sizes
    std::vector<uint64_t> solutions;     // encoded satisfying assignments, ascending
    std::vector<std::vector<uint64_t>> value_counts;  // [free var pos][value]

    uint64_t solution_count() const { return solutions.size(); }
    uint64_t encode(std::span<const int> full_values) const;
    void decode(uint64_t code, std::vector<int>& full_values) const;
    // mu_v^sigma(x) as a ratio of exact counts
    double marginal(VarId v, int x) const;
    int free_index(VarId v) const;
};

// Enumerates all completions of sigma and filters by the constraints.
// Throws TooLargeError when the space exceeds `cap`.
ExactDistribution brute_force(const CspFormula& f, const PartialAssignment& sigma,
                              uint64_t cap = 1ull << 22);
ExactDistribution brute_force(const CspFormula& f, uint64_t cap = 1ull << 22);

struct GofResult {
    double statistic = 0.0;
    double p_value = 1.0;
    int64_t df = 0;
    size_t pooled_cells = 0;
    bool pass = false;
};

// Pearson chi-squared of observed counts against exact cell
// probabilities. Cells with expectation below 5 are pooled smallest-first
// until every cell clears the threshold. Passes iff p_value >= significance.
GofResult gof_test(std::span<const uint64_t> counts, std::span<const double> probs,
                   double significance);

struct TailRow {
    int i = 0;
    uint64_t threshold = 0;   // i * k * Delta^2
    double empirical = 0.0;   // Pr[path length >= threshold]
    double bound = 0.0;       // Delta * 2^-i
    double band = 0.0;        // 4 sqrt(ln(10) / (2M))
};

// Runs `calls` instrumented marginal samples (round-robin over variables)
// and compares the recursion-depth tail against the analytic bound.
// Requires 8 e p_max Delta^3 <= 0.99 p'; throws ConditionViolatedError
// otherwise.
std::vector<TailRow> tail_diagnostic(const CspFormula& f, const LllParameters& params,
                                     const SamplerConfig& config, uint64_t calls, double p_max,
                                     std::vector<uint32_t>* lengths_out = nullptr);

}  // namespace llsamp
