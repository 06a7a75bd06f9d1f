#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "golden_instances.hpp"
#include "llsamp/errors.hpp"
#include "llsamp/families.hpp"
#include "llsamp/frozen.hpp"
#include "llsamp/params.hpp"

using namespace llsamp;

namespace {

LllParameters chain_params() {
    return derive_parameters(golden::chain12(), std::pow(2.0, -6), LllMode::Weak);
}

}  // namespace

TEST_CASE("exact mode: satisfied constraint is never frozen") {
    CspFormula f = golden::chain12();
    LllParameters params = chain_params();
    PhiloxRng rng(1, 0);
    RunStats stats;
    FrozenOracle oracle(f, params, FrozenOracleConfig::exact(), &rng, &stats);
    PartialAssignment sigma(f);
    sigma.set(0, 1);  // satisfies clause 0
    CHECK_FALSE(oracle.is_frozen(0, sigma));
}

TEST_CASE("exact mode: pinned robust clause is frozen") {
    // robust k=4 t_sat=2, three false assigned, one unassigned:
    // P = P[Bin(1,1/2) <= 1] = 1 > p'
    std::vector<ConstraintPayload> cons;
    cons.emplace_back(make_robust_sat(golden::positive({0, 1, 2, 3}), 0.5));
    CspFormula f(golden::boolean_vars(4), std::move(cons));
    LllParameters params = manual_parameters(f, 0.01, 0.1, 0.1, 0.0);
    PhiloxRng rng(1, 0);
    RunStats stats;
    FrozenOracle oracle(f, params, FrozenOracleConfig::exact(), &rng, &stats);
    PartialAssignment sigma(f);
    sigma.set(0, 0);
    sigma.set(1, 0);
    sigma.set(2, 0);
    CHECK(oracle.is_frozen(0, sigma));
    CHECK(oracle.is_fixed(3, sigma));
    CHECK(oracle.is_fixed(0, sigma));  // accessed
}

TEST_CASE("exact mode matches the brute-force threshold on golden instances") {
    PhiloxRng pick(31337, 0);
    for (auto& g : golden::all_golden()) {
        const CspFormula& f = g.formula;
        double p_max = max_violation_probability(f);
        LllParameters params = derive_parameters(f, p_max, LllMode::Weak);
        PhiloxRng rng(2, 0);
        RunStats stats;
        FrozenOracle oracle(f, params, FrozenOracleConfig::exact(), &rng, &stats);
        PartialAssignment sigma(f);
        for (int trial = 0; trial < 60; ++trial) {
            sigma.undo_to(0);
            for (VarId v = 0; v < f.num_variables(); ++v) {
                uint32_t sel = pick.uniform_index(3);
                if (sel == 0) sigma.set(v, static_cast<int32_t>(pick.uniform_index(f.domain_size(v))));
                if (sel == 1) sigma.set(v, kStar);
            }
            for (ConstraintId c = 0; c < f.num_constraints(); ++c) {
                // independent threshold: enumerate scope completions
                const auto& scope = f.scope(c);
                std::vector<VarId> free;
                for (VarId v : scope)
                    if (!sigma.is_assigned(v)) free.push_back(v);
                uint64_t total = 1, violated = 0;
                for (VarId v : free) total *= f.domain_size(v);
                std::vector<int> values(f.num_variables(), 0);
                for (VarId v : scope)
                    if (sigma.is_assigned(v)) values[v] = sigma.state(v);
                for (uint64_t code = 0; code < total; ++code) {
                    uint64_t rest = code;
                    for (VarId v : free) {
                        values[v] = static_cast<int>(rest % f.domain_size(v));
                        rest /= f.domain_size(v);
                    }
                    if (violated_by_full(f.constraint(c).payload, f,
                                         [&](VarId v) { return values[v]; }))
                        ++violated;
                }
                bool expect = static_cast<double>(violated) / static_cast<double>(total) >
                              params.p_prime;
                CHECK(oracle.is_frozen(c, sigma) == expect);
            }
        }
    }
}

TEST_CASE("monte carlo: memo consistency under randomized query order") {
    CspFormula f = golden::chain12();
    LllParameters params = chain_params();
    PhiloxRng rng(77, 0);
    RunStats stats;
    FrozenOracleConfig cfg = FrozenOracleConfig::monte_carlo(0.01, 400);
    FrozenOracle oracle(f, params, cfg, &rng, &stats);

    PartialAssignment sigma(f);
    sigma.set(0, 0);
    sigma.set(1, 0);

    PhiloxRng order(99, 0);
    std::vector<bool> first(f.num_constraints());
    for (ConstraintId c = 0; c < f.num_constraints(); ++c) first[c] = oracle.is_frozen(c, sigma);
    for (int trial = 0; trial < 50; ++trial) {
        ConstraintId c = static_cast<ConstraintId>(order.uniform_index(f.num_constraints()));
        CHECK(oracle.is_frozen(c, sigma) == first[c]);
    }
    // changing an irrelevant variable must not change the key
    sigma.set(11, 1);
    for (ConstraintId c = 0; c < f.num_constraints(); ++c)
        CHECK(oracle.is_frozen(c, sigma) == first[c]);
}

TEST_CASE("monte carlo mode is deterministic in the seed") {
    CspFormula f = golden::chain12();
    LllParameters params = chain_params();
    PartialAssignment sigma(f);
    sigma.set(0, 0);
    auto run = [&](uint64_t seed) {
        PhiloxRng rng(seed, 3);
        RunStats stats;
        FrozenOracle oracle(f, params, FrozenOracleConfig::monte_carlo(0.01, 257), &rng, &stats);
        std::vector<bool> out;
        for (ConstraintId c = 0; c < f.num_constraints(); ++c) out.push_back(oracle.is_frozen(c, sigma));
        return out;
    };
    CHECK(run(5) == run(5));
}

TEST_CASE("trial count formula") {
    CspFormula f = golden::chain12();
    LllParameters params = chain_params();
    uint64_t n = FrozenOracleConfig::compute_trials(f, params, 0.01);
    // ceil(ln(4e3 * 6 * 2^7 * 12 * 1e4) / (0.33 * p' * 0.005^2))
    CHECK(n == 170319655ull);
    // full-N per-query error bound clears eps/(2M), M = 1e3 k Delta^7 n / eps
    double bound = FrozenOracle::chernoff_error_bound(params.p_prime, 0.005, n);
    double m_budget = 1e3 * 6 * 128 * 12 / 0.01;
    CHECK(bound <= 0.01 / (2.0 * m_budget) * (1.0 + 1e-9));
}

TEST_CASE("one-sided decisions at 0.5p' and 2p' with reduced trials") {
    // Single table constraint over 12 Boolean variables; the forbidden-row
    // count dials the exact violation probability around p'.
    LllParameters chain = chain_params();
    const double p_prime = chain.p_prime;
    const uint64_t reduced_n = 170319655ull / 100000;  // heavy reduction keeps the test fast
    auto run_queries = [&](double target, int queries) {
        uint64_t rows = static_cast<uint64_t>(std::llround(target * 4096.0));
        REQUIRE(rows >= 1);
        TableConstraint tab;
        for (int i = 0; i < 12; ++i) tab.scope.push_back(i);
        for (uint64_t r = 0; r < rows; ++r) {
            std::vector<int> row(12);
            for (int b = 0; b < 12; ++b) row[b] = static_cast<int>((r >> b) & 1);
            tab.forbidden.push_back(std::move(row));
        }
        CspFormula f(golden::boolean_vars(12), {ConstraintPayload{std::move(tab)}});
        LllParameters params = manual_parameters(f, p_prime, chain.eta, chain.zeta, 0.0);
        PartialAssignment sigma(f);
        double actual = violation_probability(f.constraint(0).payload, f, sigma);
        int frozen_answers = 0;
        for (int qn = 0; qn < queries; ++qn) {
            PhiloxRng rng(555, static_cast<uint64_t>(qn));
            RunStats stats;
            FrozenOracle oracle(f, params, FrozenOracleConfig::monte_carlo(0.01, reduced_n), &rng,
                                &stats);
            frozen_answers += oracle.is_frozen(0, sigma) ? 1 : 0;
        }
        return std::pair<double, int>(actual, frozen_answers);
    };

    const int queries = 60;
    auto [low_p, low_frozen] = run_queries(0.5 * p_prime, queries);
    CHECK(low_p < 0.99 * p_prime);
    auto [high_p, high_frozen] = run_queries(2.0 * p_prime, queries);
    CHECK(high_p > p_prime);

    double bound = FrozenOracle::chernoff_error_bound(p_prime, 0.005, reduced_n);
    double band = 3.0 * std::sqrt(0.25 / queries);
    CHECK(static_cast<double>(low_frozen) / queries <= std::min(1.0, bound) + band);
    CHECK(static_cast<double>(queries - high_frozen) / queries <= std::min(1.0, bound) + band);
}

TEST_CASE("exact mode propagates NotClosedForm") {
    // five colors, k=4, bad_count=2: no closed form, and the edge violates
    // with probability 1 - 120/625
    std::vector<Variable> vars(4);
    for (int i = 0; i < 4; ++i) vars[i] = {"p" + std::to_string(i), {"0", "1", "2", "3", "4"}};
    RobustColoringEdge edge = make_robust_coloring({0, 1, 2, 3}, 0.6);
    REQUIRE_FALSE(edge.closed_form());
    CspFormula f(std::move(vars), {ConstraintPayload{edge}});
    LllParameters params = manual_parameters(f, 0.01, 0.05, 0.05, 0.0);
    PhiloxRng rng(6, 0);
    RunStats stats;
    FrozenOracle oracle(f, params, FrozenOracleConfig::exact(), &rng, &stats);
    PartialAssignment sigma(f);
    CHECK_THROWS_AS(oracle.is_frozen(0, sigma), NotClosedFormError);
    // the Monte-Carlo path decides the same constraint
    FrozenOracle mc(f, params, FrozenOracleConfig::monte_carlo(0.01, 300), &rng, &stats);
    CHECK(mc.is_frozen(0, sigma));
}

