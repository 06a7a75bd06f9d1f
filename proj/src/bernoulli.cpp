#include "llsamp/bernoulli.hpp"

#include <cmath>

#include "llsamp/errors.hpp"
#include "llsamp/rejection.hpp"

namespace llsamp {

void DrawBudget::charge() {
    if (++used > limit)
        throw BudgetExceededError("coin draw budget of " + std::to_string(limit) +
                                  " exceeded; degenerate input or violated factory promise");
}

namespace {

// Geometric on {1,2,...} with P[G=g] = p (1-p)^{g-1}.
int64_t draw_geometric(PhiloxRng& rng, double p) {
    if (p >= 1.0) return 1;
    double u = rng.uniform53();
    double g = std::log1p(-u) / std::log1p(-p);
    if (!(g < 9.0e18)) return INT64_MAX / 4;
    int64_t out = static_cast<int64_t>(std::ceil(g));
    return out < 1 ? 1 : out;
}

}  // namespace

int bernoulli_race(std::span<Coin> coins, PhiloxRng& rng) {
    const uint32_t q = static_cast<uint32_t>(coins.size());
    for (;;) {
        uint32_t i = rng.uniform_index(q);
        if (coins[i].draw()) return static_cast<int>(i);
    }
}

bool linear_bf(Coin& coin, double C, double zeta, PhiloxRng& rng) {
    double k = 4.6 / zeta;
    zeta = std::min(zeta, 0.644);
    int64_t i = 1;
    for (;;) {
        while (i != 0 && static_cast<double>(i) < k) {
            bool b = coin.draw();
            int64_t g = draw_geometric(rng, (C - 1.0) / C);
            i = i - 1 + (b ? 0 : g);
        }
        if (i == 0) return true;
        // escalation
        bool r = rng.uniform53() < std::pow(1.0 + zeta / 2.0, -static_cast<double>(i));
        C *= 1.0 + zeta / 2.0;
        zeta /= 2.0;
        k *= 2.0;
        if (!r) return false;
    }
}

bool subtract_bf(Coin& coin1, Coin& coin2, double zeta, PhiloxRng& rng, DrawBudget* budget,
                 uint64_t* mixture_draws_out) {
    // O_{(1-xi1+xi2)/2}: on a fair bit return 1-O_{xi1}, else O_{xi2}
    Coin mixture(
        [&]() {
            if (rng.fair_bit()) return !coin1.draw();
            return coin2.draw();
        },
        budget);
    bool heads = !linear_bf(mixture, 2.0, zeta, rng);
    if (mixture_draws_out) *mixture_draws_out += mixture.draws();
    return heads;
}

int margin_overflow_draw(const CspFormula& f, const PartialAssignment& sigma, VarId v,
                         const LllParameters& params, PhiloxRng& rng, RunStats* stats,
                         const MarginOverflowOptions& opts, FactoryAudit* audit) {
    if (!sigma.is_star(v)) throw Error("margin_overflow_draw: sigma(v) must be star");
    const int qv = f.domain_size(v);
    const double theta_v = params.theta_of(v);

    // preprocess v's component of Phi^sigma once; every nu-coin draw is a
    // rejection-sampling run on it
    std::vector<VarId> seed = {v};
    std::vector<Component> comps = connected_components(f, sigma, seed);
    const Component& comp = comps.front();
    if (stats) {
        ++stats->factory_invocations;
        stats->factory_component_constraints.push_back(static_cast<uint32_t>(comp.constraints.size()));
    }

    if (comp.constraints.empty() && opts.uniform_shortcut) {
        // mu_v^sigma is exactly uniform, so D is too
        if (stats) ++stats->factory_uniform_shortcuts;
        if (audit) audit->uniform_shortcut_taken = true;
        return static_cast<int>(rng.uniform_index(static_cast<uint32_t>(qv)));
    }

    DrawBudget budget{0, opts.coin_draw_budget};
    std::vector<int> scratch(f.num_variables(), 0);

    auto run_rejection = [&]() -> int {
        try {
            return rejection_sample_component(f, comp, sigma, v, rng, opts.rejection_trial_cap,
                                              stats, scratch);
        } catch (const BudgetExceededError&) {
            bool feasible = true;
            try {
                feasible = component_feasible(f, comp, sigma, 1ull << 20);
            } catch (const TooLargeError&) {
                throw BudgetExceededError(
                    "rejection trial cap exhausted on a component too large to check exhaustively");
            }
            if (!feasible)
                throw InfeasibleComponentError(
                    "rejection sampling component admits no solution; feasibility invariant violated");
            throw;
        }
    };

    std::vector<Coin> nu;
    nu.reserve(qv);
    for (int x = 0; x < qv; ++x)
        nu.emplace_back([&run_rejection, x]() { return run_rejection() == x; }, &budget);
    Coin theta_coin([&rng, theta_v]() { return rng.uniform53() < theta_v; }, &budget);

    uint64_t mixture_draws = 0;
    std::vector<Coin> race;
    race.reserve(qv);
    const double zeta = params.zeta;
    for (int x = 0; x < qv; ++x)
        race.emplace_back(
            [&nu, &theta_coin, &rng, &budget, &mixture_draws, zeta, x]() {
                return subtract_bf(nu[x], theta_coin, zeta, rng, &budget, &mixture_draws);
            },
            &budget);

    int out = bernoulli_race(race, rng);
    if (stats) stats->coin_draws += budget.used;
    if (audit) {
        audit->budget_used = budget.used;
        audit->mixture_draws = mixture_draws;
        audit->theta_draws = theta_coin.draws();
        audit->nu_draws.resize(qv);
        for (int x = 0; x < qv; ++x) audit->nu_draws[x] = nu[x].draws();
        for (const Coin& rc : race) audit->race_coin_draws += rc.draws();
    }
    return out;
}

}  // namespace llsamp
