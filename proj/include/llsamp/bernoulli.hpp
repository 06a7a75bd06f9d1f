#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "llsamp/csp.hpp"
#include "llsamp/params.hpp"
#include "llsamp/rng.hpp"
#include "llsamp/simplify.hpp"
#include "llsamp/stats.hpp"

namespace llsamp {

// Shared draw ledger. Every Coin::draw charges it once, so the budget
// bounds the total number of coin draws across a whole factory call.
struct DrawBudget {
    uint64_t used = 0;
    uint64_t limit = 100'000'000;

    void charge();
};

// A 0/1 random source with a draw counter. Draws are i.i.d. given a fixed
// environment; the counter increments exactly once per draw.
class Coin {
public:
    Coin(std::function<bool()> impl, DrawBudget* budget) : impl_(std::move(impl)), budget_(budget) {}

    bool draw() {
        budget_->charge();
        ++draws_;
        return impl_();
    }

    uint64_t draws() const { return draws_; }

private:
    std::function<bool()> impl_;
    DrawBudget* budget_;
    uint64_t draws_ = 0;
};

// Repeatedly picks a uniform index and draws that coin, returning the
// index on heads: P[I=i] = xi_i / sum_j xi_j. Needs some coin with
// nonzero heads probability; otherwise the budget guard fires.
int bernoulli_race(std::span<Coin> coins, PhiloxRng& rng);

// Huber's linear Bernoulli factory: returns Bernoulli(C*xi) given a coin
// with heads probability xi and the promise C*xi <= 1 - zeta. Geometric
// draws use support {1,2,...} with success parameter (C-1)/C.
bool linear_bf(Coin& coin, double C, double zeta, PhiloxRng& rng);

// Bernoulli(xi1 - xi2) from coins with the promise xi1 - xi2 >= zeta > 0,
// via 1 - LinearBF(O_{(1-xi1+xi2)/2}, 2, zeta).
bool subtract_bf(Coin& coin1, Coin& coin2, double zeta, PhiloxRng& rng, DrawBudget* budget,
                 uint64_t* mixture_draws_out = nullptr);

struct MarginOverflowOptions {
    uint64_t coin_draw_budget = 100'000'000;
    uint64_t rejection_trial_cap = 10'000'000;
    // Skip the factory when the component has no constraints (the target
    // distribution is then exactly uniform). Tests disable this to
    // exercise the full stack.
    bool uniform_shortcut = true;
};

// Per-layer draw accounting for one factory invocation. Every coin draw
// charges the budget exactly once, so budget_used always equals the sum
// of the per-coin counters.
struct FactoryAudit {
    uint64_t budget_used = 0;
    uint64_t race_coin_draws = 0;     // draws of the subtraction coins
    uint64_t mixture_draws = 0;       // draws inside linear_bf
    uint64_t theta_draws = 0;
    std::vector<uint64_t> nu_draws;   // per value of Q_v
    bool uniform_shortcut_taken = false;
};

// Draws from D(x) = (mu_v^sigma(x) - theta_v) / (1 - q_v theta_v) with a
// Bernoulli race over subtraction coins, each backed by rejection sampling
// on v's component of Phi^sigma (preprocessed once). Requires sigma(v)=star.
int margin_overflow_draw(const CspFormula& f, const PartialAssignment& sigma, VarId v,
                         const LllParameters& params, PhiloxRng& rng, RunStats* stats,
                         const MarginOverflowOptions& opts = {}, FactoryAudit* audit = nullptr);

}  // namespace llsamp
