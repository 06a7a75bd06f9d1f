#include "llsamp/frozen.hpp"

#include <cmath>

#include "llsamp/errors.hpp"
#include "llsamp/families.hpp"

namespace llsamp {

uint64_t FrozenOracleConfig::compute_trials(const CspFormula& f, const LllParameters& params,
                                            double epsilon, double delta) {
    const double n = std::max(1, f.num_variables());
    const double num = std::log(4.0e3 * f.max_arity() * std::pow(f.degree(), 7) * n /
                                (epsilon * epsilon));
    const double den = 0.33 * params.p_prime * delta * delta;
    double trials = std::ceil(num / den);
    if (!(trials >= 1.0)) trials = 1.0;
    if (trials > 9.0e18) throw BudgetExceededError("Monte-Carlo trial count overflows a 64-bit counter");
    return static_cast<uint64_t>(trials);
}

FrozenOracle::FrozenOracle(const CspFormula& f, const LllParameters& params,
                           FrozenOracleConfig config, PhiloxRng* rng, RunStats* stats)
    : f_(f), params_(params), config_(config), rng_(rng), stats_(stats) {
    if (config_.mode == FrozenOracleConfig::Mode::MonteCarlo) {
        trials_ = config_.trials ? config_.trials
                                 : FrozenOracleConfig::compute_trials(f, params, config_.epsilon,
                                                                      config_.delta);
        memo_.resize(f.num_constraints());
    }
}

double FrozenOracle::chernoff_error_bound(double p_prime, double delta, uint64_t trials) {
    return 2.0 * std::exp(-(delta * delta / 3.0) * 0.99 * p_prime * static_cast<double>(trials));
}

std::string FrozenOracle::memo_key(ConstraintId c, const PartialAssignment& sigma) const {
    // fixed-width code per scope variable (q_v + 2 symbols), scope order
    const auto& scope = f_.scope(c);
    std::string key(scope.size() * 4, '\0');
    for (size_t i = 0; i < scope.size(); ++i) {
        int32_t s = sigma.state(scope[i]);
        uint32_t code = s >= 0 ? static_cast<uint32_t>(s)
                               : (s == kStar ? static_cast<uint32_t>(f_.domain_size(scope[i]))
                                             : static_cast<uint32_t>(f_.domain_size(scope[i])) + 1);
        key[i * 4 + 0] = static_cast<char>(code);
        key[i * 4 + 1] = static_cast<char>(code >> 8);
        key[i * 4 + 2] = static_cast<char>(code >> 16);
        key[i * 4 + 3] = static_cast<char>(code >> 24);
    }
    return key;
}

bool FrozenOracle::monte_carlo_decide(ConstraintId c, const PartialAssignment& sigma) {
    const Constraint& con = f_.constraint(c);
    // A sigma-satisfied constraint has conditional violation probability 0;
    // answering "not frozen" directly is consistent (the answer is a
    // deterministic function of the scope restriction).
    ++stats_->eval_queries;
    if (satisfied_by(con.payload, f_, sigma)) return false;

    const auto& scope = con.scope;
    if (scratch_.size() < static_cast<size_t>(f_.num_variables())) scratch_.resize(f_.num_variables());
    uint64_t violated = 0;
    auto value = [&](VarId v) { return scratch_[v]; };
    for (uint64_t t = 0; t < trials_; ++t) {
        for (VarId v : scope) {
            int32_t s = sigma.state(v);
            scratch_[v] = s >= 0 ? s
                                 : static_cast<int>(rng_->uniform_index(
                                       static_cast<uint32_t>(f_.domain_size(v))));
        }
        ++stats_->eval_queries;
        ++stats_->monte_carlo_trials;
        if (violated_by_full(con.payload, f_, value)) ++violated;
    }
    return static_cast<double>(violated) >
           0.995 * params_.p_prime * static_cast<double>(trials_);
}

bool FrozenOracle::is_frozen(ConstraintId c, const PartialAssignment& sigma) {
    ++stats_->frozen_queries;
    if (config_.mode == FrozenOracleConfig::Mode::Exact)
        return violation_probability(f_.constraint(c).payload, f_, sigma) > params_.p_prime;
    std::string key = memo_key(c, sigma);
    auto& table = memo_[c];
    auto it = table.find(key);
    if (it != table.end()) return it->second;
    bool ans = monte_carlo_decide(c, sigma);
    table.emplace(std::move(key), ans);
    return ans;
}

bool FrozenOracle::is_fixed(VarId v, const PartialAssignment& sigma) {
    if (!sigma.is_unset(v)) return true;  // accessed
    for (ConstraintId c : f_.constraints_of(v))
        if (is_frozen(c, sigma)) return true;
    return false;
}

void FrozenOracle::reset() {
    for (auto& table : memo_) table.clear();
}

}  // namespace llsamp
