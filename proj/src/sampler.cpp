#include "llsamp/sampler.hpp"

#include <cmath>

#include "llsamp/errors.hpp"
#include "llsamp/families.hpp"

namespace llsamp {

SamplerRun::SamplerRun(const CspFormula& f, const LllParameters& params, const SamplerConfig& config,
                       uint64_t stream, const DebugHooks* hooks)
    : f_(f),
      params_(params),
      config_(config),
      rng_(config.seed, stream),
      sigma_(f),
      frozen_(f, params, config.frozen, &rng_, &stats_),
      hooks_(hooks),
      var_epoch_(f.num_variables(), 0),
      con_epoch_(f.num_constraints(), 0),
      fix_epoch_(f.num_variables(), 0),
      froz_epoch_(f.num_constraints(), 0),
      fix_val_(f.num_variables(), 0),
      froz_val_(f.num_constraints(), 0) {}

void SamplerRun::reset(uint64_t stream) {
    rng_ = PhiloxRng(config_.seed, stream);
    sigma_.clear();
    stats_ = RunStats{};
    frozen_.reset();
    current_path_len_ = 0;
}

int SamplerRun::zone_value(VarId v, double r) const {
    // index = floor(r / theta_v) + 1 clamped to [1, q_v], zero-based here
    int idx = static_cast<int>(r / params_.theta_of(v));
    const int qv = f_.domain_size(v);
    return idx < qv ? idx : qv - 1;
}

void SamplerRun::assert_p_prime_q_bound() {
    const double bound = params_.p_prime * f_.max_domain();
    for (ConstraintId c = 0; c < f_.num_constraints(); ++c) {
        if (!has_closed_form(f_.constraint(c).payload)) continue;
        double p = violation_probability(f_.constraint(c).payload, f_, sigma_);
        if (p > bound * (1.0 + 1e-9) + 1e-15)
            throw Error("debug invariant violated: P[!c|sigma] = " + std::to_string(p) +
                        " > p'q = " + std::to_string(bound) + " at constraint " + std::to_string(c));
    }
}

void SamplerRun::check_margin_sample_entry(VarId v) {
    if (!config_.debug_assertions) return;
    if (!sigma_.is_unset(v)) throw Error("debug invariant violated: sigma(v) != unset at MarginSample");
    if (sigma_.num_stars() != 0)
        throw Error("debug invariant violated: star present in sigma at MarginSample entry");
    if (config_.assert_not_fixed && frozen_.is_fixed(v, sigma_))
        throw Error("debug invariant violated: v is sigma-fixed at MarginSample entry");
    assert_p_prime_q_bound();
    if (hooks_ && hooks_->on_entry) hooks_->on_entry(f_, sigma_, v, 0);
}

void SamplerRun::check_margin_overflow_entry(VarId v, int phase) {
    if (!config_.debug_assertions) return;
    if (phase == 1 && !sigma_.is_star(v))
        throw Error("debug invariant violated: sigma(v) != star at MarginOverflow entry");
    assert_p_prime_q_bound();
    if (hooks_ && hooks_->on_entry) hooks_->on_entry(f_, sigma_, v, phase);
}

bool SamplerRun::cached_frozen(ConstraintId c) {
    if (froz_epoch_[c] == epoch_) return froz_val_[c] != 0;
    bool ans = frozen_.is_frozen(c, sigma_);
    froz_epoch_[c] = epoch_;
    froz_val_[c] = ans ? 1 : 0;
    return ans;
}

bool SamplerRun::cached_fixed(VarId v) {
    if (fix_epoch_[v] == epoch_) return fix_val_[v] != 0;
    bool ans = false;
    if (!sigma_.is_unset(v)) {
        ans = true;
    } else {
        for (ConstraintId c : f_.constraints_of(v))
            if (cached_frozen(c)) {
                ans = true;
                break;
            }
    }
    fix_epoch_[v] = epoch_;
    fix_val_[v] = ans ? 1 : 0;
    return ans;
}

std::optional<VarId> SamplerRun::next_var() {
    ++stats_.next_var_calls;
    ++epoch_;
    const uint64_t eval0 = stats_.eval_queries;
    const uint64_t froz0 = stats_.frozen_queries;

    // Depth-first growth of the star-connected region of the fixed
    // sub-hypergraph: an unsatisfied constraint incident to the region
    // links in the sigma-fixed part of its free scope, and its non-fixed
    // free variables form the boundary. A fixed variable adjacent to the
    // region always joins it, so the boundary consists of non-fixed
    // variables only.
    dfs_stack_.clear();
    sigma_.for_each_star([&](VarId v) {
        var_epoch_[v] = epoch_;
        dfs_stack_.push_back(v);
    });
    uint64_t star_con = 0;
    VarId best = kNoVar;
    while (!dfs_stack_.empty()) {
        VarId w = dfs_stack_.back();
        dfs_stack_.pop_back();
        for (ConstraintId c : f_.constraints_of(w)) {
            if (con_epoch_[c] == epoch_) continue;
            con_epoch_[c] = epoch_;
            ++star_con;
            ++stats_.eval_queries;
            if (satisfied_by(f_.constraint(c).payload, f_, sigma_)) continue;
            for (VarId u : f_.scope(c)) {
                if (sigma_.is_assigned(u) || var_epoch_[u] == epoch_) continue;
                if (cached_fixed(u)) {
                    var_epoch_[u] = epoch_;
                    dfs_stack_.push_back(u);
                } else if (best == kNoVar || u < best) {
                    best = u;
                }
            }
        }
    }

    stats_.last_next_var_eval_queries = stats_.eval_queries - eval0;
    stats_.last_next_var_frozen_queries = stats_.frozen_queries - froz0;
    stats_.last_next_var_star_con = star_con;

    if (best == kNoVar) return std::nullopt;
    if (config_.debug_assertions && cached_fixed(best))
        throw Error("debug invariant violated: next_var returned a sigma-fixed variable");
    return best;
}

int SamplerRun::margin_overflow(VarId v_top) {
    struct Frame {
        VarId v;
        size_t mark;
        VarId pending_child = kNoVar;
    };
    std::vector<Frame> frames;
    frames.push_back({v_top, sigma_.mark()});
    int ret = -1;

    while (!frames.empty()) {
        Frame& fr = frames.back();
        if (ret >= 0) {
            // child finished: its value lands in this frame's journal
            sigma_.set(fr.pending_child, ret);
            fr.pending_child = kNoVar;
            ret = -1;
        }
        check_margin_overflow_entry(fr.v, 1);

        std::optional<VarId> u = next_var();
        if (u) {
            ++stats_.path_steps_total;
            if (++current_path_len_ > config_.path_length_guard)
                throw RecursionGuardError("MarginOverflow path length exceeded " +
                                          std::to_string(config_.path_length_guard));
            if (hooks_ && hooks_->on_entry && config_.debug_assertions)
                hooks_->on_entry(f_, sigma_, *u, 2);
            double r = rng_.uniform53();
            if (r < f_.domain_size(*u) * params_.theta_of(*u)) {
                sigma_.set(*u, zone_value(*u, r));
            } else {
                sigma_.set(*u, kStar);
                fr.pending_child = *u;
                frames.push_back({*u, sigma_.mark()});
            }
            continue;
        }

        // no candidate left: Bernoulli factory on v's component
        MarginOverflowOptions opts;
        opts.coin_draw_budget = config_.coin_draw_budget;
        opts.rejection_trial_cap = config_.rejection_trial_cap;
        opts.uniform_shortcut = !config_.disable_uniform_shortcut;
        int x = margin_overflow_draw(f_, sigma_, fr.v, params_, rng_, &stats_, opts);
        sigma_.undo_to(fr.mark);
        frames.pop_back();
        ret = x;
    }
    return ret;
}

int SamplerRun::margin_sample(VarId v) {
    check_margin_sample_entry(v);
    current_path_len_ = 0;
    int out;
    double r = rng_.uniform53();
    if (r < f_.domain_size(v) * params_.theta_of(v)) {
        out = zone_value(v, r);
    } else {
        size_t mark = sigma_.mark();
        sigma_.set(v, kStar);
        out = margin_overflow(v);
        sigma_.undo_to(mark);
    }
    stats_.margin_sample_path_lengths.push_back(static_cast<uint32_t>(current_path_len_));
    return out;
}

std::vector<int> SamplerRun::sample() {
    sigma_.clear();
    for (VarId v = 0; v < f_.num_variables(); ++v) {
        if (frozen_.is_fixed(v, sigma_)) continue;
        int x = margin_sample(v);
        sigma_.set(v, x);
    }
    std::vector<VarId> rest;
    for (VarId v = 0; v < f_.num_variables(); ++v)
        if (sigma_.is_unset(v)) rest.push_back(v);
    auto completed =
        rejection_sampling(f_, sigma_, rest, rng_, config_.rejection_trial_cap, &stats_);
    for (auto [v, x] : completed) sigma_.set(v, x);

    std::vector<int> out(f_.num_variables());
    for (VarId v = 0; v < f_.num_variables(); ++v) {
        if (!sigma_.is_assigned(v)) throw UnsatisfiableError("variable left unassigned after sampling");
        out[v] = sigma_.state(v);
    }
    auto value = [&](VarId v) { return out[v]; };
    for (ConstraintId c = 0; c < f_.num_constraints(); ++c)
        if (violated_by_full(f_.constraint(c).payload, f_, value))
            throw UnsatisfiableError("output assignment violates constraint " + std::to_string(c));
    return out;
}

std::vector<int> sample_assignment(const CspFormula& f, const LllParameters& params,
                                   const SamplerConfig& config, uint64_t ordinal,
                                   const DebugHooks* hooks, RunStats* stats_out) {
    SamplerRun run(f, params, config, ordinal, hooks);
    std::vector<int> out = run.sample();
    if (stats_out) *stats_out = run.stats();
    return out;
}

}  // namespace llsamp
