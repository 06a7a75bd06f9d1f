#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "llsamp/errors.hpp"
#include "llsamp/families.hpp"
#include "llsamp/inference.hpp"
#include "llsamp/instance_io.hpp"
#include "llsamp/params.hpp"
#include "llsamp/sampler.hpp"
#include "llsamp/verify.hpp"

namespace {

using namespace llsamp;

constexpr int kExitParse = 1;
constexpr int kExitCondition = 2;
constexpr int kExitStatFail = 3;
constexpr int kExitBudget = 4;

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

struct CommonOpts {
    std::string instance;
    uint64_t seed = 0;
    std::string mode = "auto";       // exact | mc | auto
    std::string condition = "auto";  // strong | weak | auto
    double epsilon = 0.01;
    double p_max_override = -1.0;
    bool debug = false;
    unsigned jobs = 1;
    uint64_t coin_budget = 100'000'000;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--instance", o.instance, "instance file (JSON or DIMACS rsat)")->required();
    cmd->add_option("--seed", o.seed, "RNG seed");
    cmd->add_option("--mode", o.mode, "frozen oracle: exact|mc|auto")
        ->check(CLI::IsMember({"exact", "mc", "auto"}));
    cmd->add_option("--condition", o.condition, "parameter regime: strong|weak|auto")
        ->check(CLI::IsMember({"strong", "weak", "auto"}));
    cmd->add_option("--epsilon", o.epsilon, "sampling bias target for the Monte-Carlo oracle");
    cmd->add_option("--p-max", o.p_max_override,
                    "override for the max violation probability (needed when no closed form)");
    cmd->add_flag("--debug", o.debug, "enable debug invariant assertions");
    cmd->add_option("--jobs", o.jobs, "worker threads for independent samples");
    cmd->add_option("--coin-budget", o.coin_budget, "coin draw budget per factory call");
}

struct Prepared {
    CspFormula formula;
    LllParameters params;
    SamplerConfig config;
    double p_max = 0.0;
};

double resolve_p_max(const CspFormula& f, const CommonOpts& o) {
    if (o.p_max_override >= 0.0) return o.p_max_override;
    return max_violation_probability(f);  // may throw NotClosedFormError
}

bool all_closed_form(const CspFormula& f) {
    for (ConstraintId c = 0; c < f.num_constraints(); ++c)
        if (!has_closed_form(f.constraint(c).payload)) return false;
    return true;
}

Prepared prepare(const CommonOpts& o) {
    CspFormula f = load_instance(o.instance);
    double p_max = resolve_p_max(f, o);

    std::optional<LllParameters> params;
    if (o.condition == "strong") {
        params = derive_parameters(f, p_max, LllMode::Strong);
    } else if (o.condition == "weak") {
        params = derive_parameters(f, p_max, LllMode::Weak);
    } else {
        try {
            params = derive_parameters(f, p_max, LllMode::Strong);
        } catch (const ConditionViolatedError&) {
            params = derive_parameters(f, p_max, LllMode::Weak);
        }
    }

    SamplerConfig cfg;
    cfg.seed = o.seed;
    cfg.debug_assertions = o.debug;
    cfg.coin_draw_budget = o.coin_budget;
    bool exact = o.mode == "exact" || (o.mode == "auto" && all_closed_form(f));
    cfg.frozen = exact ? FrozenOracleConfig::exact() : FrozenOracleConfig::monte_carlo(o.epsilon);
    return Prepared{std::move(f), std::move(*params), cfg, p_max};
}

VarId var_by_name(const CspFormula& f, const std::string& name) {
    for (VarId v = 0; v < f.num_variables(); ++v)
        if (f.variable(v).name == name) return v;
    throw ParseError("unknown variable: " + name);
}

int cmd_sample(const CommonOpts& o, uint64_t samples, const std::string& out_path) {
    Prepared p = prepare(o);
    std::vector<std::string> lines(samples);
    const unsigned jobs = std::max(1u, o.jobs);
    std::atomic<uint64_t> next{0};
    std::atomic<bool> failed{false};
    std::string error;
    std::mutex error_mu;
    auto worker = [&]() {
        SamplerRun run(p.formula, p.params, p.config, 0);
        for (;;) {
            uint64_t i = next.fetch_add(1);
            if (i >= samples || failed.load()) return;
            try {
                run.reset(i);
                std::vector<int> values = run.sample();
                lines[i] = assignment_to_jsonl(p.formula, values);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                failed.store(true);
                try {
                    throw;
                } catch (const std::exception& e) {
                    error = e.what();
                }
                return;
            }
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (unsigned t = 0; t < jobs; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    if (failed.load()) throw BudgetExceededError(error);

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        if (!file) throw ParseError("cannot open output file: " + out_path);
        out = &file;
    }
    for (const std::string& line : lines) *out << line << "\n";
    return 0;
}

int cmd_marginal(const CommonOpts& o, const std::string& var, uint64_t samples) {
    Prepared p = prepare(o);
    VarId v = var_by_name(p.formula, var);
    const int qv = p.formula.domain_size(v);
    std::vector<uint64_t> counts(qv, 0);
    SamplerRun run(p.formula, p.params, p.config, 0);
    for (uint64_t i = 0; i < samples; ++i) {
        run.reset(i);
        ++counts[static_cast<size_t>(marginal_sample_run(run, v))];
    }
    std::cout << "{\"variable\":\"" << var << "\",\"samples\":" << samples << ",\"counts\":{";
    for (int x = 0; x < qv; ++x)
        std::cout << (x ? "," : "") << "\"" << p.formula.variable(v).labels[x] << "\":" << counts[x];
    std::cout << "},\"frequency\":{";
    for (int x = 0; x < qv; ++x)
        std::cout << (x ? "," : "") << "\"" << p.formula.variable(v).labels[x]
                  << "\":" << fmt17(samples ? static_cast<double>(counts[x]) / samples : 0.0);
    std::cout << "}}\n";
    return 0;
}

int cmd_infer(const CommonOpts& o, const std::string& var, double epsilon, double delta) {
    Prepared p = prepare(o);
    VarId v = var_by_name(p.formula, var);
    MarginalEstimate est = infer_marginal(p.formula, p.params, p.config, v, epsilon, delta, 0);
    std::cout << "{\"variable\":\"" << var << "\",\"epsilon\":" << fmt17(epsilon)
              << ",\"delta_fail\":" << fmt17(delta) << ",\"batches\":" << est.batches
              << ",\"batch_size\":" << est.batch_size << ",\"estimates\":{";
    for (int x = 0; x < p.formula.domain_size(v); ++x)
        std::cout << (x ? "," : "") << "\"" << p.formula.variable(v).labels[x]
                  << "\":" << fmt17(est.estimates[x]);
    std::cout << "}}\n";
    return 0;
}

int cmd_check(const CommonOpts& o) {
    CspFormula f = load_instance(o.instance);
    double p_max = resolve_p_max(f, o);
    StrongConditionReport strong = check_strong_condition(f, p_max);
    double weak_lhs = weak_condition_lhs(f, p_max);
    std::cout << "n=" << f.num_variables() << " m=" << f.num_constraints() << " q=" << f.max_domain()
              << " k=" << f.max_arity() << " Delta=" << f.degree() << "\n";
    std::cout << "p_max=" << fmt17(p_max) << "\n";
    std::cout << "strong=" << (strong.ok ? "true" : "false") << " lhs=" << fmt17(strong.lhs)
              << " rhs=" << fmt17(strong.rhs) << "\n";
    std::cout << "weak=" << (weak_lhs < 1.0 ? "true" : "false") << " lhs=" << fmt17(weak_lhs)
              << " rhs=1\n";
    bool accepted = false;
    for (LllMode mode : {LllMode::Strong, LllMode::Weak}) {
        try {
            LllParameters params = derive_parameters(f, p_max, mode);
            std::cout << (mode == LllMode::Strong ? "strong_params" : "weak_params")
                      << ": p'=" << fmt17(params.p_prime) << " eta=" << fmt17(params.eta)
                      << " zeta=" << fmt17(params.zeta) << " theta_min=" << fmt17(params.theta_min)
                      << "\n";
            accepted = true;
        } catch (const ConditionViolatedError& e) {
            std::cout << (mode == LllMode::Strong ? "strong_params" : "weak_params")
                      << ": rejected (" << e.what() << ")\n";
        }
    }
    return accepted ? 0 : kExitCondition;
}

int cmd_verify(const CommonOpts& o, uint64_t samples, double significance) {
    Prepared p = prepare(o);
    ExactDistribution exact = brute_force(p.formula);
    if (exact.solutions.empty()) throw ConditionViolatedError("instance is unsatisfiable");

    std::vector<uint64_t> counts(exact.solutions.size(), 0);
    std::vector<int> values(p.formula.num_variables());
    SamplerRun run(p.formula, p.params, p.config, 0);
    for (uint64_t i = 0; i < samples; ++i) {
        run.reset(i);
        values = run.sample();
        uint64_t code = exact.encode(values);
        auto it = std::lower_bound(exact.solutions.begin(), exact.solutions.end(), code);
        if (it == exact.solutions.end() || *it != code)
            throw UnsatisfiableError("sample is not a solution");
        ++counts[static_cast<size_t>(it - exact.solutions.begin())];
    }
    std::vector<double> probs(exact.solutions.size(),
                              1.0 / static_cast<double>(exact.solutions.size()));
    GofResult gof = gof_test(counts, probs, significance);

    // per-variable marginal error from the same samples
    double max_marginal_err = 0.0;
    std::vector<std::vector<uint64_t>> value_counts(p.formula.num_variables());
    for (VarId v = 0; v < p.formula.num_variables(); ++v)
        value_counts[v].assign(p.formula.domain_size(v), 0);
    for (size_t s = 0; s < exact.solutions.size(); ++s) {
        exact.decode(exact.solutions[s], values);
        for (size_t i = 0; i < exact.free_vars.size(); ++i)
            value_counts[exact.free_vars[i]][values[exact.free_vars[i]]] += counts[s];
    }
    for (size_t i = 0; i < exact.free_vars.size(); ++i) {
        VarId v = exact.free_vars[i];
        for (int x = 0; x < p.formula.domain_size(v); ++x) {
            double emp = static_cast<double>(value_counts[v][x]) / static_cast<double>(samples);
            max_marginal_err = std::max(max_marginal_err, std::abs(emp - exact.marginal(v, x)));
        }
    }

    std::cout << "solutions=" << exact.solutions.size() << " samples=" << samples << "\n";
    std::cout << "chi2=" << fmt17(gof.statistic) << " df=" << gof.df
              << " p_value=" << fmt17(gof.p_value) << " cells=" << gof.pooled_cells << "\n";
    std::cout << "max_marginal_error=" << fmt17(max_marginal_err) << "\n";
    std::cout << "gof=" << (gof.pass ? "pass" : "fail") << "\n";
    return gof.pass ? 0 : kExitStatFail;
}

int cmd_stats(const CommonOpts& o, uint64_t calls) {
    Prepared p = prepare(o);
    std::vector<TailRow> rows = tail_diagnostic(p.formula, p.params, p.config, calls, p.p_max);
    std::cout << "i threshold empirical bound band\n";
    for (const TailRow& r : rows)
        std::cout << r.i << " " << r.threshold << " " << fmt17(r.empirical) << " " << fmt17(r.bound)
                  << " " << fmt17(r.band) << "\n";
    return 0;
}

}  // namespace

namespace {

int run_main(int argc, char** argv) {
    CLI::App app{"uniform CSP-solution sampler in the Lovasz-local-lemma regime"};
    app.require_subcommand(1);

    CommonOpts copts;
    uint64_t samples = 1000;
    std::string out_path;
    std::string var_name;
    double infer_eps = 0.05, infer_delta = 0.05;
    double significance = 1e-3;
    uint64_t calls = 10000;

    CLI::App* c_sample = app.add_subcommand("sample", "draw satisfying assignments (JSON lines)");
    add_common(c_sample, copts);
    c_sample->add_option("--samples", samples, "number of assignments")->required();
    c_sample->add_option("--out", out_path, "output path (default stdout)");

    CLI::App* c_marginal = app.add_subcommand("marginal", "draw from a single-variable marginal");
    add_common(c_marginal, copts);
    c_marginal->add_option("--var", var_name, "variable name")->required();
    c_marginal->add_option("--samples", samples, "number of draws")->required();

    CLI::App* c_infer = app.add_subcommand("infer", "estimate a marginal distribution");
    add_common(c_infer, copts);
    c_infer->add_option("--var", var_name, "variable name")->required();
    c_infer->add_option("--inference-epsilon", infer_eps, "relative error target");
    c_infer->add_option("--delta", infer_delta, "failure budget");

    CLI::App* c_check = app.add_subcommand("check", "report instance parameters and conditions");
    add_common(c_check, copts);

    CLI::App* c_verify = app.add_subcommand("verify", "brute force + chi-squared validation");
    add_common(c_verify, copts);
    c_verify->add_option("--samples", samples, "number of samples")->required();
    c_verify->add_option("--significance", significance, "chi-squared significance level");

    CLI::App* c_stats = app.add_subcommand("stats", "recursion-depth tail diagnostic");
    add_common(c_stats, copts);
    c_stats->add_option("--calls", calls, "number of instrumented marginal samples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitParse;
    }

    try {
        if (c_sample->parsed()) return cmd_sample(copts, samples, out_path);
        if (c_marginal->parsed()) return cmd_marginal(copts, var_name, samples);
        if (c_infer->parsed()) return cmd_infer(copts, var_name, infer_eps, infer_delta);
        if (c_check->parsed()) return cmd_check(copts);
        if (c_verify->parsed()) return cmd_verify(copts, samples, significance);
        if (c_stats->parsed()) return cmd_stats(copts, calls);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const ConditionViolatedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCondition;
    } catch (const NotClosedFormError& e) {
        std::cerr << "error: " << e.what() << " (pass --p-max or --mode mc)\n";
        return kExitCondition;
    } catch (const BudgetExceededError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    }
    return kExitParse;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_main(argc, argv);
    } catch (...) {
        std::cerr << "error: unexpected failure\n";
        return kExitParse;
    }
}
