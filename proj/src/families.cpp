#include "llsamp/families.hpp"

#include <algorithm>
#include <cmath>

namespace llsamp {

double binomial_tail_leq(int64_t m, int64_t t, double prob) {
    if (t < 0) return 0.0;
    if (t >= m) return 1.0;
    if (prob <= 0.0) return 1.0;
    if (prob >= 1.0) return 0.0;  // t < m
    if (m <= 1000) {
        double term = std::pow(1.0 - prob, static_cast<double>(m));
        double ratio = prob / (1.0 - prob);
        double sum = term;
        for (int64_t i = 0; i < t; ++i) {
            term *= ratio * static_cast<double>(m - i) / static_cast<double>(i + 1);
            sum += term;
        }
        return sum < 1.0 ? sum : 1.0;
    }
    // log-space terms, summed against the max term
    const double lp = std::log(prob), l1p = std::log1p(-prob);
    const double lgm = std::lgamma(static_cast<double>(m) + 1.0);
    double max_log = -HUGE_VAL;
    std::vector<double> logs(static_cast<size_t>(t) + 1);
    for (int64_t i = 0; i <= t; ++i) {
        double lt = lgm - std::lgamma(static_cast<double>(i) + 1.0) -
                    std::lgamma(static_cast<double>(m - i) + 1.0) + static_cast<double>(i) * lp +
                    static_cast<double>(m - i) * l1p;
        logs[static_cast<size_t>(i)] = lt;
        max_log = std::max(max_log, lt);
    }
    double sum = 0.0;
    for (double lt : logs) sum += std::exp(lt - max_log);
    double out = std::exp(max_log) * sum;
    return out < 1.0 ? out : 1.0;
}

bool has_closed_form(const ConstraintPayload& p) {
    if (const auto* col = std::get_if<RobustColoringEdge>(&p)) return col->closed_form();
    return true;
}

bool satisfied_by(const ConstraintPayload& p, const CspFormula& f, const PartialAssignment& sigma) {
    return satisfied_by(p, f, assignment_state(sigma));
}

double violation_probability(const ConstraintPayload& p, const CspFormula& f, const PartialAssignment& sigma) {
    return violation_probability(p, f, assignment_state(sigma));
}

double max_violation_probability(const CspFormula& f) {
    auto empty = [](VarId) { return kUnset; };
    double p = 0.0;
    for (ConstraintId c = 0; c < f.num_constraints(); ++c)
        p = std::max(p, violation_probability(f.constraint(c).payload, f, empty));
    return p;
}

RobustSatClause make_robust_sat(std::vector<Literal> literals, double delta) {
    if (delta <= 0.0 || delta >= 1.0) throw ParseError("robust_sat delta must be in (0,1)");
    const int k = static_cast<int>(literals.size());
    RobustSatClause c;
    c.literals = std::move(literals);
    c.required_true = static_cast<int>(std::ceil(delta * k));
    if (c.required_true < 1) c.required_true = 1;
    c.delta = delta;
    return c;
}

RobustColoringEdge make_robust_coloring(std::vector<VarId> vertices, double delta) {
    if (delta <= 0.0 || delta >= 1.0) throw ParseError("robust_coloring delta must be in (0,1)");
    const int k = static_cast<int>(vertices.size());
    RobustColoringEdge c;
    c.vertices = std::move(vertices);
    c.bad_count = static_cast<int>(std::ceil((1.0 - delta) * k));
    if (c.bad_count < 1) c.bad_count = 1;
    c.original_arity = k;
    c.delta = delta;
    return c;
}

}  // namespace llsamp
