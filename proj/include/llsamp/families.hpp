#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>

#include "llsamp/csp.hpp"
#include "llsamp/errors.hpp"

namespace llsamp {

// P[Bin(m, prob) <= t], exact summation with stable incremental term
// updates; switches to log-space terms for m > 1000.
double binomial_tail_leq(int64_t m, int64_t t, double prob);

bool has_closed_form(const ConstraintPayload& p);

// The per-family oracles take the scope state through a callable
// state(VarId) -> int32_t returning a value index, kStar or kUnset.
// STAR and UNSET are both unassigned for conditioning purposes.

namespace detail {

template <class StateFn>
bool sat_satisfied(const RobustSatClause& c, StateFn&& state) {
    int true_assigned = 0;
    for (const Literal& l : c.literals) {
        int32_t s = state(l.var);
        if (s >= 0 && (s == 1) != l.negated) ++true_assigned;
    }
    return true_assigned >= c.required_true;
}

template <class StateFn>
bool coloring_satisfied(const RobustColoringEdge& c, const CspFormula& f, StateFn&& state) {
    const int q = f.domain_size(c.vertices[0]);
    int unassigned = 0;
    // counts[j] = offset + assigned-to-j; worst completion stacks all
    // unassigned vertices on one color.
    int counts[64];
    int* cnt = counts;
    std::vector<int> heap;
    if (q > 64) {
        heap.assign(q, 0);
        cnt = heap.data();
    } else {
        for (int j = 0; j < q; ++j) counts[j] = 0;
    }
    if (!c.color_offsets.empty())
        for (int j = 0; j < q; ++j) cnt[j] = c.color_offsets[j];
    for (VarId v : c.vertices) {
        int32_t s = state(v);
        if (s >= 0)
            ++cnt[s];
        else
            ++unassigned;
    }
    for (int j = 0; j < q; ++j)
        if (cnt[j] + unassigned >= c.bad_count) return false;
    return true;
}

template <class StateFn>
bool table_satisfied(const TableConstraint& c, StateFn&& state) {
    // Satisfied by sigma iff every forbidden row conflicts with sigma on
    // some assigned variable; a row consistent with sigma is itself a
    // violating completion, so this check is exact.
    for (const auto& row : c.forbidden) {
        bool consistent = true;
        for (size_t i = 0; i < row.size() && consistent; ++i) {
            int32_t s = state(c.scope[i]);
            if (s >= 0 && s != row[i]) consistent = false;
        }
        if (consistent) return false;
    }
    return true;
}

template <class ValueFn>
bool sat_violated_full(const RobustSatClause& c, ValueFn&& value) {
    int trues = 0;
    for (const Literal& l : c.literals)
        if ((value(l.var) == 1) != l.negated) ++trues;
    return trues < c.required_true;
}

template <class ValueFn>
bool coloring_violated_full(const RobustColoringEdge& c, const CspFormula& f, ValueFn&& value) {
    const int q = f.domain_size(c.vertices[0]);
    int counts[64];
    int* cnt = counts;
    std::vector<int> heap;
    if (q > 64) {
        heap.assign(q, 0);
        cnt = heap.data();
    } else {
        for (int j = 0; j < q; ++j) counts[j] = 0;
    }
    if (!c.color_offsets.empty())
        for (int j = 0; j < q; ++j) cnt[j] = c.color_offsets[j];
    for (VarId v : c.vertices)
        if (++cnt[value(v)] >= c.bad_count) return true;
    return false;
}

template <class ValueFn>
bool table_violated_full(const TableConstraint& c, ValueFn&& value) {
    for (const auto& row : c.forbidden) {
        bool match = true;
        for (size_t i = 0; i < row.size() && match; ++i)
            if (value(c.scope[i]) != row[i]) match = false;
        if (match) return true;
    }
    return false;
}

template <class StateFn>
double sat_violation_prob(const RobustSatClause& c, StateFn&& state) {
    int true_assigned = 0, unassigned = 0;
    for (const Literal& l : c.literals) {
        int32_t s = state(l.var);
        if (s < 0)
            ++unassigned;
        else if ((s == 1) != l.negated)
            ++true_assigned;
    }
    return binomial_tail_leq(unassigned, c.required_true - 1 - true_assigned, 0.5);
}

template <class StateFn>
double coloring_violation_prob(const RobustColoringEdge& c, const CspFormula& f, StateFn&& state) {
    if (!c.closed_form())
        throw NotClosedFormError("robust coloring with 2*bad_count <= arity has no closed form");
    const int q = f.domain_size(c.vertices[0]);
    std::vector<int> cnt(q, 0);
    if (!c.color_offsets.empty()) cnt = c.color_offsets;
    int unassigned = 0;
    for (VarId v : c.vertices) {
        int32_t s = state(v);
        if (s >= 0)
            ++cnt[s];
        else
            ++unassigned;
    }
    // bad_count > original_arity / 2 makes the per-color events disjoint,
    // so the violation probability is the plain sum of binomial tails.
    double p = 0.0;
    for (int j = 0; j < q; ++j) {
        int need = c.bad_count - cnt[j];  // uncolored vertices required on j
        p += 1.0 - binomial_tail_leq(unassigned, need - 1, 1.0 / q);
    }
    return p < 1.0 ? p : 1.0;
}

template <class StateFn>
double table_violation_prob(const TableConstraint& c, const CspFormula& f, StateFn&& state) {
    // Forbidden rows are distinct full scope assignments, so each row
    // consistent with sigma is exactly one violating completion.
    double completions = 1.0;
    for (VarId v : c.scope)
        if (state(v) < 0) completions *= f.domain_size(v);
    int64_t consistent = 0;
    for (const auto& row : c.forbidden) {
        bool ok = true;
        for (size_t i = 0; i < row.size() && ok; ++i) {
            int32_t s = state(c.scope[i]);
            if (s >= 0 && s != row[i]) ok = false;
        }
        if (ok) ++consistent;
    }
    return static_cast<double>(consistent) / completions;
}

}  // namespace detail

// True iff every completion of the unassigned scope variables satisfies c
// (Assumption 1 evaluation oracle). Monotone in sigma.
template <class StateFn>
    requires std::invocable<StateFn&, VarId>
bool satisfied_by(const ConstraintPayload& p, const CspFormula& f, StateFn&& state) {
    if (const auto* sat = std::get_if<RobustSatClause>(&p)) return detail::sat_satisfied(*sat, state);
    if (const auto* col = std::get_if<RobustColoringEdge>(&p)) return detail::coloring_satisfied(*col, f, state);
    return detail::table_satisfied(std::get<TableConstraint>(p), state);
}

// Violation under a full assignment of the scope.
template <class ValueFn>
    requires std::invocable<ValueFn&, VarId>
bool violated_by_full(const ConstraintPayload& p, const CspFormula& f, ValueFn&& value) {
    if (const auto* sat = std::get_if<RobustSatClause>(&p)) return detail::sat_violated_full(*sat, value);
    if (const auto* col = std::get_if<RobustColoringEdge>(&p)) return detail::coloring_violated_full(*col, f, value);
    return detail::table_violated_full(std::get<TableConstraint>(p), value);
}

// Exact P over uniform completions that c is violated given sigma.
// Throws NotClosedFormError for coloring edges lacking the disjointness
// capability; callers then fall back to the Monte-Carlo frozen path.
template <class StateFn>
    requires std::invocable<StateFn&, VarId>
double violation_probability(const ConstraintPayload& p, const CspFormula& f, StateFn&& state) {
    if (const auto* sat = std::get_if<RobustSatClause>(&p)) return detail::sat_violation_prob(*sat, state);
    if (const auto* col = std::get_if<RobustColoringEdge>(&p)) return detail::coloring_violation_prob(*col, f, state);
    return detail::table_violation_prob(std::get<TableConstraint>(p), f, state);
}

inline auto assignment_state(const PartialAssignment& sigma) {
    return [&sigma](VarId v) { return sigma.state(v); };
}

bool satisfied_by(const ConstraintPayload& p, const CspFormula& f, const PartialAssignment& sigma);
double violation_probability(const ConstraintPayload& p, const CspFormula& f, const PartialAssignment& sigma);

// Max over constraints of the exact violation probability at the empty
// assignment; throws NotClosedFormError if some family lacks one.
double max_violation_probability(const CspFormula& f);

// Builders computing the integer thresholds from delta.
RobustSatClause make_robust_sat(std::vector<Literal> literals, double delta);
RobustColoringEdge make_robust_coloring(std::vector<VarId> vertices, double delta);

}  // namespace llsamp
