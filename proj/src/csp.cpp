#include "llsamp/csp.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "llsamp/errors.hpp"

namespace llsamp {

namespace {

std::vector<VarId> build_scope(const ConstraintPayload& p) {
    std::vector<VarId> s;
    if (const auto* sat = std::get_if<RobustSatClause>(&p)) {
        for (const Literal& l : sat->literals) s.push_back(l.var);
    } else if (const auto* col = std::get_if<RobustColoringEdge>(&p)) {
        s = col->vertices;
    } else {
        s = std::get<TableConstraint>(p).scope;
    }
    return s;
}

void check_payload(const ConstraintPayload& p, const std::vector<Variable>& vars, ConstraintId id) {
    const auto fail = [id](const std::string& msg) {
        throw ParseError("constraint " + std::to_string(id) + ": " + msg);
    };
    std::vector<VarId> s = build_scope(p);
    if (s.empty()) fail("empty scope");
    std::unordered_set<VarId> seen;
    for (VarId v : s) {
        if (v < 0 || v >= static_cast<VarId>(vars.size())) fail("scope id out of range");
        if (!seen.insert(v).second) fail("repeated scope variable");
    }
    if (const auto* sat = std::get_if<RobustSatClause>(&p)) {
        for (const Literal& l : sat->literals)
            if (vars[l.var].domain_size() != 2) fail("robust_sat literal on non-Boolean variable");
        if (sat->required_true < 1) fail("required_true < 1");
    } else if (const auto* col = std::get_if<RobustColoringEdge>(&p)) {
        int q = vars[col->vertices[0]].domain_size();
        for (VarId v : col->vertices)
            if (vars[v].domain_size() != q) fail("coloring vertices with differing domain sizes");
        if (!col->color_offsets.empty() && static_cast<int>(col->color_offsets.size()) != q)
            fail("color_offsets size mismatch");
        if (col->bad_count < 1) fail("bad_count < 1");
        if (col->original_arity < static_cast<int>(col->vertices.size())) fail("original_arity too small");
    } else {
        const auto& tab = std::get<TableConstraint>(p);
        std::set<std::vector<int>> rows;
        for (const auto& row : tab.forbidden) {
            if (row.size() != tab.scope.size()) fail("forbidden row arity mismatch");
            for (size_t i = 0; i < row.size(); ++i)
                if (row[i] < 0 || row[i] >= vars[tab.scope[i]].domain_size())
                    fail("forbidden row value out of domain");
            if (!rows.insert(row).second) fail("duplicate forbidden row");
        }
    }
}

}  // namespace

CspFormula::CspFormula(std::vector<Variable> variables, std::vector<ConstraintPayload> payloads)
    : variables_(std::move(variables)) {
    for (size_t i = 0; i < variables_.size(); ++i) {
        if (variables_[i].domain_size() < 2)
            throw ParseError("variable " + variables_[i].name + ": domain size must be >= 2");
        std::unordered_set<std::string> labels(variables_[i].labels.begin(), variables_[i].labels.end());
        if (labels.size() != variables_[i].labels.size())
            throw ParseError("variable " + variables_[i].name + ": duplicate domain labels");
    }
    constraints_.reserve(payloads.size());
    for (size_t i = 0; i < payloads.size(); ++i) {
        check_payload(payloads[i], variables_, static_cast<ConstraintId>(i));
        Constraint c;
        c.scope = build_scope(payloads[i]);
        c.payload = std::move(payloads[i]);
        constraints_.push_back(std::move(c));
    }

    var_constraints_.assign(variables_.size(), {});
    for (ConstraintId c = 0; c < num_constraints(); ++c)
        for (VarId v : constraints_[c].scope) var_constraints_[v].push_back(c);

    neighbors_.assign(constraints_.size(), {});
    std::vector<uint32_t> mark(constraints_.size(), 0);
    for (ConstraintId c = 0; c < num_constraints(); ++c) {
        const uint32_t stamp = static_cast<uint32_t>(c) + 1;
        for (VarId v : constraints_[c].scope)
            for (ConstraintId c2 : var_constraints_[v])
                if (c2 != c && mark[c2] != stamp) {
                    mark[c2] = stamp;
                    neighbors_[c].push_back(c2);
                }
        std::sort(neighbors_[c].begin(), neighbors_[c].end());
    }

    q_ = 2;
    for (const Variable& v : variables_) q_ = std::max(q_, v.domain_size());
    k_ = 1;
    delta_ = 1;
    for (ConstraintId c = 0; c < num_constraints(); ++c) {
        k_ = std::max(k_, static_cast<int>(constraints_[c].scope.size()));
        delta_ = std::max(delta_, static_cast<int>(neighbors_[c].size()) + 1);
    }
}

void CspFormula::validate() const {
    std::vector<std::vector<ConstraintId>> vc(variables_.size());
    for (ConstraintId c = 0; c < num_constraints(); ++c)
        for (VarId v : constraints_[c].scope) vc[v].push_back(c);
    if (vc != var_constraints_) throw Error("adjacency inconsistent with scopes");
    for (ConstraintId c = 0; c < num_constraints(); ++c) {
        for (ConstraintId c2 : neighbors_[c]) {
            bool shares = false;
            for (VarId v : constraints_[c].scope)
                for (VarId u : constraints_[c2].scope) shares |= (v == u);
            if (!shares || c2 == c) throw Error("dependency adjacency inconsistent");
        }
    }
}

PartialAssignment::PartialAssignment(const CspFormula& formula)
    : state_(formula.num_variables(), kUnset),
      star_next_(formula.num_variables(), kNoVar),
      star_prev_(formula.num_variables(), kNoVar) {}

void PartialAssignment::star_insert(VarId v) {
    star_prev_[v] = star_tail_;
    star_next_[v] = kNoVar;
    if (star_tail_ != kNoVar)
        star_next_[star_tail_] = v;
    else
        star_head_ = v;
    star_tail_ = v;
}

void PartialAssignment::star_remove(VarId v) {
    VarId p = star_prev_[v], n = star_next_[v];
    if (p != kNoVar)
        star_next_[p] = n;
    else
        star_head_ = n;
    if (n != kNoVar)
        star_prev_[n] = p;
    else
        star_tail_ = p;
    star_prev_[v] = star_next_[v] = kNoVar;
}

void PartialAssignment::apply(VarId v, int32_t s) {
    int32_t old = state_[v];
    if (old == s) return;
    if (old == kStar) star_remove(v);
    if (old >= 0) --assigned_;
    if (old != kUnset) --accessed_;
    state_[v] = s;
    if (s == kStar) star_insert(v);
    if (s >= 0) ++assigned_;
    if (s != kUnset) ++accessed_;
}

void PartialAssignment::set(VarId v, int32_t s) {
    if (state_[v] == s) return;
    journal_.emplace_back(v, state_[v]);
    apply(v, s);
}

void PartialAssignment::undo_to(size_t mark) {
    while (journal_.size() > mark) {
        auto [v, prev] = journal_.back();
        journal_.pop_back();
        apply(v, prev);
    }
}

void PartialAssignment::clear() {
    journal_.clear();
    std::fill(state_.begin(), state_.end(), kUnset);
    std::fill(star_next_.begin(), star_next_.end(), kNoVar);
    std::fill(star_prev_.begin(), star_prev_.end(), kNoVar);
    star_head_ = star_tail_ = kNoVar;
    assigned_ = accessed_ = 0;
}

std::vector<VarId> PartialAssignment::star_list() const {
    std::vector<VarId> out;
    for_each_star([&](VarId v) { out.push_back(v); });
    return out;
}

bool PartialAssignment::star_list_consistent() const {
    std::vector<bool> in_list(state_.size(), false);
    size_t count = 0;
    for (VarId v = star_head_; v != kNoVar; v = star_next_[v]) {
        if (in_list[v]) return false;  // cycle
        in_list[v] = true;
        ++count;
    }
    for (size_t v = 0; v < state_.size(); ++v)
        if ((state_[v] == kStar) != in_list[v]) return false;
    return count == static_cast<size_t>(accessed_ - assigned_);
}

}  // namespace llsamp
