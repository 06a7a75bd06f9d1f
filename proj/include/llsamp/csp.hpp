#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace llsamp {

using VarId = int32_t;
using ConstraintId = int32_t;

// Partial-assignment states. Values are 0..q_v-1; the two specials mark
// accessed-but-unassigned and unaccessed variables.
constexpr int32_t kStar = -1;
constexpr int32_t kUnset = -2;
constexpr VarId kNoVar = -1;

struct Variable {
    std::string name;
    std::vector<std::string> labels;  // ordered domain values, q_v = labels.size()

    int domain_size() const { return static_cast<int>(labels.size()); }
};

struct Literal {
    VarId var;
    bool negated;
};

// Clause over Boolean variables requiring at least `required_true` of its
// literals to be true. required_true is precomputed as ceil(delta * k) at
// construction; plain SAT is required_true == 1.
struct RobustSatClause {
    std::vector<Literal> literals;
    int required_true;
    double delta;
};

// Hyperedge over same-domain variables, violated when some color is taken
// by at least `bad_count` vertices. bad_count = ceil((1-delta) * k) at
// construction. color_offsets carries per-color counts folded in by
// simplification; original_arity is the arity before any substitution and
// decides whether the per-color tail events are provably disjoint
// (2 * bad_count > original_arity), which is what the closed-form
// violation probability requires.
struct RobustColoringEdge {
    std::vector<VarId> vertices;
    int bad_count;
    int original_arity;
    std::vector<int> color_offsets;  // empty means all zero
    double delta;

    bool closed_form() const { return 2 * bad_count > original_arity; }
};

// Explicit list of forbidden full scope assignments (value indices).
struct TableConstraint {
    std::vector<VarId> scope;
    std::vector<std::vector<int>> forbidden;
};

using ConstraintPayload = std::variant<RobustSatClause, RobustColoringEdge, TableConstraint>;

struct Constraint {
    ConstraintPayload payload;
    std::vector<VarId> scope;  // distinct variable ids, matches payload order
};

// Immutable CSP formula: variables with finite domains plus constraints,
// with variable->constraint incidence and constraint dependency adjacency
// built at construction. Safe to share across threads once built.
class CspFormula {
public:
    CspFormula(std::vector<Variable> variables, std::vector<ConstraintPayload> payloads);

    int num_variables() const { return static_cast<int>(variables_.size()); }
    int num_constraints() const { return static_cast<int>(constraints_.size()); }
    const Variable& variable(VarId v) const { return variables_[v]; }
    const std::vector<Variable>& variables() const { return variables_; }
    const Constraint& constraint(ConstraintId c) const { return constraints_[c]; }
    const std::vector<VarId>& scope(ConstraintId c) const { return constraints_[c].scope; }
    const std::vector<ConstraintId>& constraints_of(VarId v) const { return var_constraints_[v]; }
    // Dependent constraints sharing a variable with c, excluding c itself.
    const std::vector<ConstraintId>& neighbors(ConstraintId c) const { return neighbors_[c]; }

    int domain_size(VarId v) const { return variables_[v].domain_size(); }
    int max_domain() const { return q_; }       // q
    int max_arity() const { return k_; }        // k
    int degree() const { return delta_; }       // Delta, self-inclusive

    // Recomputes adjacency from scopes and compares; throws on mismatch.
    void validate() const;

private:
    std::vector<Variable> variables_;
    std::vector<Constraint> constraints_;
    std::vector<std::vector<ConstraintId>> var_constraints_;
    std::vector<std::vector<ConstraintId>> neighbors_;
    int q_ = 2;
    int k_ = 1;
    int delta_ = 1;
};

// Per-variable state in Domain + {STAR, UNSET} with an undo journal.
// Mutations go through set(); undo_to(mark) restores the pre-mark state
// bit-exactly, including the star list. Single-owner, single-threaded.
class PartialAssignment {
public:
    explicit PartialAssignment(const CspFormula& formula);

    int32_t state(VarId v) const { return state_[v]; }
    bool is_assigned(VarId v) const { return state_[v] >= 0; }
    bool is_star(VarId v) const { return state_[v] == kStar; }
    bool is_unset(VarId v) const { return state_[v] == kUnset; }
    int num_variables() const { return static_cast<int>(state_.size()); }
    int num_assigned() const { return assigned_; }   // |Lambda(sigma)|
    int num_accessed() const { return accessed_; }   // |Lambda+(sigma)|
    int num_stars() const { return accessed_ - assigned_; }

    void set(VarId v, int32_t s);
    size_t mark() const { return journal_.size(); }
    void undo_to(size_t mark);
    void clear();  // all UNSET, journal discarded

    // Iterates star variables in insertion order.
    template <class F>
    void for_each_star(F&& f) const {
        for (VarId v = star_head_; v != kNoVar; v = star_next_[v]) f(v);
    }
    std::vector<VarId> star_list() const;
    // Full-scan consistency check of the star list against states.
    bool star_list_consistent() const;

private:
    void apply(VarId v, int32_t s);
    void star_insert(VarId v);
    void star_remove(VarId v);

    std::vector<int32_t> state_;
    std::vector<std::pair<VarId, int32_t>> journal_;
    std::vector<VarId> star_next_, star_prev_;
    VarId star_head_ = kNoVar, star_tail_ = kNoVar;
    int assigned_ = 0;
    int accessed_ = 0;
};

}  // namespace llsamp
