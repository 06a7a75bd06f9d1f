#include "llsamp/simplify.hpp"

#include <algorithm>

#include "llsamp/errors.hpp"
#include "llsamp/families.hpp"

namespace llsamp {

SimplifiedFormula simplify(const CspFormula& f, const PartialAssignment& sigma) {
    std::vector<Variable> new_vars;
    std::vector<VarId> var_to_old;
    std::vector<VarId> old_to_new(f.num_variables(), kNoVar);
    for (VarId v = 0; v < f.num_variables(); ++v) {
        if (sigma.is_assigned(v)) continue;
        old_to_new[v] = static_cast<VarId>(new_vars.size());
        var_to_old.push_back(v);
        new_vars.push_back(f.variable(v));
    }

    std::vector<ConstraintPayload> payloads;
    std::vector<ConstraintId> constraint_to_old;
    bool infeasible = false;
    for (ConstraintId c = 0; c < f.num_constraints(); ++c) {
        const ConstraintPayload& p = f.constraint(c).payload;
        if (satisfied_by(p, f, sigma)) continue;

        if (const auto* sat = std::get_if<RobustSatClause>(&p)) {
            RobustSatClause out;
            int true_assigned = 0;
            for (const Literal& l : sat->literals) {
                int32_t s = sigma.state(l.var);
                if (s >= 0) {
                    if ((s == 1) != l.negated) ++true_assigned;
                } else {
                    out.literals.push_back({old_to_new[l.var], l.negated});
                }
            }
            out.required_true = sat->required_true - true_assigned;
            out.delta = sat->delta;
            if (out.literals.empty()) {
                infeasible = true;  // unsatisfied with nothing left to assign
                continue;
            }
            payloads.emplace_back(std::move(out));
        } else if (const auto* col = std::get_if<RobustColoringEdge>(&p)) {
            RobustColoringEdge out;
            const int q = f.domain_size(col->vertices[0]);
            out.color_offsets = col->color_offsets.empty() ? std::vector<int>(q, 0) : col->color_offsets;
            for (VarId v : col->vertices) {
                int32_t s = sigma.state(v);
                if (s >= 0)
                    ++out.color_offsets[s];
                else
                    out.vertices.push_back(old_to_new[v]);
            }
            out.bad_count = col->bad_count;
            out.original_arity = col->original_arity;
            out.delta = col->delta;
            if (out.vertices.empty()) {
                infeasible = true;
                continue;
            }
            payloads.emplace_back(std::move(out));
        } else {
            const auto& tab = std::get<TableConstraint>(p);
            TableConstraint out;
            std::vector<size_t> free_pos;
            for (size_t i = 0; i < tab.scope.size(); ++i) {
                if (!sigma.is_assigned(tab.scope[i])) {
                    free_pos.push_back(i);
                    out.scope.push_back(old_to_new[tab.scope[i]]);
                }
            }
            for (const auto& row : tab.forbidden) {
                bool consistent = true;
                for (size_t i = 0; i < row.size() && consistent; ++i) {
                    int32_t s = sigma.state(tab.scope[i]);
                    if (s >= 0 && s != row[i]) consistent = false;
                }
                if (!consistent) continue;
                std::vector<int> proj;
                proj.reserve(free_pos.size());
                for (size_t i : free_pos) proj.push_back(row[i]);
                out.forbidden.push_back(std::move(proj));
            }
            if (out.scope.empty()) {
                infeasible = true;
                continue;
            }
            payloads.emplace_back(std::move(out));
        }
        constraint_to_old.push_back(c);
    }

    SimplifiedFormula out{CspFormula(std::move(new_vars), std::move(payloads)), std::move(var_to_old),
                          std::move(old_to_new), std::move(constraint_to_old), infeasible};
    return out;
}

std::vector<Component> connected_components(const CspFormula& f, const PartialAssignment& sigma,
                                            std::span<const VarId> seeds) {
    std::vector<uint8_t> var_seen(f.num_variables(), 0);
    std::vector<uint8_t> con_seen(f.num_constraints(), 0);
    std::vector<Component> out;
    std::vector<VarId> stack;
    for (VarId s : seeds) {
        if (sigma.is_assigned(s))
            throw Error("connected_components: seed variable is assigned");
        if (var_seen[s]) continue;
        Component comp;
        var_seen[s] = 1;
        stack.assign(1, s);
        while (!stack.empty()) {
            VarId w = stack.back();
            stack.pop_back();
            comp.vars.push_back(w);
            for (ConstraintId c : f.constraints_of(w)) {
                if (con_seen[c]) continue;
                con_seen[c] = 1;
                if (satisfied_by(f.constraint(c).payload, f, sigma)) continue;
                comp.constraints.push_back(c);
                for (VarId u : f.scope(c)) {
                    if (sigma.is_assigned(u) || var_seen[u]) continue;
                    var_seen[u] = 1;
                    stack.push_back(u);
                }
            }
        }
        std::sort(comp.vars.begin(), comp.vars.end());
        std::sort(comp.constraints.begin(), comp.constraints.end());
        out.push_back(std::move(comp));
    }
    return out;
}

}  // namespace llsamp
