#pragma once

#include <vector>

#include "llsamp/csp.hpp"

namespace llsamp {

enum class LllMode { Strong, Weak };

// Derived threshold and slack quantities. In Strong mode,
//   p' = (18 e^2 q^2 k Delta^4)^-1,  zeta = (8 e q k Delta^3)^-1,
//   eta = (1 - e p' q)^-Delta - 1,   theta_v = 1/q_v - eta - zeta.
// Weak mode requires 2 e q^2 p_max Delta < 1 and picks p' as the geometric
// mean of p_max and (2 e q^2 Delta)^-1 with zeta = (1/q - eta)/2.
struct LllParameters {
    LllMode mode = LllMode::Strong;
    double p_prime = 0.0;
    double eta = 0.0;
    double zeta = 0.0;
    std::vector<double> theta;  // per variable, 1/q_v - eta - zeta
    double theta_min = 0.0;
    double p_max = 0.0;  // the bound the construction was accepted against

    double theta_of(VarId v) const { return theta[v]; }
};

// Validates and derives the parameters; throws ConditionViolatedError
// naming the failed inequality with its numeric values.
LllParameters derive_parameters(const CspFormula& f, double p_max, LllMode mode);

// Hand-built parameters for instances outside both conditions (test
// fixtures, diagnostics). Only positivity of theta_v and zeta is checked.
LllParameters manual_parameters(const CspFormula& f, double p_prime, double eta, double zeta,
                                double p_max = 0.0);

struct StrongConditionReport {
    double lhs = 0.0;  // q^2 k p Delta^7
    double rhs = 0.0;  // (150 e^3)^-1
    bool ok = false;
};

StrongConditionReport check_strong_condition(const CspFormula& f, double p_max);

// 2 e q^2 p Delta, the weak-condition left side (< 1 accepts).
double weak_condition_lhs(const CspFormula& f, double p_max);

}  // namespace llsamp
