#include "llsamp/params.hpp"

#include <cmath>
#include <sstream>

#include "llsamp/errors.hpp"

namespace llsamp {

namespace {

constexpr double kE = 2.718281828459045235;

[[noreturn]] void fail(const std::string& ineq, double lhs, double rhs) {
    std::ostringstream os;
    os.precision(17);
    os << "parameter condition failed: " << ineq << " (lhs=" << lhs << ", rhs=" << rhs << ")";
    throw ConditionViolatedError(os.str());
}

LllParameters finish(const CspFormula& f, LllMode mode, double p_prime, double p_max) {
    const int q = f.max_domain();
    const int delta = f.degree();
    if (kE * p_prime * q >= 1.0) fail("e*p'*q < 1", kE * p_prime * q, 1.0);
    LllParameters out;
    out.mode = mode;
    out.p_prime = p_prime;
    out.p_max = p_max;
    out.eta = std::pow(1.0 - kE * p_prime * q, -static_cast<double>(delta)) - 1.0;
    if (mode == LllMode::Strong)
        out.zeta = 1.0 / (8.0 * kE * q * f.max_arity() * std::pow(delta, 3));
    else
        out.zeta = (1.0 / q - out.eta) / 2.0;
    if (!(out.zeta > 0.0)) fail("zeta > 0", out.zeta, 0.0);
    if (p_max >= p_prime) fail("p_max < p'", p_max, p_prime);
    out.theta.resize(f.num_variables());
    out.theta_min = 1.0;
    for (VarId v = 0; v < f.num_variables(); ++v) {
        out.theta[v] = 1.0 / f.domain_size(v) - out.eta - out.zeta;
        out.theta_min = std::min(out.theta_min, out.theta[v]);
        if (!(out.theta[v] > 0.0)) fail("theta_v > 0 for " + f.variable(v).name, out.theta[v], 0.0);
    }
    return out;
}

}  // namespace

LllParameters derive_parameters(const CspFormula& f, double p_max, LllMode mode) {
    const double q = f.max_domain();
    const double k = f.max_arity();
    const double delta = f.degree();
    if (p_max < 0.0 || p_max > 1.0) fail("0 <= p_max <= 1", p_max, 1.0);
    if (mode == LllMode::Strong) {
        const double p_prime = 1.0 / (18.0 * kE * kE * q * q * k * std::pow(delta, 4));
        return finish(f, mode, p_prime, p_max);
    }
    const double lhs = weak_condition_lhs(f, p_max);
    if (!(lhs < 1.0)) fail("2*e*q^2*p_max*Delta < 1", lhs, 1.0);
    if (p_max <= 0.0)
        throw ConditionViolatedError("weak mode requires p_max > 0; use strong mode for p_max = 0");
    const double p_prime = std::sqrt(p_max / (2.0 * kE * q * q * delta));
    return finish(f, mode, p_prime, p_max);
}

LllParameters manual_parameters(const CspFormula& f, double p_prime, double eta, double zeta,
                                double p_max) {
    LllParameters out;
    out.mode = LllMode::Weak;
    out.p_prime = p_prime;
    out.eta = eta;
    out.zeta = zeta;
    out.p_max = p_max;
    if (!(zeta > 0.0)) fail("zeta > 0", zeta, 0.0);
    if (eta < 0.0) fail("eta >= 0", eta, 0.0);
    out.theta.resize(f.num_variables());
    out.theta_min = 1.0;
    for (VarId v = 0; v < f.num_variables(); ++v) {
        out.theta[v] = 1.0 / f.domain_size(v) - eta - zeta;
        out.theta_min = std::min(out.theta_min, out.theta[v]);
        if (!(out.theta[v] > 0.0)) fail("theta_v > 0 for " + f.variable(v).name, out.theta[v], 0.0);
    }
    return out;
}

StrongConditionReport check_strong_condition(const CspFormula& f, double p_max) {
    StrongConditionReport r;
    const double q = f.max_domain();
    r.lhs = q * q * f.max_arity() * p_max * std::pow(f.degree(), 7);
    r.rhs = 1.0 / (150.0 * kE * kE * kE);
    r.ok = r.lhs <= r.rhs;
    return r;
}

double weak_condition_lhs(const CspFormula& f, double p_max) {
    const double q = f.max_domain();
    return 2.0 * kE * q * q * p_max * f.degree();
}

}  // namespace llsamp
