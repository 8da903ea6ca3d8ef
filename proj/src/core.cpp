#include "ptscatter/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ptscatter/errors.hpp"

namespace ptscatter {

namespace {

// exp(-2L), (1 + exp(-2L))/2 and (1 - exp(-2L))/2 for L = 2 delta ka >= 0, i.e.
// cosh(L) and sinh(L) with exp(L) factored out.
struct HyperbolicMantissas {
    double decay;  // exp(-L)
    double cosh_m;
    double sinh_m;
};

HyperbolicMantissas hyperbolic_mantissas(double log_scale) {
    const double em2 = std::expm1(-2.0 * log_scale);
    return {std::exp(-log_scale), 1.0 + 0.5 * em2, -0.5 * em2};
}

}  // namespace

void validate(const BarrierPoint& p) {
    if (!std::isfinite(p.xi) || p.xi < 0.0) {
        throw DomainError("xi must be finite and non-negative, got " + std::to_string(p.xi));
    }
    if (!std::isfinite(p.ka) || p.ka < 0.0) {
        throw DomainError("ka must be finite and non-negative, got " + std::to_string(p.ka));
    }
}

DispersionParams dispersion_params(double xi) {
    if (!std::isfinite(xi) || xi < 0.0) {
        throw DomainError("xi must be finite and non-negative, got " + std::to_string(xi));
    }
    const double gamma = std::sqrt(0.5 * (std::hypot(1.0, xi) + 1.0));
    // 2 gamma delta = xi avoids the cancellation in sqrt(1 + xi^2) - 1.
    return {gamma, xi / (2.0 * gamma)};
}

double ResonanceResidual::residual_norm() const {
    return std::max(std::abs(r1.mantissa), std::abs(r2.mantissa)) / cosh_mantissa;
}

double ResonanceResidual::scaled_denominator() const {
    const double s1 = r1.mantissa / cosh_mantissa;
    const double s2 = r2.mantissa / cosh_mantissa;
    return s1 * s1 + s2 * s2;
}

ResonanceResidual resonance_residual(const BarrierPoint& p) {
    validate(p);
    const auto [gamma, delta] = dispersion_params(p.xi);
    const double g2 = gamma * gamma;
    const double d2 = delta * delta;
    const double scale = 2.0 * delta * p.ka;
    const auto h = hyperbolic_mantissas(scale);
    const double phase = 2.0 * gamma * p.ka;

    ResonanceResidual out;
    out.r1 = {g2 * std::cos(phase) * h.decay + d2 * h.cosh_m, scale};
    out.r2 = {g2 * gamma * std::sin(phase) * h.decay - d2 * delta * h.sinh_m, scale};
    out.cosh_mantissa = h.cosh_m;
    return out;
}

double transmission_probability(const BarrierPoint& p) {
    validate(p);
    if (p.ka == 0.0 || p.xi == 0.0) {
        return 1.0;
    }
    const auto [gamma, delta] = dispersion_params(p.xi);
    const auto res = resonance_residual(p);
    const double den = res.r1.mantissa * res.r1.mantissa + res.r2.mantissa * res.r2.mantissa;
    if (den == 0.0) {
        throw SingularPointError("transmission denominator vanishes at xi=" + std::to_string(p.xi) +
                                 ", ka=" + std::to_string(p.ka));
    }
    // (1 - 2 gamma^2)^2 == (gamma^2 + delta^2)^2
    const double num = gamma * gamma + delta * delta;
    const double t2 = (num * num / den) * std::exp(-2.0 * res.r1.log_scale);
    if (!std::isfinite(t2)) {
        throw SingularPointError("transmission probability overflows at xi=" + std::to_string(p.xi) +
                                 ", ka=" + std::to_string(p.ka));
    }
    return t2;
}

double PhaseTerms::a() const { return a_term * std::exp(log_scale); }
double PhaseTerms::b() const { return b_term * std::exp(log_scale); }
double PhaseTerms::c() const { return c_term * std::exp(log_scale); }
double PhaseTerms::d() const { return d_term * std::exp(log_scale); }

double PhaseTerms::wrapped_phase() const { return std::atan2(numerator, denominator); }

PhaseTerms phase_terms(const BarrierPoint& p) {
    validate(p);
    const auto [gamma, delta] = dispersion_params(p.xi);
    const double scale = 2.0 * delta * p.ka;
    const auto h = hyperbolic_mantissas(scale);

    const double sg = std::sin(2.0 * gamma * p.ka);
    const double cg = std::cos(2.0 * gamma * p.ka);
    const double s0 = std::sin(2.0 * p.ka);
    const double c0 = std::cos(2.0 * p.ka);

    PhaseTerms t;
    t.log_scale = scale;
    t.a_term = (gamma * sg * c0 - cg * s0) * h.decay;
    t.b_term = delta * h.sinh_m * c0 + h.cosh_m * s0;
    t.c_term = (gamma * sg * s0 + cg * c0) * h.decay;
    t.d_term = delta * h.sinh_m * s0 - h.cosh_m * c0;
    const double g2 = gamma * gamma;
    const double d2 = delta * delta;
    t.numerator = g2 * t.a_term - d2 * t.b_term;
    t.denominator = g2 * t.c_term - d2 * t.d_term;
    return t;
}

}  // namespace ptscatter
