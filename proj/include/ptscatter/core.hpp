#pragma once

#include "ptscatter/scaled.hpp"

namespace ptscatter {

// Dimensionless pair that fully determines the two-layer +/- iv barrier:
//   xi = v / E   gain/loss contrast
//   ka = k * a   wavenumber times the half-width of the barrier
// xi > 1 is the over-gain regime (E < v), xi < 1 the under-gain one.
struct BarrierPoint {
    double xi = 0.0;
    double ka = 0.0;

    [[nodiscard]] bool over_gain() const { return xi > 1.0; }
    [[nodiscard]] bool under_gain() const { return xi < 1.0; }
};

// Throws DomainError unless xi and ka are finite and non-negative.
void validate(const BarrierPoint& p);

// Active-region wavenumber q = k (gamma - i delta); gamma^2 - delta^2 = 1.
struct DispersionParams {
    double gamma = 1.0;
    double delta = 0.0;
};

[[nodiscard]] DispersionParams dispersion_params(double xi);

// |T_L|^2 of the two-layer barrier in closed form. Evaluated with the common
// factor exp(2 delta ka) pulled out of cosh/sinh, so it stays finite for any
// delta*ka a double can hold. Exceeds 1 in the amplifying parts of the plane.
// Throws SingularPointError when the denominator vanishes to machine precision.
[[nodiscard]] double transmission_probability(const BarrierPoint& p);

// Resonance residuals
//   r1 = gamma^2 cos(2 gamma ka) + delta^2 cosh(2 delta ka)
//   r2 = gamma^3 sin(2 gamma ka) - delta^3 sinh(2 delta ka)
// Both vanish together exactly at a spectral singularity. They share one
// log_scale; cosh_mantissa is cosh(2 delta ka) in the same scaling so that
// normalised residuals can be formed without overflow.
struct ResonanceResidual {
    ScaledReal r1;
    ScaledReal r2;
    double cosh_mantissa = 1.0;

    // max(|r1|, |r2|) / cosh(2 delta ka)
    [[nodiscard]] double residual_norm() const;
    // (r1^2 + r2^2) / cosh^2(2 delta ka): the transmission denominator, normalised.
    [[nodiscard]] double scaled_denominator() const;
};

[[nodiscard]] ResonanceResidual resonance_residual(const BarrierPoint& p);

// The auxiliaries A, B, C, D entering tan(phi) = (g^2 A - d^2 B) / (g^2 C - d^2 D),
// each multiplied by exp(-log_scale). numerator/denominator carry the same
// scaling, so atan2(numerator, denominator) is the transmission phase mod 2 pi.
struct PhaseTerms {
    double a_term = 0.0;
    double b_term = 0.0;
    double c_term = 1.0;
    double d_term = -1.0;
    double log_scale = 0.0;
    double numerator = 0.0;
    double denominator = 1.0;

    [[nodiscard]] double a() const;
    [[nodiscard]] double b() const;
    [[nodiscard]] double c() const;
    [[nodiscard]] double d() const;
    [[nodiscard]] double tan_phase() const { return numerator / denominator; }
    // arg T_L in (-pi, pi].
    [[nodiscard]] double wrapped_phase() const;
};

[[nodiscard]] PhaseTerms phase_terms(const BarrierPoint& p);

}  // namespace ptscatter
