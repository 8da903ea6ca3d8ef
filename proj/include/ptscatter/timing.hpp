#pragma once

#include <span>
#include <vector>

#include "ptscatter/core.hpp"

namespace ptscatter {

// How d/dk treats the contrast. FixedXi holds gamma, delta constant (one curve
// per xi, the usual plotting convention). FixedV holds the potential strength v
// constant, so xi = v / k^2 follows k.
enum class DerivativeMode { FixedXi, FixedV };

struct TimingResult {
    double phase = 0.0;        // unwrapped arg T_L
    double delay_ratio = 0.0;  // delta tau / tau0
    double time_ratio = 1.0;   // tau / tau0 = 1 + delay_ratio
    double error_estimate = 0.0;
};

struct TimingOptions {
    DerivativeMode mode = DerivativeMode::FixedXi;
    // Base finite-difference step; <= 0 selects 1e-4 * max(1, ka).
    double step = 0.0;
    // Samples closer than this (max-norm in (xi, ka)) to one of singular_points
    // are flagged instead of differentiated.
    double exclusion_radius = 1e-3;
    std::vector<BarrierPoint> singular_points;
};

struct TimingSample {
    double ka = 0.0;
    double phase = 0.0;
    double delay_ratio = 0.0;
    double time_ratio = 1.0;
    double error_estimate = 0.0;
    bool flagged = false;  // delay fields are NaN when set
};

// Normalised modulus of the tan(phi) numerator/denominator pair. It equals
// sqrt(scaled transmission denominator); below this the phase is undefined.
inline constexpr double kSingularPhaseThreshold = 1e-12;

// arg T_L continued from phase(xi, 0) = 0 along ka with adaptive steps so that
// no raw jump reaches pi/2. Throws SingularPointError if the endpoint itself is
// singular.
[[nodiscard]] double transmission_phase(const BarrierPoint& p);

// Delay and phase-time ratios. The derivative is a central difference refined by
// Richardson extrapolation. Throws NearSingularDerivativeError when the stencil
// touches a singular sample or an excluded neighbourhood.
[[nodiscard]] TimingResult delay_time(const BarrierPoint& p, const TimingOptions& options = {});
[[nodiscard]] TimingResult delay_time(const BarrierPoint& p, DerivativeMode mode);

// Timing along an ascending ka grid at fixed xi; the phase is unwrapped
// sequentially, singular samples are flagged.
[[nodiscard]] std::vector<TimingSample> timing_profile(double xi, std::span<const double> ka_grid,
                                                       const TimingOptions& options = {});

// Large-ka expansion of tau / tau0:
//   (2 / delta^2) cos(2 gamma ka) exp(-2 delta ka) + delta / (ka (gamma^2 + delta^2)).
// It is the asymptote of the FixedV phase time.
[[nodiscard]] double opaque_asymptotic(const BarrierPoint& p);

struct HartmanRow {
    double xi = 0.0;
    double ka = 0.0;
    double time_ratio = 0.0;
};

struct HartmanSummary {
    double xi = 0.0;
    double final_time_ratio = 0.0;
    // Largest ka with |time_ratio| > threshold, 0 if none.
    double last_ka_above_threshold = 0.0;
    // max |time_ratio| over consecutive windows of the upper half never grows.
    bool envelope_decays = false;
};

struct HartmanScan {
    std::vector<HartmanRow> rows;
    std::vector<HartmanSummary> summaries;
};

[[nodiscard]] HartmanScan hartman_limit_scan(std::span<const double> xi_list, double ka_max,
                                             DerivativeMode mode = DerivativeMode::FixedXi,
                                             double ka_step = 0.05, double threshold = 0.05);

}  // namespace ptscatter
