#pragma once

#include <span>
#include <vector>

#include "ptscatter/core.hpp"

namespace ptscatter {

struct Range {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] bool contains(double x) const { return x >= lo && x <= hi; }
    [[nodiscard]] double width() const { return hi - lo; }
};

// A root of r1 = r2 = 0.
struct SingularityPoint {
    double xi = 0.0;
    double ka = 0.0;
    double residual_norm = 0.0;  // max(|r1|, |r2|) / cosh(2 delta ka)
    int newton_iterations = 0;
};

struct Peak {
    double ka_position = 0.0;
    double height = 0.0;  // |T|^2 at ka_position
    double half_width = 0.0;
    double xi = 0.0;
};

struct GridDensity {
    int xi_samples = 64;
    int ka_samples = 64;
};

struct SpacingStats {
    double mean_spacing = 0.0;
    double relative_std = 0.0;
};

struct ResonancePoint {
    double ka = 0.0;
    double xi_star = 0.0;
    double height = 0.0;
};

// Seeds from grid cells where both residuals change sign (plus grid minima of
// the residual norm), then damped 2-D Newton with a central-difference
// Jacobian. Roots closer than 1e-6 are merged; output is sorted by (ka, xi).
[[nodiscard]] std::vector<SingularityPoint> find_singularities(Range xi_range, Range ka_range,
                                                               GridDensity grid = {}, double tol = 1e-10);

// Interior local maxima of |T|^2 on a uniform grid, refined by parabolic
// interpolation of log |T|^2. Sorted by ka.
[[nodiscard]] std::vector<Peak> peak_scan(double xi, Range ka_range, double samples_per_unit = 200.0);

// Mean and relative (population) standard deviation of successive spacings.
// Throws InsufficientDataError for fewer than three peaks.
[[nodiscard]] SpacingStats peak_spacing_stats(std::span<const Peak> peaks);

// For each of `steps` ka samples, the xi in xi_range maximising |T|^2: coarse
// scan followed by golden-section refinement.
[[nodiscard]] std::vector<ResonancePoint> resonance_curve(Range ka_range, int steps, Range xi_range = {0.01, 3.0},
                                                          int xi_samples = 600);

}  // namespace ptscatter
