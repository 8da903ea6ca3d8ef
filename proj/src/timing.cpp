#include "ptscatter/timing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ptscatter/errors.hpp"

namespace ptscatter {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBaseWalkStep = 0.02;

double wrap_angle(double a) { return std::remainder(a, 2.0 * kPi); }

struct RawPhase {
    double wrapped;
    double modulus;  // |num + i den| / cosh(2 delta ka)
};

// The phase is odd in ka, which lets stencils straddle ka = 0.
RawPhase raw_phase(double xi, double ka) {
    const double sign = ka < 0.0 ? -1.0 : 1.0;
    const auto t = phase_terms({xi, std::abs(ka)});
    const double cosh_m = 1.0 + 0.5 * std::expm1(-2.0 * t.log_scale);
    return {sign * t.wrapped_phase(), std::hypot(t.numerator, t.denominator) / cosh_m};
}

// Continues an unwrapped phase from (x0, phi0) to x1 >= x0.
double unwrap_walk(double xi, double x0, double phi0, double x1) {
    const double min_step = 1e-12 * std::max(1.0, x1);
    double x = x0;
    double phi = phi0;
    double prev = raw_phase(xi, x0).wrapped;
    while (x < x1) {
        double h = std::min(kBaseWalkStep, x1 - x);
        for (;;) {
            const double xn = (x1 - x <= h) ? x1 : x + h;
            const double raw = raw_phase(xi, xn).wrapped;
            const double jump = wrap_angle(raw - prev);
            if (std::abs(jump) < 0.5 * kPi || h <= min_step) {
                phi += jump;
                prev = raw;
                x = xn;
                break;
            }
            h *= 0.5;
        }
    }
    return phi;
}

struct Derivative {
    double value;
    double error;
};

// Central differences h0, h0/2, ... combined in a Neville tableau. The function
// returns wrapped phases; each difference is re-wrapped, which is exact while
// the phase moves less than pi across the stencil.
template <class PhaseFn>
Derivative richardson_phase_derivative(PhaseFn&& phase_at, double x, double h0) {
    constexpr int kRounds = 6;
    double table[kRounds][kRounds] = {};
    auto central = [&](double h) { return wrap_angle(phase_at(x + h) - phase_at(x - h)) / (2.0 * h); };

    double h = h0;
    table[0][0] = central(h);
    double result = table[0][0];
    double err = std::numeric_limits<double>::max();
    for (int i = 1; i < kRounds; ++i) {
        h *= 0.5;
        table[0][i] = central(h);
        double factor = 4.0;
        for (int j = 1; j <= i; ++j) {
            table[j][i] = (table[j - 1][i] * factor - table[j - 1][i - 1]) / (factor - 1.0);
            factor *= 4.0;
            const double e = std::max(std::abs(table[j][i] - table[j - 1][i]),
                                      std::abs(table[j][i] - table[j - 1][i - 1]));
            if (e < err) {
                err = e;
                result = table[j][i];
            }
        }
        if (std::abs(table[i][i] - table[i - 1][i - 1]) >= 2.0 * err) {
            break;
        }
    }
    // Rounding floor of a difference of two wrapped phases.
    const double floor = 8.0 * std::numeric_limits<double>::epsilon() * kPi / h;
    return {result, std::max(err, floor)};
}

bool excluded(const BarrierPoint& p, const TimingOptions& options) {
    return std::any_of(options.singular_points.begin(), options.singular_points.end(), [&](const BarrierPoint& s) {
        return std::max(std::abs(s.xi - p.xi), std::abs(s.ka - p.ka)) < options.exclusion_radius;
    });
}

[[noreturn]] void throw_near_singular(const BarrierPoint& p) {
    throw NearSingularDerivativeError("derivative stencil touches a singular sample near xi=" +
                                      std::to_string(p.xi) + ", ka=" + std::to_string(p.ka));
}

Derivative phase_derivative(const BarrierPoint& p, const TimingOptions& options) {
    double h = options.step > 0.0 ? options.step : 1e-4 * std::max(1.0, p.ka);
    auto checked = [&](double xi, double x) {
        const auto r = raw_phase(xi, x);
        if (r.modulus < kSingularPhaseThreshold) {
            throw_near_singular(p);
        }
        return r.wrapped;
    };
    if (options.mode == DerivativeMode::FixedXi) {
        return richardson_phase_derivative([&](double x) { return checked(p.xi, x); }, p.ka, h);
    }
    // v a^2 = xi (ka)^2 stays fixed while ka moves.
    h = std::min(h, 0.25 * p.ka);
    const double invariant = p.xi * p.ka * p.ka;
    return richardson_phase_derivative([&](double x) { return checked(invariant / (x * x), x); }, p.ka, h);
}

}  // namespace

double transmission_phase(const BarrierPoint& p) {
    validate(p);
    if (p.xi == 0.0 || p.ka == 0.0) {
        return 0.0;
    }
    if (raw_phase(p.xi, p.ka).modulus == 0.0) {
        throw SingularPointError("transmission phase undefined at a spectral singularity");
    }
    return unwrap_walk(p.xi, 0.0, 0.0, p.ka);
}

TimingResult delay_time(const BarrierPoint& p, DerivativeMode mode) {
    TimingOptions options;
    options.mode = mode;
    return delay_time(p, options);
}

TimingResult delay_time(const BarrierPoint& p, const TimingOptions& options) {
    validate(p);
    if (p.ka == 0.0 && options.mode == DerivativeMode::FixedV) {
        throw DomainError("fixed-v derivative is undefined at ka = 0 (xi = v/k^2 diverges)");
    }
    if (p.xi == 0.0 || p.ka == 0.0) {
        return {};
    }
    if (excluded(p, options)) {
        throw_near_singular(p);
    }
    TimingResult out;
    out.phase = transmission_phase(p);
    const auto d = phase_derivative(p, options);
    out.delay_ratio = 0.5 * d.value;
    out.time_ratio = 1.0 + out.delay_ratio;
    out.error_estimate = 0.5 * d.error;
    return out;
}

std::vector<TimingSample> timing_profile(double xi, std::span<const double> ka_grid, const TimingOptions& options) {
    std::vector<TimingSample> out;
    out.reserve(ka_grid.size());
    double prev_ka = 0.0;
    double phase = 0.0;
    for (const double ka : ka_grid) {
        const BarrierPoint p{xi, ka};
        validate(p);
        if (ka < prev_ka) {
            throw DomainError("ka grid must be ascending");
        }
        TimingSample s;
        s.ka = ka;
        if (xi != 0.0) {
            phase = unwrap_walk(xi, prev_ka, phase, ka);
        }
        prev_ka = ka;
        s.phase = phase;
        try {
            TimingResult r;
            if (xi != 0.0 && ka != 0.0) {
                if (excluded(p, options)) {
                    throw_near_singular(p);
                }
                const auto d = phase_derivative(p, options);
                r.delay_ratio = 0.5 * d.value;
                r.error_estimate = 0.5 * d.error;
            } else if (ka == 0.0 && options.mode == DerivativeMode::FixedV && xi != 0.0) {
                throw DomainError("fixed-v derivative is undefined at ka = 0");
            }
            s.delay_ratio = r.delay_ratio;
            s.time_ratio = 1.0 + r.delay_ratio;
            s.error_estimate = r.error_estimate;
        } catch (const NearSingularDerivativeError&) {
            s.flagged = true;
        } catch (const DomainError&) {
            s.flagged = true;
        }
        if (s.flagged) {
            s.delay_ratio = std::numeric_limits<double>::quiet_NaN();
            s.time_ratio = std::numeric_limits<double>::quiet_NaN();
            s.error_estimate = std::numeric_limits<double>::quiet_NaN();
        }
        out.push_back(s);
    }
    return out;
}

double opaque_asymptotic(const BarrierPoint& p) {
    validate(p);
    if (p.xi <= 0.0) {
        throw DomainError("opaque expansion needs xi > 0 (delta = 0 otherwise)");
    }
    if (p.ka <= 0.0) {
        throw DomainError("opaque expansion needs ka > 0");
    }
    const auto [gamma, delta] = dispersion_params(p.xi);
    const double g2 = gamma * gamma;
    const double d2 = delta * delta;
    return (2.0 / d2) * std::cos(2.0 * gamma * p.ka) * std::exp(-2.0 * delta * p.ka) +
           delta / (p.ka * (g2 + d2));
}

HartmanScan hartman_limit_scan(std::span<const double> xi_list, double ka_max, DerivativeMode mode,
                               double ka_step, double threshold) {
    if (!(ka_max > 0.0) || !(ka_step > 0.0) || ka_step > ka_max) {
        throw DomainError("hartman scan needs 0 < ka_step <= ka_max");
    }
    const auto n = static_cast<std::size_t>(std::floor(ka_max / ka_step + 1e-9));
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i) {
        grid[i] = ka_step * static_cast<double>(i + 1);
    }
    grid.back() = ka_max;

    TimingOptions options;
    options.mode = mode;
    HartmanScan scan;
    for (const double xi : xi_list) {
        if (!(xi > 0.0)) {
            throw DomainError("hartman scan needs xi > 0");
        }
        const auto profile = timing_profile(xi, grid, options);
        HartmanSummary summary;
        summary.xi = xi;
        constexpr int kWindows = 4;
        double window_max[kWindows] = {};
        for (const auto& s : profile) {
            if (s.flagged) {
                continue;
            }
            scan.rows.push_back({xi, s.ka, s.time_ratio});
            if (std::abs(s.time_ratio) > threshold) {
                summary.last_ka_above_threshold = s.ka;
            }
            if (s.ka >= 0.5 * ka_max) {
                const double frac = (s.ka - 0.5 * ka_max) / (0.5 * ka_max);
                const int w = std::min(kWindows - 1, static_cast<int>(frac * kWindows));
                window_max[w] = std::max(window_max[w], std::abs(s.time_ratio));
            }
        }
        summary.final_time_ratio = profile.back().time_ratio;
        summary.envelope_decays = true;
        for (int w = 1; w < kWindows; ++w) {
            if (window_max[w] > window_max[w - 1] * (1.0 + 1e-9) + 1e-12) {
                summary.envelope_decays = false;
            }
        }
        scan.summaries.push_back(summary);
    }
    return scan;
}

}  // namespace ptscatter
