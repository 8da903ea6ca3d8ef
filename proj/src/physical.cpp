#include "ptscatter/physical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "ptscatter/errors.hpp"

namespace ptscatter {

namespace {

constexpr double kPi = std::numbers::pi;

void check_positive(double v, const char* name) {
    if (!std::isfinite(v) || v <= 0.0) {
        throw DomainError(std::string(name) + " must be finite and positive");
    }
}

void check_waveguide(const PhysicalWaveguide& w) {
    check_positive(w.photon_energy, "photon energy");
    check_positive(w.damping_energy, "damping energy");
    check_positive(w.half_length_a, "half length a");
    if (!std::isfinite(w.plasma_energy) || w.plasma_energy < 0.0) {
        throw DomainError("plasma energy must be finite and non-negative");
    }
    if (!(w.half_height_b > 0.0)) {
        throw DomainError("half height b must be positive");
    }
}

double vacuum_wavenumber(double photon_energy) { return photon_energy / constants::kHbarC_eV_nm; }

double cutoff_wavenumber(double half_height_b) {
    return std::isinf(half_height_b) ? 0.0 : kPi / (2.0 * half_height_b);
}

// k^2 in nm^-2.
double guided_k2(const PhysicalWaveguide& w) {
    const double k0 = vacuum_wavenumber(w.photon_energy);
    const double kc = cutoff_wavenumber(w.half_height_b);
    const double k2 = (k0 - kc) * (k0 + kc);
    if (!(k2 > 0.0)) {
        throw DomainError("photon energy " + std::to_string(w.photon_energy) +
                          " eV is below the waveguide cutoff for b = " + std::to_string(w.half_height_b) +
                          " nm: no propagating mode");
    }
    return k2;
}

double scaled_residual_norm(const BarrierPoint& p) { return resonance_residual(p).residual_norm(); }

}  // namespace

double potential_strength(const PhysicalWaveguide& w) {
    check_waveguide(w);
    return w.plasma_energy * w.plasma_energy / (2.0 * w.damping_energy * w.photon_energy);
}

BarrierPoint to_dimensionless(const PhysicalWaveguide& w) {
    const double v = potential_strength(w);
    const double k2 = guided_k2(w);
    const double k0 = vacuum_wavenumber(w.photon_energy);
    return {v * k0 * k0 / k2, std::sqrt(k2) * w.half_length_a};
}

double photon_energy_for(double ka, double half_length_a, double half_height_b) {
    check_positive(ka, "ka");
    check_positive(half_length_a, "half length a");
    const double k = ka / half_length_a;
    return constants::kHbarC_eV_nm * std::hypot(k, cutoff_wavenumber(half_height_b));
}

double tau0_physical(const PhysicalWaveguide& w) {
    check_waveguide(w);
    const double k = std::sqrt(guided_k2(w));
    const double k0 = vacuum_wavenumber(w.photon_energy);
    return 2.0 * w.half_length_a * 1e-9 * (k0 / k) / constants::kSpeedOfLight_m_s;
}

GeometrySolution solve_geometry_for_singularity(double photon_energy, double plasma_energy, double damping_energy,
                                                double half_length_a, const GeometrySearch& search) {
    PhysicalWaveguide base{photon_energy, plasma_energy, damping_energy, half_length_a};
    const double v = potential_strength(base);
    if (v == 0.0) {
        throw NotFoundError("no gain/loss contrast (plasma energy 0): no spectral singularity");
    }
    if (search.scan_samples < 3) {
        throw DomainError("geometry search needs at least 3 scan samples");
    }
    const double k0a = vacuum_wavenumber(photon_energy) * half_length_a;
    const double invariant = v * k0a * k0a;  // xi * ka^2 along the b family
    auto landed = [&](double ka) { return BarrierPoint{invariant / (ka * ka), ka}; };
    auto residual = [&](double ka) { return scaled_residual_norm(landed(ka)); };

    // Uniform in log ka: the singular structure is denser at small ka.
    const double lo = std::log(1e-3 * k0a);
    const double hi = std::log(k0a * (1.0 - 1e-9));
    const int n = search.scan_samples;
    std::vector<double> kas(static_cast<std::size_t>(n));
    std::vector<double> res(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double ka = std::exp(lo + (hi - lo) * i / (n - 1));
        kas[static_cast<std::size_t>(i)] = ka;
        res[static_cast<std::size_t>(i)] = residual(ka);
    }

    for (int i = 1; i + 1 < n; ++i) {
        const auto u = static_cast<std::size_t>(i);
        if (!(res[u] <= res[u - 1] && res[u] <= res[u + 1])) {
            continue;
        }
        // Golden section on the residual inside the bracketing samples.
        double a = kas[u - 1];
        double b = kas[u + 1];
        constexpr double kInvPhi = 0.6180339887498949;
        double x1 = b - kInvPhi * (b - a);
        double x2 = a + kInvPhi * (b - a);
        double f1 = residual(x1);
        double f2 = residual(x2);
        while (b - a > 1e-14 * b) {
            if (f1 < f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - kInvPhi * (b - a);
                f1 = residual(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + kInvPhi * (b - a);
                f2 = residual(x2);
            }
        }
        const double ka = 0.5 * (a + b);
        const BarrierPoint p = landed(ka);
        const auto roots = find_singularities({p.xi * 0.95, p.xi * 1.05}, {ka * 0.95, ka * 1.05}, {16, 16});
        if (roots.empty()) {
            continue;
        }
        const auto rel_dist = [&](const SingularityPoint& s) {
            return std::max(std::abs(s.xi - p.xi) / p.xi, std::abs(s.ka - p.ka) / p.ka);
        };
        const auto nearest = *std::min_element(roots.begin(), roots.end(), [&](const auto& x, const auto& y) {
            return rel_dist(x) < rel_dist(y);
        });
        if (rel_dist(nearest) > search.match_tolerance) {
            continue;
        }
        const double k = ka / half_length_a;
        const double k0 = vacuum_wavenumber(photon_energy);
        GeometrySolution sol;
        sol.half_height_b = kPi / (2.0 * std::sqrt((k0 - k) * (k0 + k)));
        sol.landed = p;
        sol.residual_norm = scaled_residual_norm(p);
        sol.nearest = nearest;
        sol.relative_distance = rel_dist(nearest);
        return sol;
    }
    throw NotFoundError("no b within the propagating range places the waveguide on a spectral singularity");
}

}  // namespace ptscatter
