#pragma once

#include <limits>

#include "ptscatter/core.hpp"
#include "ptscatter/singularity.hpp"

namespace ptscatter {

namespace constants {
inline constexpr double kHbarC_eV_nm = 197.3269804;
inline constexpr double kSpeedOfLight_m_s = 299792458.0;
}  // namespace constants

// Rectangular waveguide of height 2b whose two halves along x (each of length a)
// are the gain and loss regions.
struct PhysicalWaveguide {
    double photon_energy = 0.0;   // hbar omega, eV
    double plasma_energy = 0.0;   // hbar omega_p, eV
    double damping_energy = 0.0;  // hbar times the medium damping constant, eV
    double half_length_a = 0.0;   // nm
    double half_height_b = std::numeric_limits<double>::infinity();  // nm; infinity = no confinement
};

// v = omega_p^2 / (2 damping omega).
[[nodiscard]] double potential_strength(const PhysicalWaveguide& w);

// Lowest TE slab mode: k^2 = (omega/c)^2 - (pi / 2b)^2; ka = k a and
// xi = v (omega/c)^2 / k^2. Throws DomainError below cutoff.
[[nodiscard]] BarrierPoint to_dimensionless(const PhysicalWaveguide& w);

// Inverse at fixed geometry: the photon energy (eV) that yields the given ka.
[[nodiscard]] double photon_energy_for(double ka, double half_length_a, double half_height_b);

// Free-space crossing reference tau0 = 2a dk/domega = 2a (omega/c) / (c k), seconds.
[[nodiscard]] double tau0_physical(const PhysicalWaveguide& w);

struct GeometrySearch {
    // Accept a residual minimum along the tuning curve when a located root lies
    // within this relative max-norm distance of the landed (xi, ka).
    double match_tolerance = 1e-2;
    int scan_samples = 20000;
};

struct GeometrySolution {
    double half_height_b = 0.0;  // nm
    BarrierPoint landed;
    double residual_norm = 0.0;
    SingularityPoint nearest;
    double relative_distance = 0.0;
};

// Varies b at fixed (omega, omega_p, damping, a). Along that family xi ka^2 is
// constant, so the search runs over ka and maps back to b. Returns the solution
// nearest the cutoff. Throws NotFoundError when no residual minimum matches a root.
[[nodiscard]] GeometrySolution solve_geometry_for_singularity(double photon_energy, double plasma_energy,
                                                              double damping_energy, double half_length_a,
                                                              const GeometrySearch& search = {});

}  // namespace ptscatter
