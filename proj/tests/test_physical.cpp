// Waveguide units: potential strength, dispersion reduction and the geometry
// that places the barrier on the first spectral singularity.

#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "ptscatter/errors.hpp"
#include "ptscatter/physical.hpp"

using namespace ptscatter;

namespace {

PhysicalWaveguide reference_guide(double b = std::numeric_limits<double>::infinity()) {
    return {5.0, 0.2, 1.25, 1004.0, b};
}

}  // namespace

TEST_CASE("potential strength") {
    CHECK(potential_strength(reference_guide()) == doctest::Approx(3.2e-3).epsilon(1e-14));

    auto w = reference_guide();
    w.plasma_energy = 0.0;
    CHECK(potential_strength(w) == 0.0);

    w = reference_guide();
    w.damping_energy *= 2.0;
    CHECK(potential_strength(w) == doctest::Approx(1.6e-3).epsilon(1e-14));

    w = reference_guide();
    w.damping_energy = 0.0;
    CHECK_THROWS_AS((void)potential_strength(w), DomainError);
    w = reference_guide();
    w.photon_energy = 0.0;
    CHECK_THROWS_AS((void)potential_strength(w), DomainError);
}

TEST_CASE("unconfined guide reduces to free-space values") {
    const auto w = reference_guide();
    const auto p = to_dimensionless(w);
    const double k0a = 5.0 / constants::kHbarC_eV_nm * 1004.0;
    CHECK(p.xi == doctest::Approx(3.2e-3).epsilon(1e-13));
    CHECK(p.ka == doctest::Approx(k0a).epsilon(1e-13));
    CHECK(tau0_physical(w) == doctest::Approx(2.0 * 1004e-9 / constants::kSpeedOfLight_m_s).epsilon(1e-13));

    const auto far = to_dimensionless(reference_guide(1e9));
    CHECK(far.ka == doctest::Approx(k0a).epsilon(1e-9));
}

TEST_CASE("confinement keeps xi ka^2 fixed") {
    const double invariant = 3.2e-3 * std::pow(5.0 / constants::kHbarC_eV_nm * 1004.0, 2);
    for (const double b : {62.0, 70.0, 100.0, 1000.0}) {
        const auto p = to_dimensionless(reference_guide(b));
        CHECK(p.xi * p.ka * p.ka == doctest::Approx(invariant).epsilon(1e-12));
    }
}

TEST_CASE("near cutoff xi diverges and ka vanishes") {
    const double cutoff_b = std::numbers::pi / 2.0 / (5.0 / constants::kHbarC_eV_nm);
    const auto p = to_dimensionless(reference_guide(cutoff_b * (1.0 + 1e-9)));
    CHECK(p.xi > 1e4);
    CHECK(p.ka < 0.05);
    CHECK(tau0_physical(reference_guide(cutoff_b * (1.0 + 1e-9))) > 1e3 * tau0_physical(reference_guide()));
    CHECK_THROWS_AS((void)to_dimensionless(reference_guide(cutoff_b * 0.99)), DomainError);
    CHECK_THROWS_AS((void)tau0_physical(reference_guide(cutoff_b * 0.99)), DomainError);
}

TEST_CASE("photon energy inverts the dispersion reduction") {
    for (const double b : {62.0, 80.0, 500.0}) {
        const auto p = to_dimensionless(reference_guide(b));
        CHECK(photon_energy_for(p.ka, 1004.0, b) == doctest::Approx(5.0).epsilon(1e-12));
    }
}

TEST_CASE("geometry search lands on the first singularity near b = 62 nm") {
    const auto s = solve_geometry_for_singularity(5.0, 0.2, 1.25, 1004.0);
    CHECK(s.half_height_b == doctest::Approx(62.0464).epsilon(1e-5));
    CHECK(std::abs(s.half_height_b - 62.0) < 5.0);
    CHECK(s.nearest.xi == doctest::Approx(1.82765566064822082).epsilon(1e-9));
    CHECK(s.nearest.ka == doctest::Approx(1.06468255056197028).epsilon(1e-9));
    CHECK(s.relative_distance < 1e-2);

    const auto landed = to_dimensionless(reference_guide(s.half_height_b));
    CHECK(landed.xi == doctest::Approx(s.landed.xi).epsilon(1e-9));
    CHECK(landed.ka == doctest::Approx(s.landed.ka).epsilon(1e-9));
    CHECK(resonance_residual(landed).residual_norm() == doctest::Approx(s.residual_norm).epsilon(1e-6));
    CHECK(transmission_probability(landed) > 1e3);

    // Extreme sensitivity: one percent wider and the residual grows tenfold.
    const double wider = resonance_residual(to_dimensionless(reference_guide(1.01 * s.half_height_b))).residual_norm();
    CHECK(wider >= 10.0 * s.residual_norm);
}

TEST_CASE("no gain, no singularity") {
    CHECK_THROWS_AS((void)solve_geometry_for_singularity(5.0, 0.0, 1.25, 1004.0), NotFoundError);
}
