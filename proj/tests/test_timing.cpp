// Transmission phase, delay times and the opaque limit. High-precision
// references come from tests/oracles/mp_oracle.py.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "ptscatter/core.hpp"
#include "ptscatter/errors.hpp"
#include "ptscatter/timing.hpp"
#include "ptscatter/tmatrix.hpp"

using namespace ptscatter;

namespace {

std::vector<double> grid(double lo, double hi, double step) {
    std::vector<double> out;
    for (int i = 0;; ++i) {
        const double x = lo + i * step;
        if (x > hi) break;
        out.push_back(x);
    }
    return out;
}

}  // namespace

TEST_CASE("transmission phase: trivial cases") {
    for (const double ka : {0.0, 0.7, 12.0}) {
        CHECK(transmission_phase({0.0, ka}) == 0.0);
    }
    for (const double xi : {0.3, 1.0, 2.5}) {
        CHECK(transmission_phase({xi, 0.0}) == 0.0);
    }
}

TEST_CASE("transmission phase matches the solver's arg T_L") {
    CHECK(transmission_phase({1.0, 1.0}) == doctest::Approx(-0.032586466938).epsilon(1e-10));
    for (const double xi : {0.4, 1.0, 2.0, 3.0}) {
        for (double ka = 0.1; ka < 6.0; ka += 0.37) {
            const cplx t = solve_stack(ka, pt_barrier_stack(xi)).amplitudes.t_left;
            const double unwrapped = transmission_phase({xi, ka});
            const double diff = std::remainder(unwrapped - std::arg(t), 2.0 * std::numbers::pi);
            REQUIRE(std::abs(diff) < 1e-8);
        }
    }
}

TEST_CASE("transmission phase is continuous along ka") {
    for (const double xi : {0.3, 1.0, 2.0}) {
        double prev = 0.0;
        for (double ka = 0.01; ka < 30.0; ka += 0.01) {
            const double phi = transmission_phase({xi, ka});
            REQUIRE(std::abs(phi - prev) < 0.5);
            prev = phi;
        }
    }
}

TEST_CASE("delay time: free propagation") {
    for (const double ka : {0.0, 0.5, 7.0}) {
        const auto r = delay_time({0.0, ka});
        CHECK(r.phase == 0.0);
        CHECK(r.delay_ratio == 0.0);
        CHECK(r.time_ratio == 1.0);
    }
}

TEST_CASE("delay time: reference values") {
    CHECK(delay_time({2.0, 1.0}).time_ratio == doctest::Approx(-14.0448906895905).epsilon(1e-7));
    CHECK(delay_time({0.5, 3.0}).time_ratio == doctest::Approx(0.934105331997588).epsilon(1e-7));
    CHECK(delay_time({1.0, 20.0}, DerivativeMode::FixedV).time_ratio ==
          doctest::Approx(0.0160899782007656).epsilon(1e-7));
    CHECK(delay_time({1.0, 10.0}, DerivativeMode::FixedV).time_ratio ==
          doctest::Approx(0.0310636232766754).epsilon(1e-7));
}

TEST_CASE("delay time: time ratio is one plus delay ratio") {
    for (const auto mode : {DerivativeMode::FixedXi, DerivativeMode::FixedV}) {
        for (double ka = 0.3; ka < 15.0; ka += 1.1) {
            const auto r = delay_time({0.7, ka}, mode);
            REQUIRE(r.time_ratio == 1.0 + r.delay_ratio);
            REQUIRE(r.error_estimate < 1e-6 * std::max(1.0, std::abs(r.delay_ratio)));
        }
    }
}

TEST_CASE("delay time agrees with a plain central difference of the solver phase") {
    const double h = 1e-5;
    for (const double xi : {0.4, 1.0, 2.0}) {
        for (double ka = 0.5; ka < 5.0; ka += 0.9) {
            const cplx tp = solve_stack(ka + h, pt_barrier_stack(xi)).amplitudes.t_left;
            const cplx tm = solve_stack(ka - h, pt_barrier_stack(xi)).amplitudes.t_left;
            const double dphi = std::arg(tp / tm) / (2.0 * h);
            CHECK(delay_time({xi, ka}).delay_ratio == doctest::Approx(0.5 * dphi).epsilon(1e-6));
        }
    }
}

TEST_CASE("opaque expansion") {
    CHECK(opaque_asymptotic({1.0, 20.0}) == doctest::Approx(0.0161).epsilon(0.01));
    CHECK(std::abs(opaque_asymptotic({1.0, 1e6})) < 1e-6);
    CHECK_THROWS_AS((void)opaque_asymptotic({0.0, 5.0}), DomainError);

    const auto d = dispersion_params(1.0);
    CHECK(opaque_asymptotic({1.0, 20.0}) ==
          doctest::Approx(d.delta / (20.0 * (d.gamma * d.gamma + d.delta * d.delta))).epsilon(1e-6));

    // The fixed-v phase time approaches the expansion.
    for (const double ka : {10.0, 20.0}) {
        const double full = delay_time({1.0, ka}, DerivativeMode::FixedV).time_ratio;
        CHECK(std::abs(full - opaque_asymptotic({1.0, ka})) < 0.02 * opaque_asymptotic({1.0, ka}));
    }
    const double at20 = delay_time({1.0, 20.0}, DerivativeMode::FixedV).time_ratio;
    CHECK(at20 == doctest::Approx(0.016).epsilon(0.05));
    CHECK(at20 - 1.0 == doctest::Approx(-0.984).epsilon(0.01));
}

TEST_CASE("fixed-xi phase time vanishes faster than the fixed-v one") {
    const double fixed_xi = delay_time({1.0, 20.0}).time_ratio;
    const double fixed_v = delay_time({1.0, 20.0}, DerivativeMode::FixedV).time_ratio;
    CHECK(std::abs(fixed_xi) < 1e-3);
    CHECK(fixed_v > 0.01);
}

TEST_CASE("negative delays in the over-gain regime") {
    bool found = false;
    for (double ka = 0.05; ka < 4.0 && !found; ka += 0.05) {
        found = delay_time({2.0, ka}).delay_ratio < 0.0;
    }
    CHECK(found);
}

TEST_CASE("derivative near a singular point is refused") {
    const BarrierPoint s{1.82765566064822082, 1.06468255056197028};
    TimingOptions opt;
    opt.singular_points = {s};
    CHECK_THROWS_AS((void)delay_time({s.xi, s.ka + 1e-4}, opt), NearSingularDerivativeError);
    CHECK_NOTHROW((void)delay_time({s.xi, s.ka + 0.05}, opt));
}

TEST_CASE("timing profile flags excluded samples and unwraps sequentially") {
    const BarrierPoint s{1.82765566064822082, 1.06468255056197028};
    TimingOptions opt;
    opt.singular_points = {s};
    opt.exclusion_radius = 0.02;
    const auto ka = grid(0.5, 1.5, 0.01);
    const auto prof = timing_profile(s.xi, ka, opt);
    REQUIRE(prof.size() == ka.size());
    int flagged = 0;
    for (std::size_t i = 0; i < prof.size(); ++i) {
        const auto& row = prof[i];
        CHECK(row.ka == ka[i]);
        if (row.flagged) {
            ++flagged;
            CHECK(std::isnan(row.delay_ratio));
            CHECK(std::abs(row.ka - s.ka) <= 0.02 + 1e-12);
        } else {
            CHECK(row.time_ratio == 1.0 + row.delay_ratio);
            CHECK(std::abs(std::remainder(row.phase - transmission_phase({s.xi, row.ka}), 2 * std::numbers::pi)) <
                  1e-8);
        }
    }
    CHECK(flagged >= 3);

    const auto free = timing_profile(0.0, ka);
    for (const auto& row : free) {
        CHECK(row.delay_ratio == 0.0);
    }
}

TEST_CASE("fixed-v needs a positive wavenumber") {
    CHECK_THROWS_AS((void)delay_time({1.0, 0.0}, DerivativeMode::FixedV), DomainError);
}

TEST_CASE("Hartman scan") {
    const std::vector<double> xi{0.5, 1.0};
    const auto scan = hartman_limit_scan(xi, 40.0);
    REQUIRE(scan.summaries.size() == 2);
    for (const auto& s : scan.summaries) {
        CHECK(std::abs(s.final_time_ratio) < 0.01);
        CHECK(s.envelope_decays);
    }
    CHECK(scan.rows.front().ka == doctest::Approx(0.05));
    CHECK(scan.rows.back().ka == doctest::Approx(40.0));

    const auto fv = hartman_limit_scan(std::vector<double>{1.0}, 40.0, DerivativeMode::FixedV);
    CHECK(fv.summaries[0].final_time_ratio < 0.01);
    CHECK(fv.summaries[0].final_time_ratio > 0.0);
}
