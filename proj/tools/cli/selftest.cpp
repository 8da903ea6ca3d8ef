#include "selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "format.hpp"
#include "ptscatter/singularity.hpp"
#include "ptscatter/timing.hpp"
#include "ptscatter/tmatrix.hpp"

namespace ptscatter::cli {

namespace {

// Records |deviation| against tol; a NaN deviation counts as a failure.
void check(SuiteResult& s, double deviation, double tol) {
    ++s.checks;
    const double ratio = std::abs(deviation) / tol;
    if (!(ratio <= 1.0)) {
        ++s.failures;
    }
    s.worst = std::max(s.worst, std::isnan(ratio) ? std::numeric_limits<double>::infinity() : ratio);
}

double safe(const std::function<double(const BarrierPoint&)>& f, const BarrierPoint& p) {
    try {
        return f(p);
    } catch (const std::exception&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

SuiteResult oracle_suite(const SelftestHooks& h) {
    SuiteResult s{"oracle-equivalence"};
    const auto roots = find_singularities({0.1, 3.0}, {0.01, 10.0}, {64, 160});
    for (int i = 0; i < 24; ++i) {
        const double xi = 0.1 + 2.9 * i / 23.0;
        for (int j = 0; j < 60; ++j) {
            const double ka = 0.01 + 9.99 * j / 59.0;
            const bool near = std::any_of(roots.begin(), roots.end(), [&](const SingularityPoint& r) {
                return std::max(std::abs(r.xi - xi), std::abs(r.ka - ka)) < 1e-3;
            });
            if (near) continue;
            const double ref = std::norm(solve_stack(ka, pt_barrier_stack(xi)).amplitudes.t_left);
            check(s, (safe(h.transmission, {xi, ka}) - ref) / ref, 1e-9);
        }
    }
    return s;
}

SuiteResult identity_suite(const SelftestHooks& h) {
    SuiteResult s{"identities"};
    for (int i = 0; i <= 200; ++i) {
        const auto d = dispersion_params(0.05 * i);
        check(s, d.gamma * d.gamma - d.delta * d.delta - 1.0, 1e-12);
    }
    for (const double v : {0.0, 0.1, 0.5, 1.0, 2.0, 5.0}) {
        check(s, safe(h.transmission, {v, 0.0}) - 1.0, 1e-12);
        check(s, safe(h.transmission, {0.0, v + 0.1}) - 1.0, 1e-12);
    }
    for (int i = 0; i < 12; ++i) {
        const double xi = 0.1 + 0.25 * i;
        for (int j = 0; j < 20; ++j) {
            const double ka = 0.05 + 0.5 * j;
            const auto a = solve_stack(ka, pt_barrier_stack(xi)).amplitudes;
            const double t2 = std::norm(a.t_left);
            check(s, std::abs(a.t_left - a.t_right) / std::max(1.0, std::abs(a.t_left)), 1e-10);
            check(s, (std::abs(t2 - 1.0) - std::abs(a.r_left) * std::abs(a.r_right)) / std::max(1.0, t2), 1e-9);
        }
    }
    return s;
}

SuiteResult limit_suite(const SelftestHooks& h) {
    SuiteResult s{"limits"};
    // Opaque regime.
    for (const double xi : {0.5, 1.0, 2.0}) {
        const BarrierPoint p{xi, 40.0};
        const double fv = delay_time(p, DerivativeMode::FixedV).time_ratio;
        check(s, (fv - opaque_asymptotic(p)) / opaque_asymptotic(p), 0.02);
        check(s, delay_time(p).delay_ratio + 1.0, 0.02);
        const double ref = std::norm(solve_stack(40.0, pt_barrier_stack(xi)).amplitudes.t_left);
        check(s, (safe(h.transmission, p) - ref) / ref, 1e-9);
    }
    // Free propagation.
    for (const double ka : {0.5, 3.0, 12.0}) {
        check(s, delay_time({0.0, ka}).delay_ratio, 1e-15);
    }
    // Real barrier: standard unitarity and the textbook closed form.
    for (const double k : {0.4, 1.0, 2.0}) {
        const auto a = solve_stack(k, LayerStack{{2.0, 4.0}}).amplitudes;
        check(s, std::norm(a.t_left) + std::norm(a.r_left) - 1.0, 1e-10);
        const double kappa = k * std::sqrt(3.0);
        const double sh = std::sinh(2 * kappa);
        const double ref = 1.0 / (1.0 + std::pow(k * k + kappa * kappa, 2) / (4 * k * k * kappa * kappa) * sh * sh);
        check(s, (std::norm(a.t_left) - ref) / ref, 1e-10);
    }
    return s;
}

}  // namespace

std::vector<SuiteResult> run_selftest_suites(const SelftestHooks& hooks) {
    return {oracle_suite(hooks), identity_suite(hooks), limit_suite(hooks)};
}

int run_selftest(std::ostream& out, const SelftestHooks& hooks) {
    const auto results = run_selftest_suites(hooks);
    char line[128];
    std::snprintf(line, sizeof line, "%-20s %8s %9s %12s  %s\n", "suite", "checks", "failures", "worst/tol", "status");
    out << line;
    bool ok = true;
    for (const auto& r : results) {
        std::snprintf(line, sizeof line, "%-20s %8d %9d %12s  %s\n", r.name.c_str(), r.checks, r.failures,
                      format_short(r.worst, 3).c_str(), r.failures ? "FAIL" : "PASS");
        out << line;
        ok = ok && r.failures == 0;
    }
    out << "selftest: " << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? 0 : 1;
}

}  // namespace ptscatter::cli
