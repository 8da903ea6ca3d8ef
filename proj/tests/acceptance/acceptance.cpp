// Acceptance suite: one PASS/FAIL line per criterion, diagnostics indented
// beneath. Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ptscatter/core.hpp"
#include "ptscatter/errors.hpp"
#include "ptscatter/physical.hpp"
#include "ptscatter/singularity.hpp"
#include "ptscatter/timing.hpp"
#include "ptscatter/tmatrix.hpp"

using namespace ptscatter;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            notes.push_back("FAILED: " + what);
        }
    }
    void note(const std::string& s) { notes.push_back(s); }
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct GridPoint {
    double xi, ka;
};

// 50 x 50 uniform grid over xi in [0.1, 3], ka in [0.01, 10], minus points
// within 1e-3 (max norm) of a located root.
struct OracleGrid {
    std::vector<GridPoint> points;
    std::size_t excluded = 0;
    std::vector<SingularityPoint> roots;
};

OracleGrid oracle_grid() {
    OracleGrid g;
    const Range xr{0.1, 3.0}, kr{0.01, 10.0};
    g.roots = find_singularities(xr, kr, {64, 256});
    constexpr int n = 50;
    for (int i = 0; i < n; ++i) {
        const double xi = xr.lo + xr.width() * i / (n - 1);
        for (int j = 0; j < n; ++j) {
            const double ka = kr.lo + kr.width() * j / (n - 1);
            const bool near = std::any_of(g.roots.begin(), g.roots.end(), [&](const SingularityPoint& r) {
                return std::max(std::abs(r.xi - xi), std::abs(r.ka - ka)) < 1e-3;
            });
            if (near) {
                ++g.excluded;
            } else {
                g.points.push_back({xi, ka});
            }
        }
    }
    return g;
}

Outcome criterion1() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto g = oracle_grid();
    double worst = 0.0;
    for (const auto& p : g.points) {
        const double ref = std::norm(solve_stack(p.ka, pt_barrier_stack(p.xi)).amplitudes.t_left);
        const double cf = transmission_probability({p.xi, p.ka});
        worst = std::max(worst, std::abs(cf - ref) / ref);
    }
    const double elapsed = seconds_since(t0);
    o.note(fmt("%zu points compared, %zu excluded near %zu located roots", g.points.size(), g.excluded,
               g.roots.size()));
    o.note(fmt("worst relative difference %.3e (tolerance 1e-9); runtime %.3f s (limit 10 s)", worst, elapsed));
    o.require(g.points.size() >= 2000, "at least 2000 grid points");
    o.require(worst <= 1e-9, "closed form vs transfer matrix within 1e-9");
    o.require(elapsed < 10.0, "runtime below 10 s");
    return o;
}

Outcome criterion2() {
    Outcome o;
    std::mt19937_64 rng(20261016);
    std::uniform_real_distribution<double> dist(0.0, 10.0);
    double worst_disp = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const auto d = dispersion_params(dist(rng));
        worst_disp = std::max(worst_disp, std::abs(d.gamma * d.gamma - d.delta * d.delta - 1.0));
    }
    double worst_unit = 0.0;
    for (const double v : {0.0, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0}) {
        worst_unit = std::max(worst_unit, std::abs(transmission_probability({v, 0.0}) - 1.0));
        worst_unit = std::max(worst_unit, std::abs(transmission_probability({0.0, v}) - 1.0));
    }
    const auto g = oracle_grid();
    double worst_recip = 0.0, worst_gu = 0.0;
    for (const auto& p : g.points) {
        for (const auto path : {SolverPath::TransferProduct, SolverPath::AssembledSystem}) {
            const auto a = solve_stack(p.ka, pt_barrier_stack(p.xi), path).amplitudes;
            const double t2 = std::norm(a.t_left);
            worst_recip = std::max(worst_recip, std::abs(a.t_left - a.t_right) / std::max(1.0, std::abs(a.t_left)));
            worst_gu = std::max(worst_gu, std::abs(std::abs(t2 - 1.0) - std::abs(a.r_left) * std::abs(a.r_right)) /
                                              std::max(1.0, t2));
        }
    }
    o.note(fmt("gamma^2 - delta^2 - 1: worst %.2e over 1000 random xi (tolerance 1e-12)", worst_disp));
    o.note(fmt("|T|^2 - 1 at ka = 0 and xi = 0: worst %.2e (tolerance 1e-12)", worst_unit));
    o.note(fmt("|T_L - T_R|: worst %.2e (tolerance 1e-10); generalised unitarity: worst %.2e (tolerance 1e-9)",
               worst_recip, worst_gu));
    o.require(worst_disp <= 1e-12, "gamma^2 - delta^2 = 1");
    o.require(worst_unit <= 1e-12, "unit transmission limits");
    o.require(worst_recip <= 1e-10, "T_L = T_R");
    o.require(worst_gu <= 1e-9, "generalised unitarity");
    return o;
}

Outcome criterion3() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto roots = find_singularities({1.5, 2.5}, {0.5, 1.5});
    o.require(roots.size() == 1, "exactly one root in the box");
    if (!roots.empty()) {
        const auto& r = roots.front();
        double min_t2 = INFINITY;
        for (int i = -2; i <= 2; ++i) {
            for (int j = -2; j <= 2; ++j) {
                if (i == 0 && j == 0) continue;
                min_t2 = std::min(min_t2, transmission_probability({r.xi + 0.5e-4 * i, r.ka + 0.5e-4 * j}));
            }
        }
        const double den = resonance_residual({r.xi, r.ka}).scaled_denominator();
        o.note(fmt("root (xi, ka) = (%.15f, %.15f), residual %.2e", r.xi, r.ka, r.residual_norm));
        o.note(fmt("min |T|^2 on the 1e-4 neighbourhood %.3e (limit > 1e3); scaled denominator %.2e (limit 1e-9)",
                   min_t2, den));
        o.require(min_t2 > 1e3, "|T|^2 > 1e3 around the root");
        o.require(den < 1e-9, "scaled denominator < 1e-9");
    }
    const double elapsed = seconds_since(t0);
    o.note(fmt("runtime %.3f s (limit 5 s)", elapsed));
    o.require(elapsed < 5.0, "runtime below 5 s");
    return o;
}

Outcome criterion4() {
    Outcome o;
    o.note("the opaque expansion is the fixed-v asymptote; agreement is judged in fixed-v mode");
    for (const double xi : {0.3, 0.5, 1.0, 2.0}) {
        const BarrierPoint p{xi, 40.0};
        const double dka = dispersion_params(xi).delta * 40.0;
        const double expansion = opaque_asymptotic(p);
        const auto fv = delay_time(p, DerivativeMode::FixedV);
        const auto fx = delay_time(p, DerivativeMode::FixedXi);
        const double rel = std::abs(fv.time_ratio - expansion) / std::abs(expansion);
        o.note(fmt("xi=%.1f: delta*ka=%.2f tau/tau0 fixed-v %.6f, fixed-xi %.3e, expansion %.6f, rel diff %.2e", xi,
                   dka, fv.time_ratio, fx.time_ratio, expansion, rel));
        o.require(fv.time_ratio < 0.02 && fx.time_ratio < 0.02, fmt("tau/tau0 < 0.02 at xi=%.1f", xi));
        if (dka >= 5.0) {
            o.require(rel <= 0.02, fmt("expansion agreement within 2%% at xi=%.1f", xi));
        }
        o.require(std::abs(fv.delay_ratio + 1.0) <= 0.02 && std::abs(fx.delay_ratio + 1.0) <= 0.02,
                  fmt("delay ratio within 0.02 of -1 at xi=%.1f", xi));
    }
    return o;
}

// Largest-magnitude sampled delay over ka in (0, 25) and whether any is negative.
struct DelaySummary {
    double extreme = 0.0;
    double extreme_ka = 0.0;
    double minimum = INFINITY;
};

DelaySummary delay_summary(double xi, DerivativeMode mode) {
    std::vector<double> grid;
    for (int i = 1; i < 5000; ++i) grid.push_back(0.005 * i);
    TimingOptions opts;
    opts.mode = mode;
    DelaySummary s;
    for (const auto& row : timing_profile(xi, grid, opts)) {
        if (row.flagged) continue;
        s.minimum = std::min(s.minimum, row.delay_ratio);
        if (std::abs(row.delay_ratio) > std::abs(s.extreme)) {
            s.extreme = row.delay_ratio;
            s.extreme_ka = row.ka;
        }
    }
    return s;
}

Outcome criterion5() {
    Outcome o;
    o.note("judged in fixed-v mode; fixed-xi shown for reference");
    for (const double xi : {0.1, 0.4, 0.5, 1.0, 2.0, 3.0}) {
        const auto v = delay_summary(xi, DerivativeMode::FixedV);
        const auto x = delay_summary(xi, DerivativeMode::FixedXi);
        o.note(fmt("xi=%.1f fixed-v: min %.4f, largest |delay| %.4f at ka=%.3f | fixed-xi: min %.4f, largest %.4f at "
                   "ka=%.3f",
                   xi, v.minimum, v.extreme, v.extreme_ka, x.minimum, x.extreme, x.extreme_ka));
        o.require(v.minimum < 0.0, fmt("negative delay exists at xi=%.1f", xi));
        if (xi <= 0.5) {
            o.require(v.extreme < 0.0, fmt("largest-magnitude extremum negative at xi=%.1f", xi));
        }
    }
    return o;
}

Outcome criterion6() {
    Outcome o;
    const Range kr{0.0, 25.0};
    const auto p4 = peak_scan(0.4, kr);
    const auto p3 = peak_scan(0.3, kr);
    const auto p5 = peak_scan(0.5, kr);
    auto list = [](const std::vector<Peak>& ps) {
        std::string s;
        for (const auto& p : ps) s += fmt(" %.3f(%.3g)", p.ka_position, p.height);
        return s;
    };
    o.note("xi=0.4 peaks ka(|T|^2):" + list(p4));
    o.note("xi=0.3 peaks ka(|T|^2):" + list(p3));
    o.note("xi=0.5 peaks ka(|T|^2):" + list(p5));
    o.require(p4.size() >= 5, "at least 5 peaks for xi=0.4");
    if (p4.size() >= 3) {
        const auto st = peak_spacing_stats(p4);
        o.note(fmt("xi=0.4 mean spacing %.4f, relative std %.4f (limit 0.05)", st.mean_spacing, st.relative_std));
        o.require(st.relative_std < 0.05, "spacing relative std < 0.05");
    }
    if (p3.size() >= 3 && p5.size() >= 3) {
        const double spacing = 0.5 * (peak_spacing_stats(p3).mean_spacing + peak_spacing_stats(p5).mean_spacing);
        const double tol = 0.1 * spacing;
        const std::size_t pairs = std::min(p3.size(), p5.size());
        bool all = true;
        for (std::size_t i = 0; i < pairs; ++i) {
            const double d = std::abs(p3[i].ka_position - p5[i].ka_position);
            o.note(fmt("pair %zu: |%.4f - %.4f| = %.4f vs %.4f", i + 1, p3[i].ka_position, p5[i].ka_position, d, tol));
            all = all && d <= tol;
        }
        o.note(fmt("pairing in ka order over the %zu peaks both curves share", pairs));
        o.require(all, "xi=0.3 and xi=0.5 peak positions coincide pairwise within 10% of the mean spacing");
    } else {
        o.require(false, "at least three peaks for xi=0.3 and xi=0.5");
    }
    // Rise then fall.
    const auto top = std::max_element(p4.begin(), p4.end(), [](auto& a, auto& b) { return a.height < b.height; });
    bool rise_fall = top != p4.begin() && top != p4.end() - 1;
    for (auto it = p4.begin(); rise_fall && it != top; ++it) rise_fall = it->height < (it + 1)->height;
    for (auto it = top; rise_fall && it + 1 != p4.end(); ++it) rise_fall = it->height > (it + 1)->height;
    o.require(rise_fall, "xi=0.4 heights rise to one maximum then fall");
    return o;
}

Outcome criterion7() {
    Outcome o;
    const auto s = solve_geometry_for_singularity(5.0, 0.2, 1.25, 1004.0);
    PhysicalWaveguide w{5.0, 0.2, 1.25, 1004.0, s.half_height_b};
    const double base = resonance_residual(to_dimensionless(w)).residual_norm();
    w.half_height_b = 1.01 * s.half_height_b;
    const double wider = resonance_residual(to_dimensionless(w)).residual_norm();
    o.note(fmt("solved b = %.4f nm (target 62 +/- 5); lands at xi=%.6f ka=%.6f, residual %.3e", s.half_height_b,
               s.landed.xi, s.landed.ka, s.residual_norm));
    o.note(fmt("nearest root (%.6f, %.6f), relative distance %.2e; tau0 = %.2f fs", s.nearest.xi, s.nearest.ka,
               s.relative_distance, tau0_physical({5.0, 0.2, 1.25, 1004.0, s.half_height_b}) * 1e15));
    o.note(fmt("b + 1%%: residual %.3e = %.0fx the solved residual (limit >= 10x)", wider, wider / base));
    w.half_height_b = 0.99 * s.half_height_b;
    try {
        (void)to_dimensionless(w);
        o.note("b - 1%: still propagating");
    } catch (const DomainError&) {
        o.note("b - 1%: below cutoff, no propagating mode");
    }
    const bool in_tol = std::abs(s.half_height_b - 62.0) <= 5.0;
    if (!in_tol) {
        o.note("DISCREPANCY: solved b is outside 62 +/- 5 nm; the lowest-TE-mode dispersion reduction is an "
               "assumption of this model");
    }
    o.require(in_tol, "b within 62 +/- 5 nm");
    o.require(wider >= 10.0 * base, "residual grows at least tenfold for a 1% wider guide");
    return o;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome criterion8() {
    Outcome o;
    const std::string bin = PTSCATTER_CLI_PATH;
    const auto root = fs::temp_directory_path() / "ptscatter_acceptance";
    fs::remove_all(root);
    std::vector<std::string> bytes;
    for (const char* run : {"run1", "run2"}) {
        const auto dir = root / run;
        const std::string cmd = bin + " scan --xi-range 0.1:3:30 --ka-range 0:10:201 --format csv --format svg --out " +
                                dir.string() + " > /dev/null";
        o.require(std::system(cmd.c_str()) == 0, std::string("scan exits 0 (") + run + ")");
        std::string all;
        for (const auto* f : {"scan.csv", "scan_heatmap.svg", "scan_lines.svg", "scan_delay.svg"}) {
            all += slurp(dir / f);
        }
        bytes.push_back(all);
    }
    o.note(fmt("scan output set: %zu bytes per run", bytes[0].size()));
    o.require(!bytes[0].empty() && bytes[0] == bytes[1], "byte-identical CSV/SVG across runs");
    const int st = std::system((bin + " selftest > /dev/null").c_str());
    o.note(fmt("selftest exit status %d", WEXITSTATUS(st)));
    o.require(st == 0, "selftest exits 0");
    fs::remove_all(root);
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"oracle equivalence", criterion1},  {"identities", criterion2},
        {"first spectral singularity", criterion3}, {"Hartman-like limit", criterion4},
        {"negative delays", criterion5},     {"under-gain peak structure", criterion6},
        {"physical configuration", criterion7}, {"determinism", criterion8},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        std::printf("criterion %zu %s  %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first);
        for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
