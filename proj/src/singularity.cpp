#include "ptscatter/singularity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "ptscatter/errors.hpp"
#include "ptscatter/parallel.hpp"

namespace ptscatter {

namespace {

constexpr int kMaxNewtonIterations = 50;
constexpr double kMergeDistance = 1e-6;

using Vec = std::array<double, 2>;

// Residuals normalised by cosh(2 delta ka): smooth and finite everywhere, same roots.
Vec scaled_residual(double xi, double ka) {
    const auto r = resonance_residual({xi, ka});
    return {r.r1.mantissa / r.cosh_mantissa, r.r2.mantissa / r.cosh_mantissa};
}

double norm_inf(const Vec& v) { return std::max(std::abs(v[0]), std::abs(v[1])); }

std::optional<SingularityPoint> newton_from(double xi, double ka, double tol) {
    Vec f = scaled_residual(xi, ka);
    double fn = norm_inf(f);
    for (int it = 0; it <= kMaxNewtonIterations; ++it) {
        if (fn < tol) {
            return SingularityPoint{xi, ka, fn, it};
        }
        if (it == kMaxNewtonIterations) {
            break;
        }
        const double hx = 1e-7 * std::max(1.0, xi);
        const double hk = 1e-7 * std::max(1.0, ka);
        if (xi <= hx || ka <= hk) {
            return std::nullopt;
        }
        const Vec fxp = scaled_residual(xi + hx, ka);
        const Vec fxm = scaled_residual(xi - hx, ka);
        const Vec fkp = scaled_residual(xi, ka + hk);
        const Vec fkm = scaled_residual(xi, ka - hk);
        const double j00 = (fxp[0] - fxm[0]) / (2.0 * hx);
        const double j10 = (fxp[1] - fxm[1]) / (2.0 * hx);
        const double j01 = (fkp[0] - fkm[0]) / (2.0 * hk);
        const double j11 = (fkp[1] - fkm[1]) / (2.0 * hk);
        const double det = j00 * j11 - j01 * j10;
        if (det == 0.0 || !std::isfinite(det)) {
            return std::nullopt;
        }
        const double dxi = -(j11 * f[0] - j01 * f[1]) / det;
        const double dka = -(-j10 * f[0] + j00 * f[1]) / det;

        bool accepted = false;
        for (double lambda = 1.0; lambda > 1e-10; lambda *= 0.5) {
            const double xn = xi + lambda * dxi;
            const double kn = ka + lambda * dka;
            if (!(xn > 0.0) || !(kn > 0.0)) {
                continue;
            }
            const Vec fnew = scaled_residual(xn, kn);
            const double nn = norm_inf(fnew);
            if (nn < fn) {
                xi = xn;
                ka = kn;
                f = fnew;
                fn = nn;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            return std::nullopt;
        }
    }
    return std::nullopt;
}

double linspace_at(Range r, int n, int i) {
    return n == 1 ? r.lo : r.lo + r.width() * static_cast<double>(i) / static_cast<double>(n - 1);
}

double log_t2(double xi, double ka) {
    try {
        return std::log(transmission_probability({xi, ka}));
    } catch (const SingularPointError&) {
        return std::numeric_limits<double>::infinity();
    }
}

double t2_or_inf(double xi, double ka) {
    try {
        return transmission_probability({xi, ka});
    } catch (const SingularPointError&) {
        return std::numeric_limits<double>::infinity();
    }
}

void check_range(Range r, const char* name, bool allow_zero) {
    const bool ok = std::isfinite(r.lo) && std::isfinite(r.hi) && r.hi > r.lo && (allow_zero ? r.lo >= 0.0 : r.lo > 0.0);
    if (!ok) {
        throw DomainError(std::string(name) + " range must be finite, increasing and positive");
    }
}

// Parabolic vertex offset (in units of h) through (-h, a), (0, b), (h, c).
double parabola_vertex(double a, double b, double c) {
    const double curvature = a - 2.0 * b + c;
    if (!(curvature < 0.0)) {
        return 0.0;
    }
    return std::clamp(0.5 * (a - c) / curvature, -1.0, 1.0);
}

}  // namespace

std::vector<SingularityPoint> find_singularities(Range xi_range, Range ka_range, GridDensity grid, double tol) {
    check_range(xi_range, "xi", false);
    check_range(ka_range, "ka", false);
    if (grid.xi_samples < 2 || grid.ka_samples < 2) {
        throw DomainError("singularity grid needs at least 2 samples per axis");
    }
    if (!(tol > 0.0)) {
        throw DomainError("tolerance must be positive");
    }
    const int nx = grid.xi_samples;
    const int nk = grid.ka_samples;
    std::vector<Vec> values(static_cast<std::size_t>(nx * nk));
    auto at = [&](int i, int j) -> Vec& { return values[static_cast<std::size_t>(i * nk + j)]; };
    parallel_for(static_cast<std::size_t>(nx), [&](std::size_t i) {
        for (int j = 0; j < nk; ++j) {
            at(static_cast<int>(i), j) =
                scaled_residual(linspace_at(xi_range, nx, static_cast<int>(i)), linspace_at(ka_range, nk, j));
        }
    });

    std::vector<std::pair<double, double>> seeds;
    for (int i = 0; i + 1 < nx; ++i) {
        for (int j = 0; j + 1 < nk; ++j) {
            bool pos[2] = {false, false};
            bool neg[2] = {false, false};
            for (const auto& v : {at(i, j), at(i + 1, j), at(i, j + 1), at(i + 1, j + 1)}) {
                for (int c = 0; c < 2; ++c) {
                    pos[c] = pos[c] || v[static_cast<std::size_t>(c)] >= 0.0;
                    neg[c] = neg[c] || v[static_cast<std::size_t>(c)] <= 0.0;
                }
            }
            if (pos[0] && neg[0] && pos[1] && neg[1]) {
                seeds.emplace_back(0.5 * (linspace_at(xi_range, nx, i) + linspace_at(xi_range, nx, i + 1)),
                                   0.5 * (linspace_at(ka_range, nk, j) + linspace_at(ka_range, nk, j + 1)));
            }
        }
    }
    for (int i = 1; i + 1 < nx; ++i) {
        for (int j = 1; j + 1 < nk; ++j) {
            const double c = norm_inf(at(i, j));
            bool is_min = true;
            for (int di = -1; di <= 1 && is_min; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    if ((di != 0 || dj != 0) && norm_inf(at(i + di, j + dj)) < c) {
                        is_min = false;
                        break;
                    }
                }
            }
            if (is_min) {
                seeds.emplace_back(linspace_at(xi_range, nx, i), linspace_at(ka_range, nk, j));
            }
        }
    }

    std::vector<std::optional<SingularityPoint>> found(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t s) { found[s] = newton_from(seeds[s].first, seeds[s].second, tol); });

    std::vector<SingularityPoint> roots;
    for (const auto& f : found) {
        if (f && xi_range.contains(f->xi) && ka_range.contains(f->ka)) {
            roots.push_back(*f);
        }
    }
    std::sort(roots.begin(), roots.end(), [](const SingularityPoint& a, const SingularityPoint& b) {
        if (a.ka != b.ka) {
            return a.ka < b.ka;
        }
        if (a.xi != b.xi) {
            return a.xi < b.xi;
        }
        return a.residual_norm < b.residual_norm;
    });
    // Merge near-duplicates, keeping the best-converged representative.
    std::vector<SingularityPoint> out;
    for (const auto& r : roots) {
        auto dup = std::find_if(out.begin(), out.end(), [&](const SingularityPoint& o) {
            return std::abs(o.xi - r.xi) < kMergeDistance && std::abs(o.ka - r.ka) < kMergeDistance;
        });
        if (dup == out.end()) {
            out.push_back(r);
        } else if (r.residual_norm < dup->residual_norm) {
            *dup = r;
        }
    }
    std::sort(out.begin(), out.end(), [](const SingularityPoint& a, const SingularityPoint& b) {
        return a.ka != b.ka ? a.ka < b.ka : a.xi < b.xi;
    });
    return out;
}

std::vector<Peak> peak_scan(double xi, Range ka_range, double samples_per_unit) {
    if (!std::isfinite(xi) || xi < 0.0) {
        throw DomainError("xi must be finite and non-negative");
    }
    check_range(ka_range, "ka", true);
    if (!(samples_per_unit > 0.0)) {
        throw DomainError("samples_per_unit must be positive");
    }
    const int n = std::max(3, static_cast<int>(std::ceil(ka_range.width() * samples_per_unit)) + 1);
    const double h = ka_range.width() / static_cast<double>(n - 1);
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        t[static_cast<std::size_t>(i)] = t2_or_inf(xi, linspace_at(ka_range, n, i));
    }
    auto t_at = [&](int i) { return t[static_cast<std::size_t>(i)]; };

    std::vector<Peak> peaks;
    for (int i = 1; i + 1 < n; ++i) {
        // Relative margin keeps rounding ripple on a flat |T|^2 from counting.
        const double c = t_at(i);
        if (!(c > t_at(i - 1) * (1.0 + 1e-13) && c > t_at(i + 1) * (1.0 + 1e-13))) {
            continue;
        }
        const double x_grid = linspace_at(ka_range, n, i);
        double best_x = x_grid;
        double best_t = c;
        double step = h;
        for (int iter = 0; iter < 6; ++iter) {
            const double a = log_t2(xi, best_x - step);
            const double b = std::log(best_t);
            const double cc = log_t2(xi, best_x + step);
            const double x_new = best_x + step * parabola_vertex(a, b, cc);
            const double t_new = t2_or_inf(xi, x_new);
            if (t_new > best_t && std::abs(x_new - x_grid) <= h) {
                best_x = x_new;
                best_t = t_new;
            }
            step *= 0.25;
        }

        // Half width at half height on each side, stopping at the adjacent valley.
        const double half = 0.5 * best_t;
        auto side_width = [&](int dir) {
            int j = i;
            double prev = best_t;
            while (j + dir >= 0 && j + dir < n) {
                const int nj = j + dir;
                const double v = t_at(nj);
                if (v <= half) {
                    double inner = (j == i) ? best_x : linspace_at(ka_range, n, j);
                    double outer = linspace_at(ka_range, n, nj);
                    for (int b = 0; b < 60; ++b) {
                        const double mid = 0.5 * (inner + outer);
                        (t2_or_inf(xi, mid) > half ? inner : outer) = mid;
                    }
                    return std::abs(0.5 * (inner + outer) - best_x);
                }
                if (v > prev) {
                    break;  // valley reached before dropping to half height
                }
                prev = v;
                j = nj;
            }
            return std::max(std::abs(linspace_at(ka_range, n, j) - best_x), 0.5 * h);
        };
        peaks.push_back({best_x, best_t, std::min(side_width(-1), side_width(+1)), xi});
    }
    return peaks;
}

SpacingStats peak_spacing_stats(std::span<const Peak> peaks) {
    if (peaks.size() < 3) {
        throw InsufficientDataError("spacing statistics need at least 3 peaks, got " + std::to_string(peaks.size()));
    }
    std::vector<double> gaps;
    for (std::size_t i = 1; i < peaks.size(); ++i) {
        gaps.push_back(peaks[i].ka_position - peaks[i - 1].ka_position);
    }
    double mean = 0.0;
    for (const double g : gaps) {
        mean += g;
    }
    mean /= static_cast<double>(gaps.size());
    double var = 0.0;
    for (const double g : gaps) {
        var += (g - mean) * (g - mean);
    }
    var /= static_cast<double>(gaps.size());
    return {mean, std::sqrt(var) / mean};
}

std::vector<ResonancePoint> resonance_curve(Range ka_range, int steps, Range xi_range, int xi_samples) {
    check_range(ka_range, "ka", false);
    check_range(xi_range, "xi", false);
    if (steps < 2 || xi_samples < 3) {
        throw DomainError("resonance curve needs steps >= 2 and xi_samples >= 3");
    }
    std::vector<ResonancePoint> out(static_cast<std::size_t>(steps));
    parallel_for(out.size(), [&](std::size_t s) {
        const double ka = linspace_at(ka_range, steps, static_cast<int>(s));
        int best = 0;
        double best_v = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < xi_samples; ++i) {
            const double v = log_t2(linspace_at(xi_range, xi_samples, i), ka);
            if (v > best_v) {
                best_v = v;
                best = i;
            }
        }
        double lo = linspace_at(xi_range, xi_samples, std::max(0, best - 1));
        double hi = linspace_at(xi_range, xi_samples, std::min(xi_samples - 1, best + 1));
        constexpr double kInvPhi = 0.6180339887498949;
        double x1 = hi - kInvPhi * (hi - lo);
        double x2 = lo + kInvPhi * (hi - lo);
        double f1 = log_t2(x1, ka);
        double f2 = log_t2(x2, ka);
        while (hi - lo > 1e-12 * std::max(1.0, hi)) {
            if (f1 < f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + kInvPhi * (hi - lo);
                f2 = log_t2(x2, ka);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - kInvPhi * (hi - lo);
                f1 = log_t2(x1, ka);
            }
        }
        double xi_star = 0.5 * (lo + hi);
        double height = t2_or_inf(xi_star, ka);
        // A boundary maximum is not bracketed by golden section; keep the grid winner.
        const double grid_xi = linspace_at(xi_range, xi_samples, best);
        if (std::exp(best_v) > height) {
            xi_star = grid_xi;
            height = std::exp(best_v);
        }
        out[s] = {ka, xi_star, height};
    });
    return out;
}

}  // namespace ptscatter
