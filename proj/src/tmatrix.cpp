#include "ptscatter/tmatrix.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "ptscatter/errors.hpp"

namespace ptscatter {

namespace {

constexpr cplx kI{0.0, 1.0};

struct Mat2 {
    std::array<cplx, 4> m{cplx{1.0}, cplx{0.0}, cplx{0.0}, cplx{1.0}};

    cplx& operator()(int r, int c) { return m[static_cast<std::size_t>(2 * r + c)]; }
    const cplx& operator()(int r, int c) const { return m[static_cast<std::size_t>(2 * r + c)]; }

    [[nodiscard]] double max_abs() const {
        double out = 0.0;
        for (const auto& v : m) {
            out = std::max(out, std::abs(v));
        }
        return out;
    }
};

Mat2 operator*(const Mat2& a, const Mat2& b) {
    Mat2 out;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            out(r, c) = a(r, 0) * b(0, c) + a(r, 1) * b(1, c);
        }
    }
    return out;
}

struct Vec2 {
    cplx psi;
    cplx dpsi;
};

Vec2 operator*(const Mat2& a, const Vec2& v) {
    return {a(0, 0) * v.psi + a(0, 1) * v.dpsi, a(1, 0) * v.psi + a(1, 1) * v.dpsi};
}

// sin(z)/q for z = q d, stable as q -> 0.
cplx sin_over_q(cplx q, double d) {
    const cplx z = q * d;
    if (std::abs(z) < 1e-4) {
        const cplx z2 = z * z;
        return d * (1.0 - z2 / 6.0 + z2 * z2 / 120.0);
    }
    return std::sin(z) / q;
}

// Propagator of (psi, psi') across a layer, written as exp(log_scale) * matrix
// with log_scale = |Im q| d so every entry of matrix is O(|q| + 1/|q|) at most.
struct ScaledPropagator {
    Mat2 matrix;
    double log_scale = 0.0;
};

ScaledPropagator layer_propagator(cplx q, double d) {
    const double s = std::abs(q.imag()) * d;
    ScaledPropagator out;
    if (s < 1.0) {
        const cplx c = std::cos(q * d);
        const cplx sq = sin_over_q(q, d);
        out.matrix(0, 0) = c;
        out.matrix(0, 1) = sq;
        out.matrix(1, 0) = -q * q * sq;
        out.matrix(1, 1) = c;
        return out;
    }
    const cplx ep = std::exp(kI * q * d - s);
    const cplx em = std::exp(-kI * q * d - s);
    const cplx c = 0.5 * (ep + em);
    const cplx sn = (ep - em) / (2.0 * kI);
    out.matrix(0, 0) = c;
    out.matrix(0, 1) = sn / q;
    out.matrix(1, 0) = -q * sn;
    out.matrix(1, 1) = c;
    out.log_scale = s;
    return out;
}

Mat2 unscaled_propagator(cplx q, double d) {
    Mat2 p;
    const cplx c = std::cos(q * d);
    const cplx sq = sin_over_q(q, d);
    p(0, 0) = c;
    p(0, 1) = sq;
    p(1, 0) = -q * q * sq;
    p(1, 1) = c;
    return p;
}

Mat2 inverse_unscaled_propagator(cplx q, double d) {
    Mat2 p = unscaled_propagator(q, d);
    std::swap(p(0, 0), p(1, 1));
    p(0, 1) = -p(0, 1);
    p(1, 0) = -p(1, 0);
    return p;
}

WaveAmplitudes decompose(const Vec2& v, cplx q) {
    const cplx ratio = v.dpsi / (kI * q);
    return {0.5 * (v.psi + ratio), 0.5 * (v.psi - ratio)};
}

// Layer amplitudes referenced to the left edge from the fields at both edges.
// Each mode is read off at the edge where it is largest, so rounding in the
// edge fields is never amplified by that mode's growth across the layer.
WaveAmplitudes decompose_layer(const Vec2& at_left, const Vec2& at_right, cplx q, double width) {
    const WaveAmplitudes l = decompose(at_left, q);
    const WaveAmplitudes r = decompose(at_right, q);
    const bool forward_grows = q.imag() < 0.0;
    return {forward_grows ? r.forward * std::exp(-kI * q * width) : l.forward,
            forward_grows ? l.backward : r.backward * std::exp(kI * q * width)};
}

Vec2 free_field(double k, double x, cplx forward, cplx backward) {
    const cplx ep = std::exp(kI * k * x);
    const cplx em = std::exp(-kI * k * x);
    return {forward * ep + backward * em, kI * k * (forward * ep - backward * em)};
}

Vec2 layer_field(cplx q, double offset, const WaveAmplitudes& a) {
    const cplx ep = std::exp(kI * q * offset);
    const cplx em = std::exp(-kI * q * offset);
    return {a.forward * ep + a.backward * em, kI * q * (a.forward * ep - a.backward * em)};
}

void require_finite(const cplx& v, const char* what) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw UnrepresentableError(std::string(what) + " is not representable in double precision");
    }
}

void check_inputs(double k, const LayerStack& stack) {
    if (!std::isfinite(k) || k <= 0.0) {
        throw DomainError("wavenumber must be finite and positive, got " + std::to_string(k));
    }
    for (const auto& layer : stack.layers()) {
        if (local_wavenumber(k, layer.potential) == cplx{0.0, 0.0}) {
            throw DomainError("layer potential equals the wave energy; plane-wave basis is degenerate");
        }
    }
}

// Interior amplitudes, propagated back from the transmitted side where the
// field is a single outgoing wave.
LayerCoefficients propagate_coefficients(double k, const LayerStack& stack, const ScatteringAmplitudes& amp) {
    LayerCoefficients out;
    const auto& layers = stack.layers();
    const std::size_t n = layers.size();
    out.left_incidence.resize(n);
    out.right_incidence.resize(n);

    Vec2 v = free_field(k, stack.right_edge(), amp.t_left, 0.0);
    for (std::size_t j = n; j-- > 0;) {
        const cplx q = local_wavenumber(k, layers[j].potential);
        const Vec2 right = v;
        v = inverse_unscaled_propagator(q, layers[j].width) * v;
        out.left_incidence[j] = decompose_layer(v, right, q, layers[j].width);
    }

    v = free_field(k, stack.left_edge(), 0.0, amp.t_right);
    for (std::size_t j = 0; j < n; ++j) {
        const cplx q = local_wavenumber(k, layers[j].potential);
        const Vec2 left = v;
        v = unscaled_propagator(q, layers[j].width) * v;
        out.right_incidence[j] = decompose_layer(left, v, q, layers[j].width);
    }

    for (std::size_t j = 0; j < n; ++j) {
        for (const auto* a : {&out.left_incidence[j], &out.right_incidence[j]}) {
            require_finite(a->forward, "layer amplitude");
            require_finite(a->backward, "layer amplitude");
        }
    }
    return out;
}

StackSolution solve_transfer_product(double k, const LayerStack& stack) {
    Mat2 acc;
    double log_scale = 0.0;
    for (const auto& layer : stack.layers()) {
        const cplx q = local_wavenumber(k, layer.potential);
        const auto prop = layer_propagator(q, layer.width);
        acc = prop.matrix * acc;
        log_scale += prop.log_scale;
        const double norm = acc.max_abs();
        if (norm > 0.0 && std::isfinite(norm)) {
            for (auto& v : acc.m) {
                v /= norm;
            }
            log_scale += std::log(norm);
        }
    }

    // Wave-amplitude matrix: (alpha, beta)_right = W(x_R)^{-1} P W(x_L) (alpha, beta)_left.
    const double xl = stack.left_edge();
    const double xr = stack.right_edge();
    Mat2 wl;
    wl(0, 0) = std::exp(kI * k * xl);
    wl(0, 1) = std::exp(-kI * k * xl);
    wl(1, 0) = kI * k * wl(0, 0);
    wl(1, 1) = -kI * k * wl(0, 1);
    Mat2 wr_inv;
    wr_inv(0, 0) = 0.5 * std::exp(-kI * k * xr);
    wr_inv(0, 1) = std::exp(-kI * k * xr) / (2.0 * kI * k);
    wr_inv(1, 0) = 0.5 * std::exp(kI * k * xr);
    wr_inv(1, 1) = -std::exp(kI * k * xr) / (2.0 * kI * k);
    const Mat2 mw = wr_inv * acc * wl;

    if (mw(1, 1) == cplx{0.0, 0.0}) {
        throw SingularPointError("transfer matrix element M22 vanishes: spectral singularity");
    }
    StackSolution sol;
    auto& amp = sol.amplitudes;
    // det M == 1, so T_L = det M / M22 = 1 / M22 = T_R.
    amp.t_left = std::exp(-log_scale) / mw(1, 1);
    amp.t_right = amp.t_left;
    amp.r_left = -mw(1, 0) / mw(1, 1);
    amp.r_right = mw(0, 1) / mw(1, 1);
    require_finite(amp.t_left, "transmission amplitude");
    require_finite(amp.r_left, "left reflection amplitude");
    require_finite(amp.r_right, "right reflection amplitude");

    sol.coefficients = propagate_coefficients(k, stack, amp);
    return sol;
}

// Each exponential is referenced to the layer edge where its modulus is largest,
// so every matrix entry is bounded by max(1, |q|/k).
struct LayerBasis {
    cplx q;
    double forward_ref;
    double backward_ref;
};

StackSolution solve_assembled(double k, const LayerStack& stack) {
    const auto& layers = stack.layers();
    const std::size_t n_layers = layers.size();
    const Eigen::Index n = static_cast<Eigen::Index>(2 * n_layers + 2);
    const Eigen::Index col_left = 0;
    const Eigen::Index col_right = n - 1;

    std::vector<LayerBasis> basis(n_layers);
    for (std::size_t j = 0; j < n_layers; ++j) {
        const cplx q = local_wavenumber(k, layers[j].potential);
        const double x0 = stack.interface_position(j);
        const double x1 = stack.interface_position(j + 1);
        basis[j] = {q, q.imag() >= 0.0 ? x0 : x1, q.imag() >= 0.0 ? x1 : x0};
    }

    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
    // rhs column 0: left incidence, column 1: right incidence.
    Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(n, 2);

    // Adds region r's contribution at x to rows (row, row + 1) with the given sign.
    // r = -1 is the left free region, r = n_layers the right one.
    auto add_region = [&](long r, double x, double sign, Eigen::Index row) {
        const double inv_k = 1.0 / k;
        if (r < 0) {
            const cplx em = std::exp(-kI * k * x);
            const cplx ep = std::exp(kI * k * x);
            a(row, col_left) += sign * em;
            a(row + 1, col_left) += sign * (-kI * em);
            rhs(row, 0) -= sign * ep;
            rhs(row + 1, 0) -= sign * (kI * ep);
            return;
        }
        if (static_cast<std::size_t>(r) == n_layers) {
            const cplx em = std::exp(-kI * k * x);
            const cplx ep = std::exp(kI * k * x);
            a(row, col_right) += sign * ep;
            a(row + 1, col_right) += sign * (kI * ep);
            rhs(row, 1) -= sign * em;
            rhs(row + 1, 1) -= sign * (-kI * em);
            return;
        }
        const auto& b = basis[static_cast<std::size_t>(r)];
        const cplx uf = std::exp(kI * b.q * (x - b.forward_ref));
        const cplx ub = std::exp(-kI * b.q * (x - b.backward_ref));
        const Eigen::Index cf = 1 + 2 * static_cast<Eigen::Index>(r);
        a(row, cf) += sign * uf;
        a(row, cf + 1) += sign * ub;
        a(row + 1, cf) += sign * (kI * b.q * inv_k * uf);
        a(row + 1, cf + 1) += sign * (-kI * b.q * inv_k * ub);
    };

    for (std::size_t i = 0; i <= n_layers; ++i) {
        const double x = stack.interface_position(i);
        const Eigen::Index row = static_cast<Eigen::Index>(2 * i);
        add_region(static_cast<long>(i) - 1, x, 1.0, row);
        add_region(static_cast<long>(i), x, -1.0, row);
    }

    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    const double rcond = lu.rcond();
    if (!(rcond > std::numeric_limits<double>::epsilon())) {
        throw SingularPointError("boundary-matching system is singular (rcond=" + std::to_string(rcond) + ")");
    }
    const Eigen::MatrixXcd sol = lu.solve(rhs);

    StackSolution out;
    auto& amp = out.amplitudes;
    amp.r_left = sol(col_left, 0);
    amp.t_left = sol(col_right, 0);
    amp.t_right = sol(col_left, 1);
    amp.r_right = sol(col_right, 1);
    for (const auto& v : {amp.t_left, amp.t_right, amp.r_left, amp.r_right}) {
        require_finite(v, "scattering amplitude");
    }

    out.coefficients.left_incidence.resize(n_layers);
    out.coefficients.right_incidence.resize(n_layers);
    for (std::size_t j = 0; j < n_layers; ++j) {
        const auto& b = basis[j];
        const double x0 = stack.interface_position(j);
        const cplx to_left_f = std::exp(kI * b.q * (x0 - b.forward_ref));
        const cplx to_left_b = std::exp(-kI * b.q * (x0 - b.backward_ref));
        const Eigen::Index cf = 1 + 2 * static_cast<Eigen::Index>(j);
        out.coefficients.left_incidence[j] = {sol(cf, 0) * to_left_f, sol(cf + 1, 0) * to_left_b};
        out.coefficients.right_incidence[j] = {sol(cf, 1) * to_left_f, sol(cf + 1, 1) * to_left_b};
    }
    return out;
}

}  // namespace

LayerStack::LayerStack(std::initializer_list<Layer> layers) {
    for (const auto& l : layers) {
        push_back(l);
    }
}

LayerStack::LayerStack(std::vector<Layer> layers) {
    for (const auto& l : layers) {
        push_back(l);
    }
}

void LayerStack::check(const Layer& layer) {
    if (!std::isfinite(layer.width) || layer.width <= 0.0) {
        throw DomainError("layer width must be finite and positive, got " + std::to_string(layer.width));
    }
    if (!std::isfinite(layer.potential.real()) || !std::isfinite(layer.potential.imag())) {
        throw DomainError("layer potential must be finite");
    }
}

void LayerStack::push_back(const Layer& layer) {
    check(layer);
    layers_.push_back(layer);
    total_width_ += layer.width;
}

double LayerStack::interface_position(std::size_t i) const {
    if (i == layers_.size()) {
        return right_edge();
    }
    double x = left_edge();
    for (std::size_t j = 0; j < i; ++j) {
        x += layers_[j].width;
    }
    return x;
}

cplx LayerStack::potential_at(double x) const {
    double edge = left_edge();
    if (x < edge) {
        return {0.0, 0.0};
    }
    for (const auto& layer : layers_) {
        edge += layer.width;
        if (x < edge) {
            return layer.potential;
        }
    }
    return {0.0, 0.0};
}

cplx local_wavenumber(double k, cplx potential) {
    cplx q = k * std::sqrt(cplx{1.0, 0.0} - potential);
    if (q.real() == 0.0 && q.imag() < 0.0) {
        q = -q;
    }
    return q;
}

StackSolution solve_stack(double k, const LayerStack& stack, SolverPath path) {
    check_inputs(k, stack);
    switch (path) {
        case SolverPath::TransferProduct:
            return solve_transfer_product(k, stack);
        case SolverPath::AssembledSystem:
            return solve_assembled(k, stack);
    }
    throw DomainError("unknown solver path");
}

WaveAmplitudes to_global(const WaveAmplitudes& local, double k, const Layer& layer, double left_edge) {
    const cplx q = local_wavenumber(k, layer.potential);
    return {local.forward * std::exp(-kI * q * left_edge), local.backward * std::exp(kI * q * left_edge)};
}

double interface_mismatch(double k, const LayerStack& stack, const StackSolution& solution) {
    const auto& layers = stack.layers();
    const std::size_t n = layers.size();
    const auto& amp = solution.amplitudes;
    double worst = 0.0;

    for (int dir = 0; dir < 2; ++dir) {
        const auto& coeffs = dir == 0 ? solution.coefficients.left_incidence : solution.coefficients.right_incidence;
        auto region_field = [&](std::size_t r, double x) -> Vec2 {
            // r == 0: left free region, r == n + 1: right free region, else layer r - 1.
            if (r == 0) {
                return dir == 0 ? free_field(k, x, 1.0, amp.r_left) : free_field(k, x, 0.0, amp.t_right);
            }
            if (r == n + 1) {
                return dir == 0 ? free_field(k, x, amp.t_left, 0.0) : free_field(k, x, amp.r_right, 1.0);
            }
            const std::size_t j = r - 1;
            const cplx q = local_wavenumber(k, layers[j].potential);
            return layer_field(q, x - stack.interface_position(j), coeffs[j]);
        };
        for (std::size_t i = 0; i <= n; ++i) {
            const double x = stack.interface_position(i);
            const Vec2 lhs = region_field(i, x);
            const Vec2 rhs = region_field(i + 1, x);
            const double scale = std::max({std::abs(lhs.psi), std::abs(lhs.dpsi) / k, std::abs(rhs.psi),
                                           std::abs(rhs.dpsi) / k, std::numeric_limits<double>::min()});
            const double jump = std::max(std::abs(lhs.psi - rhs.psi), std::abs(lhs.dpsi - rhs.dpsi) / k);
            worst = std::max(worst, jump / scale);
        }
    }
    return worst;
}

LayerStack pt_barrier_stack(double xi) {
    if (!std::isfinite(xi) || xi < 0.0) {
        throw DomainError("xi must be finite and non-negative, got " + std::to_string(xi));
    }
    return LayerStack{{1.0, cplx{0.0, xi}}, {1.0, cplx{0.0, -xi}}};
}

bool pt_symmetry_check(const LayerStack& stack) {
    // Merge neighbours with identical potential so the comparison is about the
    // piecewise function, not how it happens to be sliced.
    std::vector<Layer> merged;
    for (const auto& layer : stack.layers()) {
        if (!merged.empty() && merged.back().potential == layer.potential) {
            merged.back().width += layer.width;
        } else {
            merged.push_back(layer);
        }
    }
    const std::size_t n = merged.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Layer& a = merged[i];
        const Layer& b = merged[n - 1 - i];
        if (a.potential != std::conj(b.potential)) {
            return false;
        }
        if (std::abs(a.width - b.width) > 1e-12 * std::max(a.width, b.width)) {
            return false;
        }
    }
    return true;
}

}  // namespace ptscatter
