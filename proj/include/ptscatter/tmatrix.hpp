#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace ptscatter {

using cplx = std::complex<double>;

// One slab of constant complex potential. Widths are measured in units of the
// barrier half-width a; the potential in units of the wave energy E = k^2.
struct Layer {
    double width = 1.0;
    cplx potential{0.0, 0.0};
};

// Ordered slabs, centred on x = 0. An empty stack is free space.
class LayerStack {
public:
    LayerStack() = default;
    LayerStack(std::initializer_list<Layer> layers);
    explicit LayerStack(std::vector<Layer> layers);

    void push_back(const Layer& layer);

    [[nodiscard]] const std::vector<Layer>& layers() const { return layers_; }
    [[nodiscard]] std::size_t size() const { return layers_.size(); }
    [[nodiscard]] bool empty() const { return layers_.empty(); }
    [[nodiscard]] double total_width() const { return total_width_; }
    [[nodiscard]] double left_edge() const { return -0.5 * total_width_; }
    [[nodiscard]] double right_edge() const { return 0.5 * total_width_; }
    // x-coordinate of the left edge of layer i (i == size() gives the right edge).
    [[nodiscard]] double interface_position(std::size_t i) const;
    // Piecewise potential; 0 outside the stack. Points on an interface take the
    // layer to their right.
    [[nodiscard]] cplx potential_at(double x) const;

private:
    static void check(const Layer& layer);

    std::vector<Layer> layers_;
    double total_width_ = 0.0;
};

// Far-field amplitudes with the plane-wave conventions
//   left incidence:  e^{ikx} + R_L e^{-ikx}  |  T_L e^{ikx}
//   right incidence: T_R e^{-ikx}            |  e^{-ikx} + R_R e^{ikx}
struct ScatteringAmplitudes {
    cplx t_left{1.0, 0.0};
    cplx t_right{1.0, 0.0};
    cplx r_left{0.0, 0.0};
    cplx r_right{0.0, 0.0};
};

// Inside layer j the field is forward * e^{iq(x - x_j)} + backward * e^{-iq(x - x_j)}
// with x_j the layer's left edge.
struct WaveAmplitudes {
    cplx forward{0.0, 0.0};
    cplx backward{0.0, 0.0};
};

// For the two-layer barrier, left_incidence holds (A1, B1), (A2, B2) and
// right_incidence holds (D1, C1), (D2, C2) once converted to global
// coordinates with to_global().
struct LayerCoefficients {
    std::vector<WaveAmplitudes> left_incidence;
    std::vector<WaveAmplitudes> right_incidence;
};

enum class SolverPath {
    TransferProduct,  // cumulative scaled 2x2 transfer matrices
    AssembledSystem,  // one sparse-in-spirit linear system over all interfaces
};

struct StackSolution {
    ScatteringAmplitudes amplitudes;
    LayerCoefficients coefficients;
};

// q = k sqrt(1 - potential), principal branch: Re q >= 0, and Im q >= 0 when Re q == 0.
[[nodiscard]] cplx local_wavenumber(double k, cplx potential);

// Solves continuity of psi and psi' at every interface for left and right
// incidence. k is the free-space wavenumber in units of 1/a.
// Throws SingularPointError on an exactly singular boundary problem and
// UnrepresentableError when amplitudes overflow.
[[nodiscard]] StackSolution solve_stack(double k, const LayerStack& stack,
                                        SolverPath path = SolverPath::TransferProduct);

// Layer amplitudes referenced to x = 0 instead of the layer's left edge.
[[nodiscard]] WaveAmplitudes to_global(const WaveAmplitudes& local, double k, const Layer& layer,
                                       double left_edge);

// Largest relative jump of psi or psi'/k across any interface, outer ones included,
// for both incidence directions.
[[nodiscard]] double interface_mismatch(double k, const LayerStack& stack, const StackSolution& solution);

// Gain layer +i xi on [-1, 0], loss layer -i xi on [0, 1].
[[nodiscard]] LayerStack pt_barrier_stack(double xi);

// True iff V(x) == conj(V(-x)) about the stack centre.
[[nodiscard]] bool pt_symmetry_check(const LayerStack& stack);

}  // namespace ptscatter
