#pragma once

// Composite state of the two system ions and a meter.
//
// Amplitudes are stored internal-major: amplitude(i, k) lives at
// i * meter_dim + k, with i the IonBasisIndex and k the meter coordinate.
// The meter coordinate means different things per meter kind:
//   none      one coordinate, no meter
//   gaussian  coefficient of the displaced ground state centered at centers[k]
//             (non-orthogonal; norms go through the Gram kernel)
//   grid      sampled wavefunction value at node k (trapezoid metric)
//   qubit     amplitude of meter level |g> (k = 0) or |e> (k = 1)

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "hardy/basis.hpp"
#include "hardy/meter.hpp"

namespace hardy {

enum class MeterKind { none, gaussian, grid, qubit };

const char* to_string(MeterKind kind);

struct NoMeter {
    friend bool operator==(const NoMeter&, const NoMeter&) = default;
};

struct GaussianMeter {
    double sigma = 1.0;
    std::vector<double> centers;
    friend bool operator==(const GaussianMeter&, const GaussianMeter&) = default;
};

struct GridMeter {
    double xmin = 0.0;
    double xmax = 1.0;
    std::size_t n = 2;
    friend bool operator==(const GridMeter&, const GridMeter&) = default;
};

struct QubitMeter {
    friend bool operator==(const QubitMeter&, const QubitMeter&) = default;
};

using MeterSpace = std::variant<NoMeter, GaussianMeter, GridMeter, QubitMeter>;

MeterKind meter_kind(const MeterSpace& m);
std::size_t meter_dimension(const MeterSpace& m);

using ProbabilityTable = std::array<double, kInternalDim>;

// Immutable after construction; every operation returns a new value.
class SystemState {
  public:
    // Throws DimensionError when amplitudes.size() != 9 * meter_dimension(meter)
    // and std::invalid_argument on non-finite amplitudes.
    SystemState(MeterSpace meter, std::vector<cplx> amplitudes);

    static SystemState basis_state(IonBasisIndex i);
    static SystemState from_internal(const std::array<cplx, kInternalDim>& amplitudes);
    static SystemState product(IonBasisIndex i, const GaussianPointer& meter);
    static SystemState product(IonBasisIndex i, const GridPointer& meter);
    static SystemState product(IonBasisIndex i, const QubitPointer& meter);

    const MeterSpace& meter() const { return meter_; }
    MeterKind kind() const { return meter_kind(meter_); }
    std::size_t meter_dim() const { return meter_dim_; }
    std::size_t size() const { return amps_.size(); }

    std::span<const cplx> amplitudes() const { return amps_; }
    cplx amplitude(IonBasisIndex i, std::size_t k = 0) const;
    // Meter-space vector attached to internal state i.
    std::span<const cplx> component(IonBasisIndex i) const;

    // Squared norm under the meter metric.
    double norm_squared() const;
    double component_norm_squared(IonBasisIndex i) const;
    SystemState normalized() const;

    // Meter component as a pointer value. Each throws MeterKindError for the
    // wrong meter kind. Components are returned unnormalized.
    GaussianPointer gaussian_component(IonBasisIndex i) const;
    GridPointer grid_component(IonBasisIndex i) const;
    std::array<cplx, 2> qubit_component(IonBasisIndex i) const;

  private:
    MeterSpace meter_;
    std::size_t meter_dim_;
    std::vector<cplx> amps_;
};

// |gg> with no meter.
SystemState init_ground();
// |gg> tensored with the given fiducial meter state.
SystemState init_ground(const GaussianPointer& meter);
SystemState init_ground(const GridPointer& meter);
SystemState init_ground(const QubitPointer& meter);

// Meter-aware <a|b>. Gaussian states may carry different branch centers;
// grid states must share the grid. Throws MeterKindError for mismatched kinds.
cplx inner_product(const SystemState& a, const SystemState& b);

// |<a|b>| = 1 within tol for normalized inputs.
bool equal_up_to_phase(const SystemState& a, const SystemState& b, double tol = 1e-12);

// Gaussian states: merge coincident centers, drop unused branches, sort
// centers ascending. Other kinds are returned unchanged.
SystemState compacted(const SystemState& s);

inline constexpr double kPostselectionFloor = 1e-15;

struct Projection {
    double probability = 0.0;
    SystemState conditional;
};

// Probability of finding the ions in `target` and the renormalized
// conditional state. Throws PostselectionError below kPostselectionFloor.
Projection project_internal(const SystemState& s, IonBasisIndex target);

// Probabilities of the nine internal outcomes, normalized by the state norm.
ProbabilityTable probability_table(const SystemState& s);

}  // namespace hardy
