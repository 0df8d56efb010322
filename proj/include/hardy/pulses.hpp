#pragma once

// Protocol operations on SystemState.
//
// A PulseOp is either an internal 9x9 unitary (acting as U (x) 1 on the
// meter), a dense unitary on the whole composite space, or a meter operation
// conditioned on one internal basis state:
//
//     Pi_t (x) A + (1 - Pi_t) (x) 1.
//
// Unitarity of matrix-backed pulses is checked once, at construction.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hardy/basis.hpp"
#include "hardy/meter.hpp"
#include "hardy/state.hpp"

namespace hardy {

// Row-major 9x9 matrix on the internal space.
using InternalMatrix = std::array<cplx, kInternalDim * kInternalDim>;

inline constexpr double kUnitarityTolerance = 1e-12;

struct InternalGate {
    InternalMatrix matrix;
};

// Dense operator on the 9M-dimensional composite space of a none or qubit
// meter (orthonormal meter coordinates).
struct DenseGate {
    std::size_t meter_dim = 1;
    std::vector<cplx> matrix;
};

// Moves every Gaussian branch of the target component by `shift`.
struct ConditionalDisplacement {
    IonBasisIndex target;
    double shift = 0.0;
};

// qubit_rotate(theta) on the meter of the target component.
struct ConditionalRotation {
    IonBasisIndex target;
    double theta = 0.0;
};

class PulseOp {
  public:
    using Action = std::variant<InternalGate, DenseGate, ConditionalDisplacement, ConditionalRotation>;

    // Throw InvariantError if the matrix deviates from unitarity by
    // kUnitarityTolerance or more.
    static PulseOp internal(std::string label, const InternalMatrix& u);
    static PulseOp dense(std::string label, std::size_t meter_dim, std::vector<cplx> u);

    static PulseOp conditional_displacement(std::string label, IonBasisIndex target, double shift);
    static PulseOp conditional_rotation(std::string label, IonBasisIndex target, double theta);

    const std::string& label() const { return label_; }
    const Action& action() const { return action_; }

    PulseOp inverse() const;

    // Dense 9M x 9M matrix for an orthonormal meter of dimension meter_dim.
    // Throws MeterKindError for displacements (no finite dense form) and
    // DimensionError when the requested dimension does not fit the pulse.
    std::vector<cplx> matrix(std::size_t meter_dim) const;

  private:
    PulseOp(std::string label, Action action) : label_(std::move(label)), action_(std::move(action)) {}

    std::string label_;
    Action action_;
};

// max_ij |(U^dagger U - 1)_ij| for a row-major dim x dim matrix.
double unitarity_deviation(std::span<const cplx> u, std::size_t dim);

InternalMatrix internal_identity();
// a * b (apply b first).
InternalMatrix multiply(const InternalMatrix& a, const InternalMatrix& b);

// Returns op|state>. Throws DimensionError / MeterKindError when the pulse
// cannot act on the state's meter space.
SystemState apply_unitary(const SystemState& state, const PulseOp& op);
SystemState apply_sequence(SystemState state, std::span<const PulseOp> ops);

// Resonant g-e pulse on one ion (1 or 2):
//   |g> -> (|g> + |e>)/sqrt(2),  |e> -> (|e> - |g>)/sqrt(2),  |f> -> |f>.
// Throws std::invalid_argument for other ion numbers.
PulseOp beamsplitter(int ion);
// beamsplitter(1) and beamsplitter(2) combined into one internal gate.
PulseOp beamsplitter_pair();

// Two-photon transfer |ee> -> |ff>, completed unitarily by |ff> -> -|ee>;
// identity on every other internal state.
PulseOp annihilation_pulse();

// Displaces the |gg> component of a Gaussian meter by -a.
PulseOp light_shift_meter(double a);

// qubit_rotate(theta) on the meter ion, conditioned on |gg>.
PulseOp partial_ccnot(double theta);

// Diagonal projector onto a set of internal basis states.
struct Projector {
    std::string label;
    std::vector<IonBasisIndex> support;
};

// Projective measurement on the internal space.
class Instrument {
  public:
    struct Outcome {
        std::string label;
        double probability = 0.0;
        // Absent when the outcome probability is below kPostselectionFloor.
        std::optional<SystemState> state;
    };

    // Throws std::invalid_argument unless the projectors are pairwise
    // orthogonal and sum to the identity on the internal space.
    explicit Instrument(std::vector<Projector> projectors);

    // {Pi_target, 1 - Pi_target}
    static Instrument binary(IonBasisIndex target);

    std::span<const Projector> projectors() const { return projectors_; }

    std::vector<Outcome> measure(const SystemState& state) const;

  private:
    std::vector<Projector> projectors_;
};

Instrument strong_measurement(std::vector<Projector> projectors);

}  // namespace hardy
