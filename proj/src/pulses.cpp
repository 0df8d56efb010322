#include "hardy/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hardy/errors.hpp"

namespace hardy {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

using LevelMatrix = std::array<std::array<cplx, kLevels>, kLevels>;

LevelMatrix beamsplitter_levels() {
    const double h = 1.0 / std::numbers::sqrt2;
    LevelMatrix b{};
    // b[out][in]
    b[0][0] = h;   // g -> g
    b[1][0] = h;   // g -> e
    b[0][1] = -h;  // e -> -g
    b[1][1] = h;   // e -> e
    b[2][2] = 1.0;
    return b;
}

InternalMatrix on_ion(int ion, const LevelMatrix& b) {
    InternalMatrix u{};
    for (const auto out : all_internal_states()) {
        for (const auto in : all_internal_states()) {
            cplx v;
            if (ion == 1) {
                v = out.ion2 == in.ion2 ? b[level_index(out.ion1)][level_index(in.ion1)] : cplx{};
            } else {
                v = out.ion1 == in.ion1 ? b[level_index(out.ion2)][level_index(in.ion2)] : cplx{};
            }
            u[out.index() * kInternalDim + in.index()] = v;
        }
    }
    return u;
}

std::vector<cplx> adjoint(std::span<const cplx> u, std::size_t dim) {
    std::vector<cplx> out(dim * dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) out[c * dim + r] = std::conj(u[r * dim + c]);
    }
    return out;
}

void check_unitary(const std::string& label, std::span<const cplx> u, std::size_t dim) {
    const double dev = unitarity_deviation(u, dim);
    if (!(dev < kUnitarityTolerance)) {
        throw InvariantError("pulse '" + label + "' is not unitary (deviation " + std::to_string(dev) + ")");
    }
}

SystemState apply_internal(const SystemState& s, const InternalMatrix& u) {
    const std::size_t m = s.meter_dim();
    const auto in = s.amplitudes();
    std::vector<cplx> out(in.size());
    for (std::size_t r = 0; r < kInternalDim; ++r) {
        for (std::size_t c = 0; c < kInternalDim; ++c) {
            const cplx w = u[r * kInternalDim + c];
            if (w == cplx{}) continue;
            for (std::size_t k = 0; k < m; ++k) out[r * m + k] += w * in[c * m + k];
        }
    }
    return SystemState(s.meter(), std::move(out));
}

SystemState apply_dense(const SystemState& s, const DenseGate& g) {
    if (s.kind() != MeterKind::none && s.kind() != MeterKind::qubit) {
        throw MeterKindError(std::string("dense pulses need an orthonormal meter, state has ") + to_string(s.kind()));
    }
    const std::size_t dim = kInternalDim * g.meter_dim;
    if (s.size() != dim) {
        throw DimensionError("dense pulse of dimension " + std::to_string(dim) + " applied to state of dimension " +
                             std::to_string(s.size()));
    }
    const auto in = s.amplitudes();
    std::vector<cplx> out(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        cplx acc{};
        for (std::size_t c = 0; c < dim; ++c) acc += g.matrix[r * dim + c] * in[c];
        out[r] = acc;
    }
    return SystemState(s.meter(), std::move(out));
}

SystemState apply_displacement(const SystemState& s, const ConditionalDisplacement& d) {
    const auto* gm = std::get_if<GaussianMeter>(&s.meter());
    if (gm == nullptr) {
        throw MeterKindError(std::string("light shift needs a gaussian meter, state has ") + to_string(s.kind()));
    }
    const std::size_t m = gm->centers.size();
    std::vector<double> centers = gm->centers;
    std::vector<std::size_t> moved(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double target = gm->centers[k] + d.shift;
        const auto it = std::find_if(centers.begin(), centers.end(),
                                     [&](double c) { return std::abs(c - target) <= 1e-12 * gm->sigma; });
        if (it != centers.end()) {
            moved[k] = static_cast<std::size_t>(it - centers.begin());
        } else {
            moved[k] = centers.size();
            centers.push_back(target);
        }
    }
    const std::size_t mm = centers.size();
    std::vector<cplx> out(kInternalDim * mm);
    const auto in = s.amplitudes();
    for (const auto i : all_internal_states()) {
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t dest = i == d.target ? moved[k] : k;
            out[i.index() * mm + dest] += in[i.index() * m + k];
        }
    }
    return compacted(SystemState(GaussianMeter{gm->sigma, std::move(centers)}, std::move(out)));
}

SystemState apply_rotation(const SystemState& s, const ConditionalRotation& r) {
    if (s.kind() != MeterKind::qubit) {
        throw MeterKindError(std::string("partial C2-NOT needs a qubit meter, state has ") + to_string(s.kind()));
    }
    std::vector<cplx> out(s.amplitudes().begin(), s.amplitudes().end());
    const double c = std::cos(0.5 * r.theta);
    const double sn = std::sin(0.5 * r.theta);
    const std::size_t base = r.target.index() * 2;
    const cplx g = out[base];
    const cplx e = out[base + 1];
    out[base] = c * g - sn * e;
    out[base + 1] = sn * g + c * e;
    return SystemState(s.meter(), std::move(out));
}

}  // namespace

double unitarity_deviation(std::span<const cplx> u, std::size_t dim) {
    if (u.size() != dim * dim) throw DimensionError("matrix size does not match dimension");
    double worst = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            cplx acc{};
            for (std::size_t k = 0; k < dim; ++k) acc += std::conj(u[k * dim + i]) * u[k * dim + j];
            if (i == j) acc -= 1.0;
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

InternalMatrix internal_identity() {
    InternalMatrix u{};
    for (std::size_t i = 0; i < kInternalDim; ++i) u[i * kInternalDim + i] = 1.0;
    return u;
}

InternalMatrix multiply(const InternalMatrix& a, const InternalMatrix& b) {
    InternalMatrix out{};
    for (std::size_t r = 0; r < kInternalDim; ++r) {
        for (std::size_t c = 0; c < kInternalDim; ++c) {
            cplx acc{};
            for (std::size_t k = 0; k < kInternalDim; ++k) {
                const cplx x = a[r * kInternalDim + k];
                const cplx y = b[k * kInternalDim + c];
                if (x != cplx{} && y != cplx{}) acc += x * y;
            }
            out[r * kInternalDim + c] = acc;
        }
    }
    return out;
}

PulseOp PulseOp::internal(std::string label, const InternalMatrix& u) {
    check_unitary(label, u, kInternalDim);
    return PulseOp(std::move(label), InternalGate{u});
}

PulseOp PulseOp::dense(std::string label, std::size_t meter_dim, std::vector<cplx> u) {
    if (meter_dim == 0) throw DimensionError("dense pulse needs a meter dimension of at least one");
    const std::size_t dim = kInternalDim * meter_dim;
    if (u.size() != dim * dim) throw DimensionError("dense pulse matrix has the wrong size");
    check_unitary(label, u, dim);
    return PulseOp(std::move(label), DenseGate{meter_dim, std::move(u)});
}

PulseOp PulseOp::conditional_displacement(std::string label, IonBasisIndex target, double shift) {
    if (!std::isfinite(shift)) throw std::invalid_argument("displacement must be finite");
    return PulseOp(std::move(label), ConditionalDisplacement{target, shift});
}

PulseOp PulseOp::conditional_rotation(std::string label, IonBasisIndex target, double theta) {
    if (!std::isfinite(theta)) throw std::invalid_argument("rotation angle must be finite");
    return PulseOp(std::move(label), ConditionalRotation{target, theta});
}

PulseOp PulseOp::inverse() const {
    const std::string inv = label_ + "^-1";
    return std::visit(overloaded{
                          [&](const InternalGate& g) {
                              const auto a = adjoint(g.matrix, kInternalDim);
                              InternalMatrix m{};
                              std::copy(a.begin(), a.end(), m.begin());
                              return PulseOp(inv, InternalGate{m});
                          },
                          [&](const DenseGate& g) {
                              return PulseOp(inv, DenseGate{g.meter_dim, adjoint(g.matrix, kInternalDim * g.meter_dim)});
                          },
                          [&](const ConditionalDisplacement& d) {
                              return PulseOp(inv, ConditionalDisplacement{d.target, -d.shift});
                          },
                          [&](const ConditionalRotation& r) {
                              return PulseOp(inv, ConditionalRotation{r.target, -r.theta});
                          },
                      },
                      action_);
}

std::vector<cplx> PulseOp::matrix(std::size_t meter_dim) const {
    const std::size_t dim = kInternalDim * meter_dim;
    return std::visit(
        overloaded{
            [&](const InternalGate& g) {
                std::vector<cplx> out(dim * dim);
                for (std::size_t r = 0; r < kInternalDim; ++r) {
                    for (std::size_t c = 0; c < kInternalDim; ++c) {
                        for (std::size_t k = 0; k < meter_dim; ++k) {
                            out[(r * meter_dim + k) * dim + c * meter_dim + k] = g.matrix[r * kInternalDim + c];
                        }
                    }
                }
                return out;
            },
            [&](const DenseGate& g) {
                if (g.meter_dim != meter_dim) throw DimensionError("dense pulse has a different meter dimension");
                return g.matrix;
            },
            [&](const ConditionalDisplacement&) -> std::vector<cplx> {
                throw MeterKindError("a displacement has no finite dense matrix");
            },
            [&](const ConditionalRotation& r) {
                if (meter_dim != 2) throw DimensionError("conditional rotation needs a qubit meter");
                std::vector<cplx> out(dim * dim);
                for (std::size_t i = 0; i < dim; ++i) out[i * dim + i] = 1.0;
                const double c = std::cos(0.5 * r.theta);
                const double s = std::sin(0.5 * r.theta);
                const std::size_t b = r.target.index() * 2;
                out[b * dim + b] = c;
                out[b * dim + b + 1] = -s;
                out[(b + 1) * dim + b] = s;
                out[(b + 1) * dim + b + 1] = c;
                return out;
            },
        },
        action_);
}

SystemState apply_unitary(const SystemState& state, const PulseOp& op) {
    return std::visit(overloaded{
                          [&](const InternalGate& g) { return apply_internal(state, g.matrix); },
                          [&](const DenseGate& g) { return apply_dense(state, g); },
                          [&](const ConditionalDisplacement& d) { return apply_displacement(state, d); },
                          [&](const ConditionalRotation& r) { return apply_rotation(state, r); },
                      },
                      op.action());
}

SystemState apply_sequence(SystemState state, std::span<const PulseOp> ops) {
    for (const auto& op : ops) state = apply_unitary(state, op);
    return state;
}

PulseOp beamsplitter(int ion) {
    if (ion != 1 && ion != 2) throw std::invalid_argument("beamsplitter ion must be 1 or 2");
    return PulseOp::internal("beamsplitter" + std::to_string(ion), on_ion(ion, beamsplitter_levels()));
}

PulseOp beamsplitter_pair() {
    const auto b = beamsplitter_levels();
    return PulseOp::internal("beamsplitter_pair", multiply(on_ion(2, b), on_ion(1, b)));
}

PulseOp annihilation_pulse() {
    InternalMatrix u = internal_identity();
    const std::size_t ee = basis::ee.index();
    const std::size_t ff = basis::ff.index();
    u[ee * kInternalDim + ee] = 0.0;
    u[ff * kInternalDim + ff] = 0.0;
    u[ff * kInternalDim + ee] = 1.0;   // |ee> -> |ff>
    u[ee * kInternalDim + ff] = -1.0;  // |ff> -> -|ee>
    return PulseOp::internal("annihilation", u);
}

PulseOp light_shift_meter(double a) {
    return PulseOp::conditional_displacement("light_shift", basis::gg, -a);
}

PulseOp partial_ccnot(double theta) {
    return PulseOp::conditional_rotation("partial_ccnot", basis::gg, theta);
}

Instrument::Instrument(std::vector<Projector> projectors) : projectors_(std::move(projectors)) {
    std::array<int, kInternalDim> seen{};
    for (const auto& p : projectors_) {
        if (p.support.empty()) throw std::invalid_argument("projector '" + p.label + "' is empty");
        for (const auto i : p.support) ++seen[i.index()];
    }
    for (std::size_t i = 0; i < kInternalDim; ++i) {
        if (seen[i] > 1) {
            throw std::invalid_argument("projectors overlap on " + IonBasisIndex::from_index(i).label());
        }
        if (seen[i] == 0) {
            throw std::invalid_argument("projectors do not sum to identity: " +
                                        IonBasisIndex::from_index(i).label() + " is missing");
        }
    }
}

Instrument Instrument::binary(IonBasisIndex target) {
    Projector rest{"not_" + target.label(), {}};
    for (const auto i : all_internal_states()) {
        if (i != target) rest.support.push_back(i);
    }
    return Instrument({Projector{target.label(), {target}}, std::move(rest)});
}

std::vector<Instrument::Outcome> Instrument::measure(const SystemState& state) const {
    const double total = state.norm_squared();
    if (!(total > kPostselectionFloor)) throw InvariantError("measurement of a vanishing state");
    std::vector<Outcome> out;
    for (const auto& p : projectors_) {
        std::vector<cplx> amps(state.size());
        double prob = 0.0;
        for (const auto i : p.support) {
            prob += state.component_norm_squared(i);
            const auto c = state.component(i);
            std::copy(c.begin(), c.end(), amps.begin() + static_cast<std::ptrdiff_t>(i.index() * state.meter_dim()));
        }
        prob /= total;
        Outcome o{p.label, prob, std::nullopt};
        if (prob >= kPostselectionFloor) {
            o.state = compacted(SystemState(state.meter(), std::move(amps))).normalized();
        }
        out.push_back(std::move(o));
    }
    return out;
}

Instrument strong_measurement(std::vector<Projector> projectors) { return Instrument(std::move(projectors)); }

}  // namespace hardy
