#include "hardy/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "hardy/errors.hpp"

namespace hardy {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double grid_weight(const GridMeter& g, std::size_t k) {
    const double h = (g.xmax - g.xmin) / static_cast<double>(g.n - 1);
    return (k == 0 || k + 1 == g.n) ? 0.5 * h : h;
}

// <u|v> in meter space for states sharing one meter space.
cplx meter_inner(const MeterSpace& m, std::span<const cplx> u, std::span<const cplx> v) {
    return std::visit(
        overloaded{
            [&](const GaussianMeter& gm) {
                cplx acc{0.0, 0.0};
                for (std::size_t i = 0; i < u.size(); ++i) {
                    if (u[i] == cplx{}) continue;
                    for (std::size_t j = 0; j < v.size(); ++j) {
                        if (v[j] == cplx{}) continue;
                        acc += std::conj(u[i]) * v[j] * gaussian_kernel(gm.centers[i], gm.centers[j], gm.sigma);
                    }
                }
                return acc;
            },
            [&](const GridMeter& gm) {
                cplx acc{0.0, 0.0};
                for (std::size_t k = 0; k < u.size(); ++k) acc += grid_weight(gm, k) * std::conj(u[k]) * v[k];
                return acc;
            },
            [&](const auto&) {
                cplx acc{0.0, 0.0};
                for (std::size_t k = 0; k < u.size(); ++k) acc += std::conj(u[k]) * v[k];
                return acc;
            },
        },
        m);
}

}  // namespace

const char* to_string(MeterKind kind) {
    switch (kind) {
        case MeterKind::none:
            return "none";
        case MeterKind::gaussian:
            return "gaussian";
        case MeterKind::grid:
            return "grid";
        case MeterKind::qubit:
            return "qubit";
    }
    return "unknown";
}

MeterKind meter_kind(const MeterSpace& m) {
    return std::visit(overloaded{
                          [](const NoMeter&) { return MeterKind::none; },
                          [](const GaussianMeter&) { return MeterKind::gaussian; },
                          [](const GridMeter&) { return MeterKind::grid; },
                          [](const QubitMeter&) { return MeterKind::qubit; },
                      },
                      m);
}

std::size_t meter_dimension(const MeterSpace& m) {
    return std::visit(overloaded{
                          [](const NoMeter&) -> std::size_t { return 1; },
                          [](const GaussianMeter& g) -> std::size_t { return g.centers.size(); },
                          [](const GridMeter& g) -> std::size_t { return g.n; },
                          [](const QubitMeter&) -> std::size_t { return 2; },
                      },
                      m);
}

SystemState::SystemState(MeterSpace meter, std::vector<cplx> amplitudes)
    : meter_(std::move(meter)), meter_dim_(meter_dimension(meter_)), amps_(std::move(amplitudes)) {
    if (meter_dim_ == 0) throw DimensionError("meter space has dimension zero");
    if (const auto* g = std::get_if<GaussianMeter>(&meter_)) {
        if (!(g->sigma > 0.0)) throw std::invalid_argument("gaussian meter sigma must be positive");
    }
    if (const auto* g = std::get_if<GridMeter>(&meter_)) {
        if (g->n < 2 || !(g->xmax > g->xmin)) throw std::invalid_argument("invalid grid meter");
    }
    if (amps_.size() != kInternalDim * meter_dim_) {
        throw DimensionError("state has " + std::to_string(amps_.size()) + " amplitudes, expected " +
                             std::to_string(kInternalDim * meter_dim_));
    }
    for (const auto& a : amps_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw std::invalid_argument("state amplitudes must be finite");
        }
    }
}

SystemState SystemState::basis_state(IonBasisIndex i) {
    std::vector<cplx> amps(kInternalDim);
    amps[i.index()] = 1.0;
    return SystemState(NoMeter{}, std::move(amps));
}

SystemState SystemState::from_internal(const std::array<cplx, kInternalDim>& amplitudes) {
    return SystemState(NoMeter{}, std::vector<cplx>(amplitudes.begin(), amplitudes.end()));
}

SystemState SystemState::product(IonBasisIndex i, const GaussianPointer& meter) {
    GaussianMeter space{meter.sigma(), {}};
    for (const auto& b : meter.branches()) space.centers.push_back(b.center);
    const std::size_t m = space.centers.size();
    std::vector<cplx> amps(kInternalDim * m);
    for (std::size_t k = 0; k < m; ++k) amps[i.index() * m + k] = meter.branches()[k].coeff;
    return SystemState(std::move(space), std::move(amps));
}

SystemState SystemState::product(IonBasisIndex i, const GridPointer& meter) {
    const std::size_t m = meter.size();
    std::vector<cplx> amps(kInternalDim * m);
    std::copy(meter.values().begin(), meter.values().end(), amps.begin() + static_cast<std::ptrdiff_t>(i.index() * m));
    return SystemState(GridMeter{meter.xmin(), meter.xmax(), m}, std::move(amps));
}

SystemState SystemState::product(IonBasisIndex i, const QubitPointer& meter) {
    std::vector<cplx> amps(kInternalDim * 2);
    amps[i.index() * 2] = meter.amp_g();
    amps[i.index() * 2 + 1] = meter.amp_e();
    return SystemState(QubitMeter{}, std::move(amps));
}

cplx SystemState::amplitude(IonBasisIndex i, std::size_t k) const {
    if (k >= meter_dim_) throw std::out_of_range("meter coordinate out of range");
    return amps_[i.index() * meter_dim_ + k];
}

std::span<const cplx> SystemState::component(IonBasisIndex i) const {
    return std::span<const cplx>(amps_).subspan(i.index() * meter_dim_, meter_dim_);
}

double SystemState::component_norm_squared(IonBasisIndex i) const {
    const auto c = component(i);
    return meter_inner(meter_, c, c).real();
}

double SystemState::norm_squared() const {
    double acc = 0.0;
    for (const auto i : all_internal_states()) acc += component_norm_squared(i);
    return acc;
}

SystemState SystemState::normalized() const {
    const double n2 = norm_squared();
    if (!(n2 > kPostselectionFloor)) throw InvariantError("cannot normalize a vanishing state");
    auto out = amps_;
    const double s = 1.0 / std::sqrt(n2);
    for (auto& a : out) a *= s;
    return SystemState(meter_, std::move(out));
}

GaussianPointer SystemState::gaussian_component(IonBasisIndex i) const {
    const auto* g = std::get_if<GaussianMeter>(&meter_);
    if (g == nullptr) throw MeterKindError(std::string("expected gaussian meter, state has ") + to_string(kind()));
    const auto c = component(i);
    std::vector<GaussianBranch> branches;
    branches.reserve(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) branches.push_back({c[k], g->centers[k]});
    return GaussianPointer(g->sigma, std::move(branches));
}

GridPointer SystemState::grid_component(IonBasisIndex i) const {
    const auto* g = std::get_if<GridMeter>(&meter_);
    if (g == nullptr) throw MeterKindError(std::string("expected grid meter, state has ") + to_string(kind()));
    const auto c = component(i);
    return GridPointer(g->xmin, g->xmax, std::vector<cplx>(c.begin(), c.end()));
}

std::array<cplx, 2> SystemState::qubit_component(IonBasisIndex i) const {
    if (kind() != MeterKind::qubit) {
        throw MeterKindError(std::string("expected qubit meter, state has ") + to_string(kind()));
    }
    const auto c = component(i);
    return {c[0], c[1]};
}

SystemState init_ground() { return SystemState::basis_state(basis::gg); }
SystemState init_ground(const GaussianPointer& meter) { return SystemState::product(basis::gg, meter); }
SystemState init_ground(const GridPointer& meter) { return SystemState::product(basis::gg, meter); }
SystemState init_ground(const QubitPointer& meter) { return SystemState::product(basis::gg, meter); }

cplx inner_product(const SystemState& a, const SystemState& b) {
    if (a.kind() != b.kind()) {
        throw MeterKindError(std::string("inner product between ") + to_string(a.kind()) + " and " +
                             to_string(b.kind()) + " meters");
    }
    cplx acc{0.0, 0.0};
    if (a.kind() == MeterKind::gaussian) {
        for (const auto i : all_internal_states()) acc += gaussian_overlap(a.gaussian_component(i), b.gaussian_component(i));
        return acc;
    }
    if (!(a.meter() == b.meter())) throw MeterKindError("inner product between states on different meter spaces");
    for (const auto i : all_internal_states()) acc += meter_inner(a.meter(), a.component(i), b.component(i));
    return acc;
}

bool equal_up_to_phase(const SystemState& a, const SystemState& b, double tol) {
    const double na = a.norm_squared();
    const double nb = b.norm_squared();
    if (std::abs(na - 1.0) > tol || std::abs(nb - 1.0) > tol) return false;
    return std::abs(std::abs(inner_product(a, b)) - 1.0) <= tol;
}

SystemState compacted(const SystemState& s) {
    const auto* g = std::get_if<GaussianMeter>(&s.meter());
    if (g == nullptr) return s;

    const std::size_t m = g->centers.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return g->centers[x] < g->centers[y]; });

    // Group coincident centers.
    std::vector<double> centers;
    std::vector<std::vector<std::size_t>> groups;
    for (const auto k : order) {
        if (!centers.empty() && std::abs(centers.back() - g->centers[k]) <= 1e-12 * g->sigma) {
            groups.back().push_back(k);
        } else {
            centers.push_back(g->centers[k]);
            groups.push_back({k});
        }
    }

    std::vector<double> kept_centers;
    std::vector<std::array<cplx, kInternalDim>> kept;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        std::array<cplx, kInternalDim> col{};
        bool used = false;
        for (std::size_t i = 0; i < kInternalDim; ++i) {
            for (const auto k : groups[gi]) col[i] += s.amplitudes()[i * m + k];
            used = used || col[i] != cplx{};
        }
        if (used) {
            kept_centers.push_back(centers[gi]);
            kept.push_back(col);
        }
    }
    if (kept.empty()) {
        // Keep one branch so the state stays well formed.
        kept_centers.push_back(centers.empty() ? 0.0 : centers.front());
        kept.push_back({});
    }
    const std::size_t mm = kept.size();
    std::vector<cplx> amps(kInternalDim * mm);
    for (std::size_t k = 0; k < mm; ++k) {
        for (std::size_t i = 0; i < kInternalDim; ++i) amps[i * mm + k] = kept[k][i];
    }
    return SystemState(GaussianMeter{g->sigma, std::move(kept_centers)}, std::move(amps));
}

Projection project_internal(const SystemState& s, IonBasisIndex target) {
    const double total = s.norm_squared();
    if (!(total > kPostselectionFloor)) throw InvariantError("projection of a vanishing state");
    const double p = s.component_norm_squared(target) / total;
    if (!(p >= kPostselectionFloor)) {
        throw PostselectionError("post-selection impossible: outcome " + target.label() + " has probability " +
                                 std::to_string(p));
    }
    std::vector<cplx> amps(s.size());
    const auto c = s.component(target);
    std::copy(c.begin(), c.end(), amps.begin() + static_cast<std::ptrdiff_t>(target.index() * s.meter_dim()));
    SystemState conditional = compacted(SystemState(s.meter(), std::move(amps))).normalized();
    return {std::min(p, 1.0), std::move(conditional)};
}

ProbabilityTable probability_table(const SystemState& s) {
    const double total = s.norm_squared();
    if (!(total > kPostselectionFloor)) throw InvariantError("probability table of a vanishing state");
    ProbabilityTable out{};
    for (const auto i : all_internal_states()) out[i.index()] = s.component_norm_squared(i) / total;
    return out;
}

}  // namespace hardy
