#include "hardy/protocol.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hardy/errors.hpp"

namespace hardy {

namespace {

void require_weak_params(double a, double sigma) {
    if (!std::isfinite(sigma) || !(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    if (!std::isfinite(a) || a < 0.0) throw std::invalid_argument("a must be finite and non-negative");
}

// e^{-a^2 / 8 sigma^2} in extended precision; shared by the closed forms.
long double overlap_kernel(double a, double sigma) {
    const long double r = static_cast<long double>(a) / static_cast<long double>(sigma);
    return std::exp(-(r * r) / 8.0L);
}

}  // namespace

std::vector<PulseOp> preparation_sequence() { return {beamsplitter_pair(), annihilation_pulse()}; }

std::vector<PulseOp> ideal_sequence() { return {beamsplitter_pair(), annihilation_pulse(), beamsplitter_pair()}; }

SystemState intermediate_state() { return apply_sequence(init_ground(), preparation_sequence()); }

IdealResult run_ideal() {
    SystemState s = apply_sequence(init_ground(), ideal_sequence());
    ProbabilityTable p = probability_table(s);
    return {std::move(s), p};
}

cplx weak_value(const SystemState& pre, const PulseOp& evolution, IonBasisIndex post, const Projector& projector) {
    if (pre.kind() != MeterKind::none) throw MeterKindError("weak values are computed on the internal space only");
    const cplx denominator = apply_unitary(pre, evolution).amplitude(post);
    if (!(std::norm(denominator) >= kPostselectionFloor)) {
        throw PostselectionError("post-selection amplitude on " + post.label() + " vanishes");
    }
    std::array<cplx, kInternalDim> projected{};
    for (const auto i : projector.support) projected[i.index()] = pre.amplitude(i);
    const cplx numerator = apply_unitary(SystemState::from_internal(projected), evolution).amplitude(post);
    return numerator / denominator;
}

WeakValueTable weak_values_postselected() {
    const SystemState pre = intermediate_state();
    const PulseOp u = beamsplitter_pair();
    WeakValueTable out;
    for (const auto i : {basis::gg, basis::ge, basis::eg, basis::ff}) {
        out.emplace_back(i.label(), weak_value(pre, u, basis::gg, Projector{i.label(), {i}}));
    }
    return out;
}

WeakValueTable all_weak_values_postselected() {
    const SystemState pre = intermediate_state();
    const PulseOp u = beamsplitter_pair();
    WeakValueTable out;
    for (const auto i : all_internal_states()) {
        out.emplace_back(i.label(), weak_value(pre, u, basis::gg, Projector{i.label(), {i}}));
    }
    return out;
}

WeakGaussianStages weak_gaussian_stages(double a, double sigma) {
    require_weak_params(a, sigma);
    SystemState prepared = apply_sequence(init_ground(GaussianPointer::ground(sigma)), preparation_sequence());
    SystemState coupled = apply_unitary(prepared, light_shift_meter(a));
    SystemState final = apply_unitary(coupled, beamsplitter_pair());
    return {std::move(prepared), std::move(coupled), std::move(final)};
}

WeakValueReport run_weak_gaussian(double a, double sigma) {
    const auto stages = weak_gaussian_stages(a, sigma);
    const Projection proj = project_internal(stages.final, basis::gg);
    const GaussianPointer pointer = proj.conditional.gaussian_component(basis::gg);

    WeakValueReport r;
    r.a = a;
    r.sigma = sigma;
    r.postselection_probability = proj.probability;
    r.weak_values = weak_values_postselected();
    r.pointer_mean = gaussian_mean_x(pointer);
    r.closed_form_mean = closed_form_mean(a, sigma);
    r.pointer_variance = gaussian_variance(pointer);
    r.conditional_pointer = pointer;
    return r;
}

double closed_form_mean(double a, double sigma) {
    require_weak_params(a, sigma);
    const long double g = overlap_kernel(a, sigma);
    return static_cast<double>(-static_cast<long double>(a) * (1.0L - 2.0L * g) / (5.0L - 4.0L * g));
}

double closed_form_postselection_probability(double a, double sigma) {
    require_weak_params(a, sigma);
    return static_cast<double>((5.0L - 4.0L * overlap_kernel(a, sigma)) / 16.0L);
}

double weak_limit_check(double a, double sigma) {
    const WeakValueReport r = run_weak_gaussian(a, sigma);
    const GaussianPointer reference(sigma, {{cplx{-1.0, 0.0}, a}});
    return l2_distance(r.conditional_pointer, reference);
}

SystemState third_ion_final_state(double theta) {
    if (!std::isfinite(theta) || !(std::abs(theta) < std::numbers::pi)) {
        throw std::invalid_argument("theta must lie in (-pi, pi)");
    }
    SystemState s = apply_sequence(init_ground(QubitPointer::plus()), preparation_sequence());
    s = apply_unitary(s, partial_ccnot(theta));
    return apply_unitary(s, beamsplitter_pair());
}

ThirdIonReport run_third_ion(double theta) {
    const SystemState final = third_ion_final_state(theta);
    const Projection proj = project_internal(final, basis::gg);
    const auto m = proj.conditional.qubit_component(basis::gg);
    const QubitPointer meter = QubitPointer::from_unnormalized(m[0], m[1]);

    ThirdIonReport r;
    r.theta = theta;
    r.postselection_probability = proj.probability;
    r.excited_population = meter.excited_population();
    r.delta_p = 0.5 * std::sin(theta);
    r.deviation = (0.5 - r.excited_population) - r.delta_p;
    return r;
}

double third_ion_closed_form(double theta) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    const double up = (c + s - 2.0) * (c + s - 2.0);
    const double down = (c - s - 2.0) * (c - s - 2.0);
    return up / (up + down);
}

StrongComparison run_strong_comparison() { return run_strong_comparison(Instrument::binary(basis::gg)); }

StrongComparison run_strong_comparison(const Instrument& instrument) {
    const SystemState mid = intermediate_state();
    const PulseOp bs = beamsplitter_pair();

    StrongComparison out;
    out.undisturbed = probability_table(apply_unitary(mid, bs));
    for (auto& outcome : instrument.measure(mid)) {
        MeasurementBranch b{outcome.label, outcome.probability, {}};
        if (outcome.state) {
            b.final_probabilities = probability_table(apply_unitary(*outcome.state, bs));
            for (std::size_t i = 0; i < kInternalDim; ++i) {
                out.disturbed[i] += outcome.probability * b.final_probabilities[i];
            }
        }
        out.branches.push_back(std::move(b));
    }
    return out;
}

const char* to_string(Variant v) {
    switch (v) {
        case Variant::ideal:
            return "ideal";
        case Variant::weak_gaussian:
            return "weak_gaussian";
        case Variant::third_ion:
            return "third_ion";
        case Variant::strong_comparison:
            return "strong_comparison";
    }
    return "unknown";
}

Variant parse_variant(const std::string& name) {
    if (name == "ideal") return Variant::ideal;
    if (name == "weak_gaussian" || name == "weak") return Variant::weak_gaussian;
    if (name == "third_ion" || name == "third-ion") return Variant::third_ion;
    if (name == "strong_comparison" || name == "strong") return Variant::strong_comparison;
    throw std::invalid_argument("unknown variant '" + name + "'");
}

void RunConfig::validate() const {
    if (!std::isfinite(sigma) || !(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    if (!std::isfinite(a) || a < 0.0) throw std::invalid_argument("a must be finite and non-negative");
    if (!std::isfinite(theta)) throw std::invalid_argument("theta must be finite");
    if (shots == 0) throw std::invalid_argument("shots must be at least 1");
}

std::vector<ScanRow> scan_pointer_shift(double from, double to, std::size_t steps, double sigma) {
    if (!std::isfinite(from) || !std::isfinite(to) || !(from > 0.0) || !(to > from)) {
        throw std::invalid_argument("scan range must satisfy 0 < from < to");
    }
    if (steps < 2) throw std::invalid_argument("scan needs at least two steps");
    std::vector<ScanRow> rows;
    rows.reserve(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        const double r = from + (to - from) * static_cast<double>(k) / static_cast<double>(steps - 1);
        const double a = r * sigma;
        const WeakValueReport rep = run_weak_gaussian(a, sigma);
        rows.push_back({r, rep.pointer_mean / a, rep.closed_form_mean / a, rep.postselection_probability});
    }
    return rows;
}

}  // namespace hardy
