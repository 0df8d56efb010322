#pragma once

// The interferometer sequence on two ions and its measured variants:
//
//   (i)    beamsplitter pair         |gg> -> (|g>+|e>)(|g>+|e>)/2
//   (ii)   annihilation pulse        |ee> -> |ff>
//   (iii') meter coupling            light shift on |gg> (Gaussian meter) or
//                                    partial C2-NOT (qubit meter)
//   (iii)  beamsplitter pair
//   (v')   post-selection on |gg>

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hardy/basis.hpp"
#include "hardy/meter.hpp"
#include "hardy/pulses.hpp"
#include "hardy/state.hpp"

namespace hardy {

// Steps (i) and (ii).
std::vector<PulseOp> preparation_sequence();
// Steps (i), (ii), (iii) with no meter coupling.
std::vector<PulseOp> ideal_sequence();

// State after steps (i) and (ii) with no meter.
SystemState intermediate_state();

struct IdealResult {
    SystemState state;
    ProbabilityTable probabilities;
};

IdealResult run_ideal();

// <post| U Pi |pre> / <post| U |pre> for an internal-only pre-selected state.
// Throws PostselectionError when |<post|U|pre>|^2 is below the floor.
cplx weak_value(const SystemState& pre, const PulseOp& evolution, IonBasisIndex post, const Projector& projector);

using WeakValueTable = std::vector<std::pair<std::string, cplx>>;

// Weak values of Pi_gg, Pi_ge, Pi_eg, Pi_ff between the intermediate state
// and post-selection on |gg> after the second beamsplitter pair.
WeakValueTable weak_values_postselected();
// Same for all nine internal projectors, in basis order.
WeakValueTable all_weak_values_postselected();

struct WeakGaussianStages {
    SystemState prepared;    // after (i), (ii), meter in its ground state
    SystemState coupled;     // after the light shift
    SystemState final;       // after the second beamsplitter pair
};

// Throws std::invalid_argument unless sigma > 0 and a >= 0 (finite).
WeakGaussianStages weak_gaussian_stages(double a, double sigma);

struct WeakValueReport {
    double a = 0.0;
    double sigma = 1.0;
    double postselection_probability = 0.0;
    WeakValueTable weak_values;
    double pointer_mean = 0.0;
    double closed_form_mean = 0.0;
    double pointer_variance = 0.0;
    GaussianPointer conditional_pointer = GaussianPointer::ground(1.0);
};

WeakValueReport run_weak_gaussian(double a, double sigma);

// -a (1 - 2 e^{-a^2/8 sigma^2}) / (5 - 4 e^{-a^2/8 sigma^2})
double closed_form_mean(double a, double sigma);
// (5 - 4 e^{-a^2/8 sigma^2}) / 16
double closed_form_postselection_probability(double a, double sigma);

// L2 distance between the normalized post-selected pointer and -phi(x - a).
double weak_limit_check(double a, double sigma);

struct ThirdIonReport {
    double theta = 0.0;
    double postselection_probability = 0.0;
    double excited_population = 0.0;
    double delta_p = 0.0;     // sin(theta)/2
    double deviation = 0.0;   // (1/2 - excited_population) - delta_p
};

// Throws std::invalid_argument unless theta is in (-pi, pi).
ThirdIonReport run_third_ion(double theta);
// Pre-post-selection state of the third-ion variant.
SystemState third_ion_final_state(double theta);

// (c+s-2)^2 / ((c+s-2)^2 + (c-s-2)^2), c = cos(theta/2), s = sin(theta/2)
double third_ion_closed_form(double theta);

struct MeasurementBranch {
    std::string label;
    double probability = 0.0;
    // Final-state table for this branch; zeros when the branch is empty.
    ProbabilityTable final_probabilities{};
};

struct StrongComparison {
    ProbabilityTable undisturbed{};
    ProbabilityTable disturbed{};
    std::vector<MeasurementBranch> branches;
};

// Final tables with and without a projective measurement inserted after
// step (ii). Default instrument: {Pi_gg, 1 - Pi_gg}.
StrongComparison run_strong_comparison();
StrongComparison run_strong_comparison(const Instrument& instrument);

enum class Variant { ideal, weak_gaussian, third_ion, strong_comparison };

const char* to_string(Variant v);
Variant parse_variant(const std::string& name);

struct RunConfig {
    double a = 0.05;
    double sigma = 1.0;
    double theta = 0.1;
    std::uint64_t shots = 100000;
    std::uint64_t seed = 1;
    Variant variant = Variant::weak_gaussian;

    // Throws std::invalid_argument on sigma <= 0, a < 0, non-finite values
    // or shots == 0.
    void validate() const;
};

struct ScanRow {
    double a_over_sigma = 0.0;
    double mean_over_a = 0.0;
    double closed_form_over_a = 0.0;
    double probability = 0.0;
};

// `steps` evenly spaced values of a/sigma on [from, to]. Throws
// std::invalid_argument unless 0 < from < to and steps >= 2.
std::vector<ScanRow> scan_pointer_shift(double from, double to, std::size_t steps, double sigma = 1.0);

}  // namespace hardy
