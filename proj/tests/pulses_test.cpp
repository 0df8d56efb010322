#include "hardy/pulses.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hardy/errors.hpp"
#include "test_support.hpp"

using namespace hardy;
namespace ht = hardy::testing;

namespace {

SystemState eq1_state() {
    std::array<cplx, kInternalDim> a{};
    for (const auto i : {basis::gg, basis::ge, basis::eg, basis::ee}) a[i.index()] = 0.5;
    return SystemState::from_internal(a);
}

SystemState eq2_state() {
    std::array<cplx, kInternalDim> a{};
    for (const auto i : {basis::gg, basis::ge, basis::eg, basis::ff}) a[i.index()] = 0.5;
    return SystemState::from_internal(a);
}

void expect_amplitudes(const SystemState& s, const std::array<cplx, kInternalDim>& expected, double tol = 1e-12) {
    for (const auto i : all_internal_states()) {
        EXPECT_NEAR(std::abs(s.amplitude(i) - expected[i.index()]), 0.0, tol) << i.label();
    }
}

std::vector<PulseOp> all_matrix_pulses() {
    return {beamsplitter(1), beamsplitter(2), beamsplitter_pair(), annihilation_pulse(),
            partial_ccnot(0.0), partial_ccnot(0.01), partial_ccnot(1.3), partial_ccnot(-2.9)};
}

// Random unitary on the eight internal states other than |gg>.
PulseOp random_unitary_off_gg(std::mt19937_64& rng) {
    std::vector<std::array<cplx, 8>> cols(8);
    for (auto& c : cols) {
        for (auto& x : c) x = ht::random_complex(rng);
    }
    for (std::size_t j = 0; j < 8; ++j) {
        for (std::size_t k = 0; k < j; ++k) {
            cplx d{};
            for (std::size_t r = 0; r < 8; ++r) d += std::conj(cols[k][r]) * cols[j][r];
            for (std::size_t r = 0; r < 8; ++r) cols[j][r] -= d * cols[k][r];
        }
        double n = 0.0;
        for (auto& x : cols[j]) n += std::norm(x);
        for (auto& x : cols[j]) x /= std::sqrt(n);
    }
    InternalMatrix u{};
    u[0] = 1.0;
    for (std::size_t r = 0; r < 8; ++r) {
        for (std::size_t c = 0; c < 8; ++c) u[(r + 1) * kInternalDim + (c + 1)] = cols[c][r];
    }
    return PulseOp::internal("random", u);
}

}  // namespace

TEST(Beamsplitter, BothIonsOnGroundGiveProductSuperposition) {
    const SystemState s = apply_unitary(apply_unitary(init_ground(), beamsplitter(1)), beamsplitter(2));
    expect_amplitudes(s, {0.5, 0.5, 0.0, 0.5, 0.5, 0.0, 0.0, 0.0, 0.0});
    expect_amplitudes(apply_unitary(init_ground(), beamsplitter_pair()), {0.5, 0.5, 0.0, 0.5, 0.5, 0.0, 0.0, 0.0, 0.0});
}

TEST(Beamsplitter, LeavesFUntouched) {
    for (const auto i : {basis::ff, basis::fg, basis::fe}) {
        const SystemState s = apply_unitary(SystemState::basis_state(i), beamsplitter(1));
        EXPECT_NEAR(std::abs(s.amplitude(i) - 1.0), 0.0, 1e-15) << i.label();
    }
    const SystemState s = apply_unitary(SystemState::basis_state(basis::gf), beamsplitter(2));
    EXPECT_NEAR(std::abs(s.amplitude(basis::gf) - 1.0), 0.0, 1e-15);
}

TEST(Beamsplitter, AppliedTwiceMapsGToE) {
    const PulseOp b = beamsplitter(1);
    const SystemState s = apply_unitary(apply_unitary(init_ground(), b), b);
    EXPECT_NEAR(std::abs(s.amplitude(basis::eg)), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(s.amplitude(basis::gg)), 0.0, 1e-15);
}

TEST(Beamsplitter, ActionOnE) {
    const SystemState s = apply_unitary(SystemState::basis_state(basis::eg), beamsplitter(1));
    EXPECT_NEAR(s.amplitude(basis::eg).real(), 1.0 / std::numbers::sqrt2, 1e-15);
    EXPECT_NEAR(s.amplitude(basis::gg).real(), -1.0 / std::numbers::sqrt2, 1e-15);
}

TEST(Beamsplitter, RejectsUnknownIon) {
    EXPECT_THROW(beamsplitter(0), std::invalid_argument);
    EXPECT_THROW(beamsplitter(3), std::invalid_argument);
}

TEST(AnnihilationPulse, RemovesEeComponent) {
    expect_amplitudes(apply_unitary(eq1_state(), annihilation_pulse()), {0.5, 0.5, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.5});
}

TEST(AnnihilationPulse, LeavesGgAlone) {
    expect_amplitudes(apply_unitary(init_ground(), annihilation_pulse()), {1.0, 0, 0, 0, 0, 0, 0, 0, 0});
}

TEST(AnnihilationPulse, TwiceFlipsSignOfEe) {
    const PulseOp p = annihilation_pulse();
    const SystemState s = apply_unitary(apply_unitary(SystemState::basis_state(basis::ee), p), p);
    EXPECT_NEAR(std::abs(s.amplitude(basis::ee) + 1.0), 0.0, 1e-15);
}

TEST(PulseSequence, ReproducesFinalInterferometerState) {
    SystemState s = init_ground();
    for (const auto& p : {beamsplitter(1), beamsplitter(2), annihilation_pulse(), beamsplitter(1), beamsplitter(2)}) {
        s = apply_unitary(s, p);
    }
    // (1/4)(2|ff> + 3|ee> + |ge> + |eg> - |gg>)
    expect_amplitudes(s, {-0.25, 0.25, 0.0, 0.25, 0.75, 0.0, 0.0, 0.0, 0.5});
}

TEST(LightShift, ProducesDisplacedGgBranch) {
    const double sigma = 1.0;
    const double a = 0.3;
    const SystemState in = apply_sequence(init_ground(GaussianPointer::ground(sigma)),
                                          std::vector<PulseOp>{beamsplitter_pair(), annihilation_pulse()});
    const SystemState out = apply_unitary(in, light_shift_meter(a));
    // 1/2 (|ge> + |eg> + |ff>) phi(x) + 1/2 |gg> phi(x + a)
    const auto gg = out.gaussian_component(basis::gg).merged();
    ASSERT_EQ(gg.size(), 1u);
    EXPECT_DOUBLE_EQ(gg.branches()[0].center, -a);
    EXPECT_NEAR(std::abs(gg.branches()[0].coeff - 0.5), 0.0, 1e-15);
    for (const auto i : {basis::ge, basis::eg, basis::ff}) {
        const auto c = out.gaussian_component(i).merged();
        ASSERT_EQ(c.size(), 1u) << i.label();
        EXPECT_EQ(c.branches()[0].center, 0.0);
        EXPECT_NEAR(std::abs(c.branches()[0].coeff - 0.5), 0.0, 1e-15);
    }
    EXPECT_NEAR(out.norm_squared(), 1.0, 1e-12);
}

TEST(LightShift, ZeroIsIdentityAndShiftsInvert) {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 20; ++t) {
        const SystemState s = ht::random_gaussian_state(rng);
        EXPECT_TRUE(equal_up_to_phase(apply_unitary(s, light_shift_meter(0.0)), s));
        const SystemState back = apply_unitary(apply_unitary(s, light_shift_meter(0.37)), light_shift_meter(-0.37));
        EXPECT_NEAR(std::abs(inner_product(back, s) - 1.0), 0.0, 1e-12);
        EXPECT_TRUE(equal_up_to_phase(apply_unitary(apply_unitary(s, light_shift_meter(0.2)), light_shift_meter(0.2).inverse()), s));
    }
}

TEST(LightShift, RequiresGaussianMeter) {
    EXPECT_THROW(apply_unitary(init_ground(), light_shift_meter(0.1)), MeterKindError);
    EXPECT_THROW(apply_unitary(init_ground(QubitPointer::plus()), light_shift_meter(0.1)), MeterKindError);
    EXPECT_THROW(light_shift_meter(0.1).matrix(1), MeterKindError);
}

TEST(PartialCcnot, ZeroIsIdentity) {
    std::mt19937_64 rng(2);
    const SystemState s = ht::random_qubit_state(rng);
    const SystemState r = apply_unitary(s, partial_ccnot(0.0));
    for (std::size_t k = 0; k < s.size(); ++k) EXPECT_EQ(r.amplitudes()[k], s.amplitudes()[k]);
}

TEST(PartialCcnot, RaisesExcitedPopulationOnGg) {
    const double theta = 0.05;
    const SystemState s = apply_unitary(init_ground(QubitPointer::plus()), partial_ccnot(theta));
    const auto m = s.qubit_component(basis::gg);
    EXPECT_NEAR(std::norm(m[1]) - 0.5, std::sin(theta) / 2.0, 1e-15);
}

TEST(PartialCcnot, IgnoresOtherInternalStates) {
    const SystemState s0 = SystemState::product(basis::ge, QubitPointer::plus());
    const SystemState s = apply_unitary(s0, partial_ccnot(0.8));
    for (std::size_t k = 0; k < s.size(); ++k) EXPECT_EQ(s.amplitudes()[k], s0.amplitudes()[k]);
}

TEST(PartialCcnot, RequiresQubitMeter) {
    EXPECT_THROW(apply_unitary(init_ground(), partial_ccnot(0.1)), MeterKindError);
    EXPECT_THROW(apply_unitary(init_ground(GaussianPointer::ground(1.0)), partial_ccnot(0.1)), MeterKindError);
}

TEST(StrongMeasurement, GgOutcomeOnIntermediateState) {
    const auto outcomes = Instrument::binary(basis::gg).measure(eq2_state());
    ASSERT_EQ(outcomes.size(), 2u);
    EXPECT_EQ(outcomes[0].label, "gg");
    EXPECT_NEAR(outcomes[0].probability, 0.25, 1e-15);
    EXPECT_NEAR(outcomes[0].probability + outcomes[1].probability, 1.0, 1e-15);
    ASSERT_TRUE(outcomes[0].state.has_value());
    EXPECT_NEAR(std::abs(outcomes[0].state->amplitude(basis::gg)), 1.0, 1e-15);
}

TEST(StrongMeasurement, DisturbsTheSecondBeamsplitterResult) {
    const auto outcomes = Instrument::binary(basis::gg).measure(eq2_state());
    const std::array<cplx, kInternalDim> eq3{-0.25, 0.25, 0.0, 0.25, 0.75, 0.0, 0.0, 0.0, 0.5};
    const SystemState ideal = SystemState::from_internal(eq3);
    for (const auto& o : outcomes) {
        ASSERT_TRUE(o.state);
        const SystemState after = apply_unitary(*o.state, beamsplitter_pair());
        EXPECT_LT(std::abs(inner_product(after, ideal)), 1.0 - 1e-3) << o.label;
    }
}

TEST(StrongMeasurement, ProbabilitiesSumToOneForAnyCompleteSet) {
    std::mt19937_64 rng(4);
    const Instrument full({{"g*", {basis::gg, basis::ge, basis::gf}},
                           {"e*", {basis::eg, basis::ee, basis::ef}},
                           {"f*", {basis::fg, basis::fe, basis::ff}}});
    for (int t = 0; t < 20; ++t) {
        double total = 0.0;
        for (const auto& o : full.measure(ht::random_gaussian_state(rng))) total += o.probability;
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(StrongMeasurement, RejectsIncompleteOrOverlappingSets) {
    EXPECT_THROW(Instrument({{"gg", {basis::gg}}}), std::invalid_argument);
    auto bin = Instrument::binary(basis::gg);
    std::vector<Projector> overlapping(bin.projectors().begin(), bin.projectors().end());
    overlapping.push_back({"again", {basis::gg}});
    EXPECT_THROW(Instrument{overlapping}, std::invalid_argument);
    EXPECT_THROW(strong_measurement({{"empty", {}}}), std::invalid_argument);
}

TEST(StrongMeasurement, EmptyOutcomeHasNoState) {
    const auto outcomes = Instrument::binary(basis::ee).measure(eq2_state());
    EXPECT_EQ(outcomes[0].probability, 0.0);
    EXPECT_FALSE(outcomes[0].state.has_value());
}

TEST(PulseOp, ConstructionRejectsNonUnitaryMatrix) {
    InternalMatrix u = internal_identity();
    u[0] = 1.0 + 1e-9;
    EXPECT_THROW(PulseOp::internal("bad", u), InvariantError);
    EXPECT_THROW(PulseOp::dense("bad", 1, std::vector<cplx>(81)), InvariantError);
    EXPECT_THROW(PulseOp::dense("bad", 1, std::vector<cplx>(80)), DimensionError);
}

TEST(PulseOp, DenseGateChecksStateDimension) {
    const PulseOp d = PulseOp::dense("qubit-identity", 2, beamsplitter(1).matrix(2));
    EXPECT_THROW(apply_unitary(init_ground(), d), DimensionError);
    EXPECT_THROW(apply_unitary(init_ground(GaussianPointer::ground(1.0)), d), MeterKindError);
    const SystemState s = init_ground(QubitPointer::plus());
    const SystemState a = apply_unitary(s, d);
    const SystemState b = apply_unitary(s, beamsplitter(1));
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(std::abs(a.amplitudes()[k] - b.amplitudes()[k]), 0.0, 1e-15);
}

TEST(PulseOp, InverseUndoesPulse) {
    std::mt19937_64 rng(17);
    for (const auto& p : all_matrix_pulses()) {
        const SystemState s = ht::random_qubit_state(rng);
        const SystemState back = apply_unitary(apply_unitary(s, p), p.inverse());
        for (std::size_t k = 0; k < s.size(); ++k) {
            EXPECT_NEAR(std::abs(back.amplitudes()[k] - s.amplitudes()[k]), 0.0, 1e-12) << p.label();
        }
    }
}

// Properties.

TEST(PulseProperties, AllMatrixPulsesAreUnitary) {
    for (const auto& p : all_matrix_pulses()) {
        EXPECT_LT(unitarity_deviation(p.matrix(2), kInternalDim * 2), 1e-12) << p.label();
        if (!std::holds_alternative<ConditionalRotation>(p.action())) {
            EXPECT_LT(unitarity_deviation(p.matrix(1), kInternalDim), 1e-12) << p.label();
        }
    }
}

TEST(PulseProperties, NormPreservedOnRandomStates) {
    std::mt19937_64 rng(77);
    for (int t = 0; t < 30; ++t) {
        const SystemState q = ht::random_qubit_state(rng);
        for (const auto& p : all_matrix_pulses()) EXPECT_NEAR(apply_unitary(q, p).norm_squared(), 1.0, 1e-12);
        const SystemState g = ht::random_gaussian_state(rng);
        for (const auto& p : {beamsplitter(1), beamsplitter(2), annihilation_pulse(), light_shift_meter(0.4)}) {
            EXPECT_NEAR(apply_unitary(g, p).norm_squared(), 1.0, 1e-12) << p.label();
        }
    }
}

TEST(PulseProperties, LightShiftPreservesInnerProducts) {
    std::mt19937_64 rng(78);
    for (int t = 0; t < 30; ++t) {
        const SystemState a = ht::random_gaussian_state(rng);
        const SystemState b = ht::random_gaussian_state(rng);
        const PulseOp shift = light_shift_meter(0.9);
        EXPECT_NEAR(std::abs(inner_product(apply_unitary(a, shift), apply_unitary(b, shift)) - inner_product(a, b)), 0.0,
                    1e-12);
    }
}

TEST(PulseProperties, Linearity) {
    std::mt19937_64 rng(79);
    for (int t = 0; t < 20; ++t) {
        const SystemState x = ht::random_qubit_state(rng);
        const SystemState y = ht::random_qubit_state(rng);
        const cplx alpha = ht::random_complex(rng);
        const cplx beta = ht::random_complex(rng);
        std::vector<cplx> mix(x.size());
        for (std::size_t k = 0; k < mix.size(); ++k) mix[k] = alpha * x.amplitudes()[k] + beta * y.amplitudes()[k];
        for (const auto& p : all_matrix_pulses()) {
            const SystemState lhs = apply_unitary(SystemState(QubitMeter{}, mix), p);
            const SystemState ux = apply_unitary(x, p);
            const SystemState uy = apply_unitary(y, p);
            for (std::size_t k = 0; k < mix.size(); ++k) {
                EXPECT_NEAR(std::abs(lhs.amplitudes()[k] - (alpha * ux.amplitudes()[k] + beta * uy.amplitudes()[k])), 0.0,
                            1e-12);
            }
        }
    }
}

TEST(PulseProperties, SingleIonBeamsplittersCommute) {
    std::mt19937_64 rng(80);
    for (int t = 0; t < 20; ++t) {
        const SystemState s = ht::random_internal_state(rng);
        const SystemState a = apply_unitary(apply_unitary(s, beamsplitter(1)), beamsplitter(2));
        const SystemState b = apply_unitary(apply_unitary(s, beamsplitter(2)), beamsplitter(1));
        for (std::size_t k = 0; k < s.size(); ++k) EXPECT_NEAR(std::abs(a.amplitudes()[k] - b.amplitudes()[k]), 0.0, 1e-12);
    }
}

TEST(PulseProperties, LightShiftCommutesWithUnitariesThatSpareGg) {
    std::mt19937_64 rng(81);
    for (int t = 0; t < 10; ++t) {
        const PulseOp u = random_unitary_off_gg(rng);
        const SystemState s = ht::random_gaussian_state(rng);
        const PulseOp shift = light_shift_meter(0.45);
        const SystemState a = apply_unitary(apply_unitary(s, u), shift);
        const SystemState b = apply_unitary(apply_unitary(s, shift), u);
        EXPECT_NEAR(std::abs(inner_product(a, b) - 1.0), 0.0, 1e-12);
    }
}
