#include "hardy/serialize.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "test_support.hpp"

using namespace hardy;
namespace ht = hardy::testing;

namespace {

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

}  // namespace

TEST(StateJson, LabelsAndValues) {
    const json j = state_to_json(run_ideal().state);
    ASSERT_EQ(j.size(), 9u);
    EXPECT_EQ(j.begin().key(), "gg");
    EXPECT_DOUBLE_EQ(j["gg"][0].get<double>(), -0.25);
    EXPECT_DOUBLE_EQ(j["ee"][0].get<double>(), 0.75);
    EXPECT_DOUBLE_EQ(j["ff"][1].get<double>(), 0.0);
}

TEST(StateJson, MeterSuffix) {
    const json j = state_to_json(init_ground(QubitPointer::plus()));
    EXPECT_EQ(j.size(), 18u);
    EXPECT_TRUE(j.contains("gg#0"));
    EXPECT_TRUE(j.contains("ff#1"));
}

TEST(IdealJson, Fields) {
    const json j = ideal_to_json(run_ideal());
    EXPECT_DOUBLE_EQ(j["P_gg"].get<double>(), 0.0625);
    EXPECT_NEAR(j["total_probability"].get<double>(), 1.0, 1e-15);
    EXPECT_TRUE(j["amplitudes"].is_object());
    EXPECT_TRUE(j["probabilities"].is_object());
}

TEST(ReportJson, FixedFieldOrder) {
    const json j = report_to_json(run_weak_gaussian(0.5, 1.0));
    const std::vector<std::string> expected{"postselection_probability", "weak_values", "pointer_mean", "closed_form_mean",
                                            "pointer_variance", "a", "sigma", "conditional_pointer"};
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    EXPECT_EQ(keys, expected);
    EXPECT_DOUBLE_EQ(j["weak_values"]["gg"][0].get<double>(), -1.0);
}

TEST(OtherReportsJson, Fields) {
    const json t = third_ion_to_json(run_third_ion(0.1));
    for (const char* k : {"theta", "postselection_probability", "excited_population", "closed_form_excited_population",
                          "delta_p", "deviation"}) {
        EXPECT_TRUE(t.contains(k)) << k;
    }
    const json s = strong_to_json(run_strong_comparison());
    EXPECT_DOUBLE_EQ(s["undisturbed"]["gg"].get<double>(), 0.0625);
    EXPECT_EQ(s["branches"].size(), 2u);
}

TEST(ShotResultJson, NullMeanWhenEmpty) {
    ShotResult r;
    r.total = 3;
    const json j = shot_result_to_json(r, RunConfig{});
    EXPECT_TRUE(j["sample_mean"].is_null());
    EXPECT_EQ(j["variant"], "weak_gaussian");
    EXPECT_EQ(j["accepted"], 0);
}

TEST(PointerJson, RoundTripProperty) {
    std::mt19937_64 rng(123);
    for (int t = 0; t < 50; ++t) {
        const GaussianPointer p = ht::random_pointer(rng);
        const GaussianPointer q = pointer_from_json(json::parse(pointer_to_json(p).dump()));
        ASSERT_EQ(p.size(), q.size());
        EXPECT_EQ(p.sigma(), q.sigma());
        for (std::size_t k = 0; k < p.size(); ++k) {
            EXPECT_EQ(p.branches()[k].coeff, q.branches()[k].coeff);
            EXPECT_EQ(p.branches()[k].center, q.branches()[k].center);
        }
    }
}

TEST(PointerJson, RejectsMalformed) {
    EXPECT_THROW(pointer_from_json(json::parse(R"({"sigma": 1})")), std::invalid_argument);
    EXPECT_THROW(pointer_from_json(json::parse(R"({"sigma": 1, "branches": [[1, 0]]})")), std::invalid_argument);
    EXPECT_THROW(pointer_from_json(json::parse(R"({"sigma": -1, "branches": [[1, 0, 0]]})")), std::invalid_argument);
}

TEST(Csv, ScanHeaderAndRowCount) {
    std::ostringstream out;
    write_scan_csv(out, scan_pointer_shift(0.1, 1.0, 7));
    const auto l = lines(out.str());
    ASSERT_EQ(l.size(), 8u);
    EXPECT_EQ(l[0], "a_over_sigma,mean_over_a,closed_form_over_a,probability");
    EXPECT_EQ(l[1].rfind("0.10000000000000001,", 0), 0u);
}

TEST(Csv, ShotsAndGrid) {
    std::ostringstream shots;
    const std::vector<ShotRecord> rec{{0, false, 0.0}, {1, true, 0.25}};
    write_shots_csv(shots, rec);
    EXPECT_EQ(shots.str(), "shot,accepted,x_sample\n0,0,\n1,1,0.25\n");

    std::ostringstream grid;
    write_grid_csv(grid, to_grid(GaussianPointer::ground(1.0), -6.0, 6.0, 5));
    const auto l = lines(grid.str());
    ASSERT_EQ(l.size(), 6u);
    EXPECT_EQ(l[0], "x,re,im,abs2");
    EXPECT_EQ(l[1].rfind("-6,", 0), 0u);
}

TEST(PulseSequenceJson, ReproducesIdealState) {
    const json seq = json::parse(R"([
        {"pulse": "beamsplitter", "params": {"ion": 1}},
        {"pulse": "beamsplitter", "params": {"ion": 2}},
        {"pulse": "annihilation"},
        {"pulse": "beamsplitter_pair", "params": {}}
    ])");
    const SystemState s = apply_sequence(init_ground(), pulses_from_json(seq));
    const SystemState ideal = run_ideal().state;
    for (const auto i : all_internal_states()) EXPECT_NEAR(std::abs(s.amplitude(i) - ideal.amplitude(i)), 0.0, 1e-15);
}

TEST(PulseSequenceJson, ParametrizedPulses) {
    const auto ops = pulses_from_json(json::parse(R"([
        {"pulse": "light_shift", "params": {"a": 0.3}},
        {"pulse": "partial_ccnot", "params": {"theta": 0.2}}
    ])"));
    ASSERT_EQ(ops.size(), 2u);
    const auto& d = std::get<ConditionalDisplacement>(ops[0].action());
    EXPECT_DOUBLE_EQ(d.shift, -0.3);
    EXPECT_DOUBLE_EQ(std::get<ConditionalRotation>(ops[1].action()).theta, 0.2);
}

TEST(PulseSequenceJson, RejectsMalformed) {
    EXPECT_THROW(pulses_from_json(json::object()), std::invalid_argument);
    EXPECT_THROW(pulses_from_json(json::parse(R"([{"pulse": "laser"}])")), std::invalid_argument);
    EXPECT_THROW(pulses_from_json(json::parse(R"([{"pulse": "beamsplitter", "params": {"ion": 3}}])")),
                 std::invalid_argument);
    EXPECT_THROW(pulses_from_json(json::parse(R"([{"pulse": "light_shift"}])")), std::invalid_argument);
    EXPECT_THROW(pulses_from_json(json::parse(R"([{"params": {}}])")), std::invalid_argument);
}
