#pragma once

// JSON and CSV encodings of states, pointers, reports and scans. Complex
// numbers are written as [re, im]. Object keys are emitted in a fixed order.

#include <iosfwd>
#include <span>
#include <vector>

#include <json.hpp>

#include "hardy/meter.hpp"
#include "hardy/protocol.hpp"
#include "hardy/pulses.hpp"
#include "hardy/shots.hpp"
#include "hardy/state.hpp"

namespace hardy {

using json = nlohmann::ordered_json;

// {"gg": [re, im], "ge": ...}; keys carry a "#k" meter suffix when the
// meter dimension exceeds one.
json state_to_json(const SystemState& s);

// {"sigma": s, "branches": [[re, im, center], ...]}
json pointer_to_json(const GaussianPointer& p);
// Throws std::invalid_argument on malformed input.
GaussianPointer pointer_from_json(const json& j);

json probabilities_to_json(const ProbabilityTable& p);
json weak_values_to_json(const WeakValueTable& w);

json ideal_to_json(const IdealResult& r);
// postselection_probability, weak_values, pointer_mean, closed_form_mean,
// pointer_variance, then a, sigma and conditional_pointer.
json report_to_json(const WeakValueReport& r);
json third_ion_to_json(const ThirdIonReport& r);
json strong_to_json(const StrongComparison& r);
json shot_result_to_json(const ShotResult& r, const RunConfig& config);

// Header "x,re,im,abs2".
void write_grid_csv(std::ostream& out, const GridPointer& g);
// Header "a_over_sigma,mean_over_a,closed_form_over_a,probability".
void write_scan_csv(std::ostream& out, std::span<const ScanRow> rows);
// Header "shot,accepted,x_sample".
void write_shots_csv(std::ostream& out, std::span<const ShotRecord> records);

// Ordered list of {"pulse": name, "params": {...}}. Known pulses:
//   beamsplitter {"ion": 1|2}, beamsplitter_pair, annihilation,
//   light_shift {"a": length}, partial_ccnot {"theta": radians}.
std::vector<PulseOp> pulses_from_json(const json& j);

}  // namespace hardy
