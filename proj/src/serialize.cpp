#include "hardy/serialize.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

namespace hardy {

namespace {

json complex_json(cplx c) { return json::array({c.real(), c.imag()}); }

void write_number(std::ostream& out, double v) {
    out << std::setprecision(17) << v;
}

double required_number(const json& params, const char* key, const std::string& pulse) {
    if (!params.contains(key) || !params.at(key).is_number()) {
        throw std::invalid_argument("pulse '" + pulse + "' needs numeric parameter '" + key + "'");
    }
    return params.at(key).get<double>();
}

}  // namespace

json state_to_json(const SystemState& s) {
    json out = json::object();
    const std::size_t m = s.meter_dim();
    for (const auto i : all_internal_states()) {
        for (std::size_t k = 0; k < m; ++k) {
            const std::string key = m > 1 ? i.label() + "#" + std::to_string(k) : i.label();
            out[key] = complex_json(s.amplitude(i, k));
        }
    }
    return out;
}

json pointer_to_json(const GaussianPointer& p) {
    json branches = json::array();
    for (const auto& b : p.branches()) branches.push_back(json::array({b.coeff.real(), b.coeff.imag(), b.center}));
    json out;
    out["sigma"] = p.sigma();
    out["branches"] = std::move(branches);
    return out;
}

GaussianPointer pointer_from_json(const json& j) {
    if (!j.is_object() || !j.contains("sigma") || !j.contains("branches") || !j.at("sigma").is_number() ||
        !j.at("branches").is_array()) {
        throw std::invalid_argument("pointer JSON needs numeric 'sigma' and array 'branches'");
    }
    std::vector<GaussianBranch> branches;
    for (const auto& b : j.at("branches")) {
        if (!b.is_array() || b.size() != 3 || !b[0].is_number() || !b[1].is_number() || !b[2].is_number()) {
            throw std::invalid_argument("pointer branch must be [re, im, center]");
        }
        branches.push_back({cplx{b[0].get<double>(), b[1].get<double>()}, b[2].get<double>()});
    }
    return GaussianPointer(j.at("sigma").get<double>(), std::move(branches));
}

json probabilities_to_json(const ProbabilityTable& p) {
    json out = json::object();
    for (const auto i : all_internal_states()) out[i.label()] = p[i.index()];
    return out;
}

json weak_values_to_json(const WeakValueTable& w) {
    json out = json::object();
    for (const auto& [label, v] : w) out[label] = complex_json(v);
    return out;
}

json ideal_to_json(const IdealResult& r) {
    json out;
    out["amplitudes"] = state_to_json(r.state);
    out["probabilities"] = probabilities_to_json(r.probabilities);
    out["P_gg"] = r.probabilities[basis::gg.index()];
    double total = 0.0;
    for (double p : r.probabilities) total += p;
    out["total_probability"] = total;
    return out;
}

json report_to_json(const WeakValueReport& r) {
    json out;
    out["postselection_probability"] = r.postselection_probability;
    out["weak_values"] = weak_values_to_json(r.weak_values);
    out["pointer_mean"] = r.pointer_mean;
    out["closed_form_mean"] = r.closed_form_mean;
    out["pointer_variance"] = r.pointer_variance;
    out["a"] = r.a;
    out["sigma"] = r.sigma;
    out["conditional_pointer"] = pointer_to_json(r.conditional_pointer);
    return out;
}

json third_ion_to_json(const ThirdIonReport& r) {
    json out;
    out["theta"] = r.theta;
    out["postselection_probability"] = r.postselection_probability;
    out["excited_population"] = r.excited_population;
    out["closed_form_excited_population"] = third_ion_closed_form(r.theta);
    out["delta_p"] = r.delta_p;
    out["deviation"] = r.deviation;
    return out;
}

json strong_to_json(const StrongComparison& r) {
    json branches = json::array();
    for (const auto& b : r.branches) {
        json jb;
        jb["label"] = b.label;
        jb["probability"] = b.probability;
        jb["final_probabilities"] = probabilities_to_json(b.final_probabilities);
        branches.push_back(std::move(jb));
    }
    json out;
    out["undisturbed"] = probabilities_to_json(r.undisturbed);
    out["disturbed"] = probabilities_to_json(r.disturbed);
    out["branches"] = std::move(branches);
    return out;
}

json shot_result_to_json(const ShotResult& r, const RunConfig& config) {
    json out;
    out["variant"] = to_string(config.variant);
    out["a"] = config.a;
    out["sigma"] = config.sigma;
    out["theta"] = config.theta;
    out["seed"] = r.seed;
    out["total"] = r.total;
    out["accepted"] = r.accepted;
    out["acceptance_fraction"] = r.acceptance_fraction();
    out["sample_mean"] = r.sample_mean ? json(*r.sample_mean) : json(nullptr);
    out["std_error"] = r.std_error;
    out["reliable"] = r.reliable;
    return out;
}

void write_grid_csv(std::ostream& out, const GridPointer& g) {
    out << "x,re,im,abs2\n";
    for (std::size_t k = 0; k < g.size(); ++k) {
        const cplx v = g.values()[k];
        write_number(out, g.x(k));
        out << ',';
        write_number(out, v.real());
        out << ',';
        write_number(out, v.imag());
        out << ',';
        write_number(out, std::norm(v));
        out << '\n';
    }
}

void write_scan_csv(std::ostream& out, std::span<const ScanRow> rows) {
    out << "a_over_sigma,mean_over_a,closed_form_over_a,probability\n";
    for (const auto& r : rows) {
        write_number(out, r.a_over_sigma);
        out << ',';
        write_number(out, r.mean_over_a);
        out << ',';
        write_number(out, r.closed_form_over_a);
        out << ',';
        write_number(out, r.probability);
        out << '\n';
    }
}

void write_shots_csv(std::ostream& out, std::span<const ShotRecord> records) {
    out << "shot,accepted,x_sample\n";
    for (const auto& r : records) {
        out << r.shot << ',' << (r.accepted ? 1 : 0) << ',';
        if (r.accepted) write_number(out, r.x);
        out << '\n';
    }
}

std::vector<PulseOp> pulses_from_json(const json& j) {
    if (!j.is_array()) throw std::invalid_argument("pulse sequence must be a JSON array");
    std::vector<PulseOp> ops;
    for (const auto& entry : j) {
        if (!entry.is_object() || !entry.contains("pulse") || !entry.at("pulse").is_string()) {
            throw std::invalid_argument("pulse entry needs a string 'pulse' field");
        }
        const std::string name = entry.at("pulse").get<std::string>();
        const json params = entry.contains("params") ? entry.at("params") : json::object();
        if (!params.is_object()) throw std::invalid_argument("pulse params must be an object");

        if (name == "beamsplitter") {
            const double ion = required_number(params, "ion", name);
            if (ion != 1.0 && ion != 2.0) throw std::invalid_argument("beamsplitter ion must be 1 or 2");
            ops.push_back(beamsplitter(static_cast<int>(ion)));
        } else if (name == "beamsplitter_pair") {
            ops.push_back(beamsplitter_pair());
        } else if (name == "annihilation") {
            ops.push_back(annihilation_pulse());
        } else if (name == "light_shift") {
            ops.push_back(light_shift_meter(required_number(params, "a", name)));
        } else if (name == "partial_ccnot") {
            ops.push_back(partial_ccnot(required_number(params, "theta", name)));
        } else {
            throw std::invalid_argument("unknown pulse '" + name + "'");
        }
    }
    return ops;
}

}  // namespace hardy
