#include "hardy/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "hardy/errors.hpp"
#include "hardy/protocol.hpp"
#include "hardy/serialize.hpp"
#include "hardy/shots.hpp"

namespace hardy {

namespace {

struct Options {
    double a_over_sigma = 0.05;
    double sigma = 1.0;
    double theta = 0.1;
    std::uint64_t shots = 100000;
    std::uint64_t seed = 1;
    std::string variant = "weak_gaussian";
    unsigned threads = 0;
    double k_sigma = 3.0;
    double from = 0.01;
    double to = 5.0;
    std::size_t steps = 100;
    std::string format;
    std::string out_file;
    std::string config_file;
    std::string sequence_file;
    std::string shots_csv;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// key=value lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + " is not key=value");
        }
        std::string key = trim(line.substr(0, eq));
        if (key.rfind("--", 0) == 0) key.erase(0, 2);
        out.emplace_back(key, trim(line.substr(eq + 1)));
    }
    return out;
}

std::optional<std::string> find_config_path(std::span<const std::string> args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
    }
    return std::nullopt;
}

std::string fmt_num(double v, int precision = 10) {
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

std::string fmt_complex(cplx c) {
    std::ostringstream os;
    os << std::showpos << std::setprecision(10) << c.real() + 0.0 << ' ' << c.imag() + 0.0 << 'i';
    return os.str();
}

void text_ideal(std::ostream& out, const IdealResult& r) {
    out << "state   amplitude                      probability\n";
    double total = 0.0;
    for (const auto i : all_internal_states()) {
        const double p = r.probabilities[i.index()];
        total += p;
        out << "|" << i.label() << ">    " << std::left << std::setw(30) << fmt_complex(r.state.amplitude(i))
            << std::right << fmt_num(p) << '\n';
    }
    out << "sum of probabilities: " << fmt_num(total, 15) << '\n';
}

void text_weak_values(std::ostream& out, const WeakValueTable& w) {
    out << "weak values (post-selected on |gg>):\n";
    for (const auto& [label, v] : w) out << "  Pi_" << label << "  " << fmt_complex(v) << '\n';
}

void text_report(std::ostream& out, const WeakValueReport& r, std::optional<std::uint64_t> needed, double k) {
    out << "a = " << fmt_num(r.a) << "  sigma = " << fmt_num(r.sigma) << "  a/sigma = " << fmt_num(r.a / r.sigma)
        << '\n';
    out << "post-selection probability: " << fmt_num(r.postselection_probability, 15) << '\n';
    text_weak_values(out, r.weak_values);
    out << "post-selected pointer mean <x_->:  " << fmt_num(r.pointer_mean, 15) << '\n';
    out << "closed-form mean:                  " << fmt_num(r.closed_form_mean, 15) << '\n';
    out << "pointer variance:                  " << fmt_num(r.pointer_variance, 15) << '\n';
    if (needed) {
        out << "experiment repetitions for " << fmt_num(k) << " std errors: " << *needed << '\n';
    } else {
        out << "mean vanishes: displacement unresolvable\n";
    }
}

void text_third_ion(std::ostream& out, const ThirdIonReport& r) {
    out << "theta = " << fmt_num(r.theta) << '\n';
    out << "post-selection probability:       " << fmt_num(r.postselection_probability, 15) << '\n';
    out << "meter excited population P_e:     " << fmt_num(r.excited_population, 15) << '\n';
    out << "closed form:                      " << fmt_num(third_ion_closed_form(r.theta), 15) << '\n';
    out << "delta_p = sin(theta)/2:           " << fmt_num(r.delta_p, 15) << '\n';
    out << "(1/2 - P_e) - delta_p:            " << fmt_num(r.deviation, 15) << '\n';
}

void text_strong(std::ostream& out, const StrongComparison& r) {
    out << "state   undisturbed    with projective measurement after step (ii)\n";
    for (const auto i : all_internal_states()) {
        out << "|" << i.label() << ">    " << std::left << std::setw(15) << fmt_num(r.undisturbed[i.index()])
            << std::right << fmt_num(r.disturbed[i.index()]) << '\n';
    }
    for (const auto& b : r.branches) {
        out << "outcome " << b.label << ": probability " << fmt_num(b.probability) << '\n';
    }
}

void text_shots(std::ostream& out, const ShotResult& r) {
    out << "shots: " << r.total << "  accepted: " << r.accepted << "  fraction: " << fmt_num(r.acceptance_fraction())
        << '\n';
    if (r.sample_mean) {
        out << "sample mean: " << fmt_num(*r.sample_mean, 12) << " +/- " << fmt_num(r.std_error, 6)
            << (r.reliable ? "" : "  (unreliable: fewer than 30 accepted)") << '\n';
    } else {
        out << "no accepted shots; no mean\n";
    }
}

void add_format(CLI::App* sub, Options& o, std::vector<std::string> allowed) {
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember(std::move(allowed)));
    sub->add_option("--out", o.out_file, "Write output to FILE instead of stdout");
    sub->add_option("--config", o.config_file, "key=value config file; flags override");
}

void add_a_sigma(CLI::App* sub, Options& o) {
    sub->add_option("--a", o.a_over_sigma, "Meter displacement a in units of sigma")->capture_default_str();
    sub->add_option("--sigma", o.sigma, "Pointer width (unit of length)")->capture_default_str();
}

RunConfig make_config(const Options& o) {
    RunConfig c;
    if (!std::isfinite(o.sigma) || !(o.sigma > 0.0)) throw std::invalid_argument("--sigma must be positive");
    c.sigma = o.sigma;
    c.a = o.a_over_sigma * o.sigma;
    c.theta = o.theta;
    c.shots = o.shots;
    c.seed = o.seed;
    c.variant = parse_variant(o.variant);
    c.validate();
    return c;
}

void require_theta(double theta) {
    if (!std::isfinite(theta) || !(std::abs(theta) < 3.14159265358979323846)) {
        throw std::invalid_argument("--theta must lie in (-pi, pi)");
    }
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Two-ion interferometer with weak measurement: simulations and scans", "hardy"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);

    auto* ideal = app.add_subcommand("ideal", "Ideal pulse sequence: amplitudes and probabilities");
    add_format(ideal, o, {"text", "json"});
    ideal->add_option("--sequence", o.sequence_file, "JSON pulse sequence to run from |gg> instead")
        ->check(CLI::ExistingFile);

    auto* weak = app.add_subcommand("weak", "Weak measurement with the relative-coordinate meter");
    add_a_sigma(weak, o);
    weak->add_option("--k-sigma", o.k_sigma, "Standard errors for the repetition estimate")->capture_default_str();
    add_format(weak, o, {"text", "json"});

    auto* scan = app.add_subcommand("scan", "Scan the post-selected pointer mean over a/sigma");
    scan->add_option("--from", o.from, "First a/sigma")->capture_default_str();
    scan->add_option("--to", o.to, "Last a/sigma")->capture_default_str();
    scan->add_option("--steps", o.steps, "Number of rows (>= 2)")->capture_default_str();
    scan->add_option("--sigma", o.sigma, "Pointer width (unit of length)")->capture_default_str();
    add_format(scan, o, {"csv", "json"});

    auto* third = app.add_subcommand("third-ion", "Third-ion meter with a partial C2-NOT");
    third->add_option("--theta", o.theta, "Rotation angle in radians")->capture_default_str();
    add_format(third, o, {"text", "json"});

    auto* mc = app.add_subcommand("mc", "Monte-Carlo repetitions of the post-selected experiment");
    add_a_sigma(mc, o);
    mc->add_option("--theta", o.theta, "Rotation angle for the third-ion variant")->capture_default_str();
    mc->add_option("--shots", o.shots, "Experiment repetitions")->capture_default_str();
    mc->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    mc->add_option("--variant", o.variant, "weak_gaussian or third_ion")
        ->check(CLI::IsMember({"weak_gaussian", "weak", "third_ion", "third-ion"}))
        ->capture_default_str();
    mc->add_option("--threads", o.threads, "Worker threads (0 = hardware concurrency)");
    mc->add_option("--shots-csv", o.shots_csv, "Write per-shot records to FILE");
    add_format(mc, o, {"json", "text"});

    auto* strong = app.add_subcommand("strong", "Compare with a projective measurement after step (ii)");
    add_format(strong, o, {"text", "json"});

    std::vector<std::string> argv_store{"hardy"};
    try {
        // Config values go right after the subcommand so command-line flags,
        // which come later, take precedence.
        std::vector<std::string> injected;
        if (const auto path = find_config_path(args)) {
            const std::string cmd = args.empty() ? std::string() : args[0];
            CLI::App* target = nullptr;
            for (auto* s : app.get_subcommands({})) {
                if (s->get_name() == cmd) target = s;
            }
            std::set<std::string> known;
            for (auto* s : app.get_subcommands({})) {
                for (const auto* opt : s->get_options()) {
                    for (const auto& name : opt->get_lnames()) known.insert(name);
                }
            }
            for (const auto& [key, value] : read_config(*path)) {
                if (!known.contains(key)) throw std::invalid_argument("unknown config key '" + key + "'");
                if (key == "config" || target == nullptr) continue;
                if (target->get_option_no_throw("--" + key) != nullptr) injected.push_back("--" + key + "=" + value);
            }
        }
        if (!args.empty()) {
            argv_store.push_back(args[0]);
            argv_store.insert(argv_store.end(), injected.begin(), injected.end());
            argv_store.insert(argv_store.end(), args.begin() + 1, args.end());
        }
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    std::vector<const char*> argv;
    for (const auto& s : argv_store) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    std::ostringstream buffer;
    int status = kExitOk;
    try {
        if (*ideal) {
            IdealResult r = [&] {
                if (o.sequence_file.empty()) return run_ideal();
                std::ifstream in(o.sequence_file);
                const json seq = json::parse(in);
                SystemState s = apply_sequence(init_ground(), pulses_from_json(seq));
                ProbabilityTable p = probability_table(s);
                return IdealResult{std::move(s), p};
            }();
            if (o.format == "json") {
                buffer << ideal_to_json(r).dump(2) << '\n';
            } else {
                text_ideal(buffer, r);
            }
        } else if (*weak) {
            const RunConfig c = make_config(o);
            const WeakValueReport r = run_weak_gaussian(c.a, c.sigma);
            std::optional<std::uint64_t> needed;
            if (c.a > 0.0) {
                try {
                    needed = shots_required(c.a, c.sigma, o.k_sigma);
                } catch (const StatisticsError&) {
                }
            }
            if (o.format == "json") {
                json j = report_to_json(r);
                j["k_sigma"] = o.k_sigma;
                j["shots_required"] = needed ? json(*needed) : json(nullptr);
                buffer << j.dump(2) << '\n';
            } else {
                text_report(buffer, r, needed, o.k_sigma);
            }
        } else if (*scan) {
            if (!std::isfinite(o.sigma) || !(o.sigma > 0.0)) throw std::invalid_argument("--sigma must be positive");
            const auto rows = scan_pointer_shift(o.from, o.to, o.steps, o.sigma);
            if (o.format == "json") {
                json j = json::array();
                for (const auto& r : rows) {
                    j.push_back({{"a_over_sigma", r.a_over_sigma},
                                 {"mean_over_a", r.mean_over_a},
                                 {"closed_form_over_a", r.closed_form_over_a},
                                 {"probability", r.probability}});
                }
                buffer << j.dump(2) << '\n';
            } else {
                write_scan_csv(buffer, rows);
            }
        } else if (*third) {
            require_theta(o.theta);
            const ThirdIonReport r = run_third_ion(o.theta);
            if (o.format == "json") {
                buffer << third_ion_to_json(r).dump(2) << '\n';
            } else {
                text_third_ion(buffer, r);
            }
        } else if (*mc) {
            const RunConfig c = make_config(o);
            if (c.variant == Variant::third_ion) require_theta(c.theta);
            McOptions opts;
            opts.threads = o.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : o.threads;
            std::vector<ShotRecord> records;
            if (!o.shots_csv.empty()) opts.records = &records;
            const ShotResult r = run_experiment_mc(c, opts);
            if (!o.shots_csv.empty()) {
                std::ofstream f(o.shots_csv);
                if (!f) throw std::invalid_argument("cannot write '" + o.shots_csv + "'");
                write_shots_csv(f, records);
            }
            if (o.format == "text") {
                text_shots(buffer, r);
            } else {
                buffer << shot_result_to_json(r, c).dump(2) << '\n';
            }
            if (r.accepted == 0) {
                err << "error: no shots were accepted by post-selection\n";
                status = kExitStatistics;
            }
        } else if (*strong) {
            const StrongComparison r = run_strong_comparison();
            if (o.format == "json") {
                buffer << strong_to_json(r).dump(2) << '\n';
            } else {
                text_strong(buffer, r);
            }
        }
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const MeterKindError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const StatisticsError& e) {
        err << "error: " << e.what() << '\n';
        return kExitStatistics;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }

    if (o.out_file.empty()) {
        out << buffer.str();
    } else {
        std::ofstream f(o.out_file);
        if (!f) {
            err << "error: cannot write '" << o.out_file << "'\n";
            return kExitUsage;
        }
        f << buffer.str();
    }
    return status;
}

}  // namespace hardy
