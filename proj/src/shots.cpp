#include "hardy/shots.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "hardy/errors.hpp"

namespace hardy {

namespace {

// Running mean / sum of squared deviations (Welford), mergeable with Chan's
// pairwise update.
struct Accumulator {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }

    void merge(const Accumulator& o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        const double total = static_cast<double>(n + o.n);
        const double d = o.mean - mean;
        mean += d * static_cast<double>(o.n) / total;
        m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / total;
        n += o.n;
    }
};

struct BatchResult {
    Accumulator acc;
    std::vector<ShotRecord> records;
};

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

InverseCdfSampler::InverseCdfSampler(const GridPointer& grid) : xmin_(grid.xmin()), dx_(grid.dx()) {
    const auto v = grid.values();
    cdf_.resize(v.size());
    cdf_[0] = 0.0;
    for (std::size_t k = 1; k < v.size(); ++k) {
        cdf_[k] = cdf_[k - 1] + 0.5 * dx_ * (std::norm(v[k - 1]) + std::norm(v[k]));
    }
    const double total = cdf_.back();
    if (!(total > 0.0)) throw InvariantError("cannot sample from a zero density");
    for (auto& c : cdf_) c /= total;
}

double InverseCdfSampler::operator()(double u) const {
    u = std::clamp(u, 0.0, 1.0);
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) return xmin_ + dx_ * static_cast<double>(cdf_.size() - 1);
    const std::size_t hi = static_cast<std::size_t>(it - cdf_.begin());
    const std::size_t lo = hi - 1;
    const double width = cdf_[hi] - cdf_[lo];
    const double frac = width > 0.0 ? (u - cdf_[lo]) / width : 0.0;
    return xmin_ + dx_ * (static_cast<double>(lo) + frac);
}

std::vector<double> sample_pointer(const GaussianPointer& phi, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("sample count must be at least 1");
    const InverseCdfSampler sampler(to_grid(phi.normalized()));
    std::mt19937_64 rng(derive_seed(seed, 0));
    std::vector<double> out(n);
    for (auto& x : out) x = sampler(uniform01(rng));
    return out;
}

ShotResult run_experiment_mc(const RunConfig& config, const McOptions& options) {
    config.validate();

    double p_accept = 0.0;
    std::optional<InverseCdfSampler> pointer_sampler;
    double meter_excited = 0.0;

    switch (config.variant) {
        case Variant::weak_gaussian: {
            const auto stages = weak_gaussian_stages(config.a, config.sigma);
            p_accept = probability_table(stages.final)[basis::gg.index()];
            const Projection proj = project_internal(stages.final, basis::gg);
            pointer_sampler.emplace(to_grid(proj.conditional.gaussian_component(basis::gg)));
            break;
        }
        case Variant::third_ion: {
            const ThirdIonReport r = run_third_ion(config.theta);
            p_accept = r.postselection_probability;
            meter_excited = r.excited_population;
            break;
        }
        default:
            throw std::invalid_argument(std::string("Monte-Carlo runs support weak_gaussian and third_ion, not ") +
                                        to_string(config.variant));
    }

    const std::uint64_t batches = (config.shots + kShotBatch - 1) / kShotBatch;
    std::vector<BatchResult> results(batches);
    const bool keep_records = options.records != nullptr;

    auto run_batch = [&](std::uint64_t b) {
        std::mt19937_64 rng(derive_seed(config.seed, b + 1));
        const std::uint64_t first = b * kShotBatch;
        const std::uint64_t last = std::min(config.shots, first + kShotBatch);
        BatchResult& out = results[b];
        if (keep_records) out.records.reserve(last - first);
        for (std::uint64_t shot = first; shot < last; ++shot) {
            const bool accepted = uniform01(rng) < p_accept;
            double x = 0.0;
            if (accepted) {
                const double u = uniform01(rng);
                x = pointer_sampler ? (*pointer_sampler)(u) : (u < meter_excited ? 1.0 : 0.0);
                out.acc.add(x);
            }
            if (keep_records) out.records.push_back({shot, accepted, x});
        }
    };

    const unsigned threads =
        static_cast<unsigned>(std::clamp<std::uint64_t>(options.threads == 0 ? 1 : options.threads, 1, batches));
    if (threads <= 1) {
        for (std::uint64_t b = 0; b < batches; ++b) run_batch(b);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::uint64_t b = next++; b < batches; b = next++) run_batch(b);
            });
        }
    }

    Accumulator total;
    for (auto& r : results) {
        total.merge(r.acc);
        if (keep_records) {
            options.records->insert(options.records->end(), r.records.begin(), r.records.end());
        }
    }

    ShotResult out;
    out.total = config.shots;
    out.accepted = total.n;
    out.seed = config.seed;
    out.reliable = total.n >= kReliableAccepted;
    if (total.n > 0) out.sample_mean = total.mean;
    if (total.n > 1) {
        out.sample_variance = total.m2 / static_cast<double>(total.n - 1);
        out.std_error = std::sqrt(out.sample_variance / static_cast<double>(total.n));
    }
    return out;
}

std::uint64_t shots_required(double a, double sigma, double k_sigma) {
    if (!std::isfinite(a) || !(a > 0.0)) throw std::invalid_argument("shots_required needs a > 0");
    if (!std::isfinite(k_sigma) || !(k_sigma > 0.0)) throw std::invalid_argument("k_sigma must be positive");
    const WeakValueReport r = run_weak_gaussian(a, sigma);
    const double signal = std::abs(r.closed_form_mean);
    if (!(signal > 1e-12 * sigma)) {
        throw StatisticsError("unresolvable: the post-selected mean vanishes at this displacement");
    }
    const double ratio = k_sigma * std::sqrt(r.pointer_variance) / signal;
    const double accepted_needed = std::ceil(ratio * ratio);
    return static_cast<std::uint64_t>(std::ceil(accepted_needed / r.postselection_probability));
}

}  // namespace hardy
