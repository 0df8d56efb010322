#pragma once

// Repeated-run simulation of the post-selected experiment.
//
// Random numbers come from std::mt19937_64 (fully specified by the C++
// standard). Uniform variates on [0, 1) are the top 53 bits of each output
// times 2^-53, so draws do not depend on the standard library's
// distribution implementations. Shots are processed in fixed batches of
// kShotBatch; batch b uses the sub-seed derive_seed(seed, b + 1), so the
// result is identical for any number of worker threads.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "hardy/meter.hpp"
#include "hardy/protocol.hpp"

namespace hardy {

inline constexpr std::uint64_t kShotBatch = 1u << 16;
inline constexpr std::uint64_t kReliableAccepted = 30;

// SplitMix64 mix of (seed, stream).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);
double uniform01(std::mt19937_64& rng);

// Inverse of the piecewise-linear CDF built from |psi|^2 on the grid nodes.
class InverseCdfSampler {
  public:
    explicit InverseCdfSampler(const GridPointer& grid);
    // u in [0, 1]
    double operator()(double u) const;

  private:
    double xmin_;
    double dx_;
    std::vector<double> cdf_;
};

// n draws from |phi(x)|^2 via the default grid of the pointer.
// Throws std::invalid_argument for n == 0 and InvariantError for a
// degenerate pointer.
std::vector<double> sample_pointer(const GaussianPointer& phi, std::size_t n, std::uint64_t seed);

struct ShotResult {
    std::uint64_t accepted = 0;
    std::uint64_t total = 0;
    // Absent when no shot was accepted.
    std::optional<double> sample_mean;
    double sample_variance = 0.0;  // unbiased; 0 for fewer than two samples
    double std_error = 0.0;
    std::uint64_t seed = 0;
    // False when fewer than kReliableAccepted shots were accepted.
    bool reliable = false;

    double acceptance_fraction() const {
        return total == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(total);
    }
};

struct ShotRecord {
    std::uint64_t shot = 0;
    bool accepted = false;
    double x = 0.0;  // pointer sample; 0 when rejected
};

struct McOptions {
    unsigned threads = 1;
    // When set, receives one record per shot in shot order.
    std::vector<ShotRecord>* records = nullptr;
};

// Per shot: draw the internal detection outcome; on |gg> draw one meter
// reading (pointer position for weak_gaussian, 1/0 for the excited/ground
// meter ion for third_ion). Other variants are rejected.
ShotResult run_experiment_mc(const RunConfig& config, const McOptions& options = {});

// Total experiment repetitions needed so that k_sigma standard errors of
// the post-selected pointer mean fit inside |closed_form_mean|. Throws
// std::invalid_argument for a <= 0 and StatisticsError at the sign-change
// point where the mean vanishes.
std::uint64_t shots_required(double a, double sigma, double k_sigma);

}  // namespace hardy
