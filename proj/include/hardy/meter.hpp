#pragma once

// Pointer (meter) states. The Gaussian pointer is a finite superposition of
// equal-width displaced ground states
//
//     phi(x) = sum_i c_i (2 pi sigma^2)^(-1/4) exp(-(x - d_i)^2 / (4 sigma^2)),
//
// whose overlaps, means and second moments are exact closed forms in the
// branch centers. GridPointer is a sampled wavefunction used as an
// independent quadrature oracle. QubitPointer is the two-level meter of the
// third-ion scheme.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hardy {

using cplx = std::complex<double>;

struct GaussianBranch {
    cplx coeff;
    double center = 0.0;
};

class GaussianPointer {
  public:
    // Throws std::invalid_argument unless sigma > 0 and every center and
    // coefficient is finite.
    GaussianPointer(double sigma, std::vector<GaussianBranch> branches);

    // Single unit-amplitude ground state centered at `center`.
    static GaussianPointer ground(double sigma, double center = 0.0);

    double sigma() const { return sigma_; }
    std::span<const GaussianBranch> branches() const { return branches_; }
    std::size_t size() const { return branches_.size(); }

    // c^dagger G c with G the branch Gram matrix.
    double norm_squared() const;
    // Throws InvariantError when the norm is below the degeneracy floor.
    GaussianPointer normalized() const;
    GaussianPointer shifted(double offset) const;
    GaussianPointer scaled(cplx factor) const;
    // Sorted by center; branches at the same center (within 1e-12 sigma)
    // summed; exactly-zero coefficients dropped.
    GaussianPointer merged() const;

    cplx evaluate(double x) const;

  private:
    double sigma_;
    std::vector<GaussianBranch> branches_;
};

// exp(-(di - dj)^2 / (8 sigma^2)): overlap of two normalized ground states.
double gaussian_kernel(double di, double dj, double sigma);

// <p|q> = sum_ij conj(p_i) q_j K(d_i, d_j). Throws std::invalid_argument on
// width mismatch.
cplx gaussian_overlap(const GaussianPointer& p, const GaussianPointer& q);

// <x> for the (not necessarily normalized) pointer. Throws InvariantError on
// a degenerate norm.
double gaussian_mean_x(const GaussianPointer& p);
// <x^2>, same conventions as gaussian_mean_x.
double gaussian_second_moment(const GaussianPointer& p);
double gaussian_variance(const GaussianPointer& p);

// || p - q ||_2 computed in closed form. Both pointers are used as given
// (no normalization).
double l2_distance(const GaussianPointer& p, const GaussianPointer& q);

inline constexpr std::size_t kDefaultGridPoints = 4096;
inline constexpr double kDefaultGridPadding = 6.0;  // in units of sigma

class GridPointer {
  public:
    // Throws std::invalid_argument unless xmax > xmin, values.size() >= 2 and
    // all values finite.
    GridPointer(double xmin, double xmax, std::vector<cplx> values);

    static GridPointer sample(const std::function<cplx(double)>& f, double xmin, double xmax,
                              std::size_t n);

    double xmin() const { return xmin_; }
    double xmax() const { return xmax_; }
    std::size_t size() const { return values_.size(); }
    double dx() const { return (xmax_ - xmin_) / static_cast<double>(values_.size() - 1); }
    double x(std::size_t k) const;
    // Trapezoid weight of node k.
    double weight(std::size_t k) const;
    std::span<const cplx> values() const { return values_; }

    double norm_squared() const;
    GridPointer normalized() const;

  private:
    double xmin_;
    double xmax_;
    std::vector<cplx> values_;
};

// Samples p on [xmin, xmax] with n points and renormalizes with the
// trapezoid rule. The window must cover every center by 6 sigma.
GridPointer to_grid(const GaussianPointer& p, double xmin, double xmax,
                    std::size_t n = kDefaultGridPoints);
// Default window: [min center - 6 sigma, max center + 6 sigma], 4096 points.
GridPointer to_grid(const GaussianPointer& p);

struct GridMoments {
    double mean = 0.0;
    double variance = 0.0;
};

GridMoments grid_moments(const GridPointer& p);

// Two-level meter, amplitudes on (|g>, |e>).
class QubitPointer {
  public:
    // Throws std::invalid_argument unless |g|^2 + |e|^2 = 1 within 1e-12.
    QubitPointer(cplx amp_g, cplx amp_e);

    // Renormalizes arbitrary nonzero amplitudes.
    static QubitPointer from_unnormalized(cplx amp_g, cplx amp_e);
    // (|g> + |e>) / sqrt(2)
    static QubitPointer plus();

    cplx amp_g() const { return g_; }
    cplx amp_e() const { return e_; }
    double excited_population() const { return std::norm(e_); }

  private:
    cplx g_;
    cplx e_;
};

// |g> -> cos(theta/2)|g> + sin(theta/2)|e>,  |e> -> cos(theta/2)|e> - sin(theta/2)|g>.
// Positive theta raises the excited population of (|g> + |e>)/sqrt(2) by
// sin(theta)/2.
QubitPointer qubit_rotate(const QubitPointer& p, double theta);

}  // namespace hardy
