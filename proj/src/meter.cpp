#include "hardy/meter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hardy/errors.hpp"

namespace hardy {

namespace {

using lcplx = std::complex<long double>;

constexpr double kDegenerateNorm = 1e-15;
constexpr double kMergeTolerance = 1e-12;  // relative to sigma

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string(what) + " must be finite");
    }
}

long double kernel_ld(double di, double dj, double sigma) {
    const long double d = static_cast<long double>(di) - static_cast<long double>(dj);
    const long double s = sigma;
    return std::exp(-(d * d) / (8.0L * s * s));
}

lcplx to_l(cplx c) { return {c.real(), c.imag()}; }

// sum_ij conj(p_i) q_j K_ij w(d_i, d_j), accumulated in extended precision.
// The pointer moments are differences of nearly equal terms close to the
// sign-change point of the post-selected mean.
template <class Weight>
lcplx quadratic_form(const GaussianPointer& p, const GaussianPointer& q, Weight w) {
    lcplx acc{0.0L, 0.0L};
    for (const auto& bi : p.branches()) {
        const lcplx ci = std::conj(to_l(bi.coeff));
        for (const auto& bj : q.branches()) {
            acc += ci * to_l(bj.coeff) * kernel_ld(bi.center, bj.center, p.sigma()) *
                   w(static_cast<long double>(bi.center), static_cast<long double>(bj.center));
        }
    }
    return acc;
}

// Magnitude bound of the quadratic form, used to judge the imaginary residue.
template <class Weight>
long double quadratic_scale(const GaussianPointer& p, Weight w) {
    long double acc = 0.0L;
    for (const auto& bi : p.branches()) {
        for (const auto& bj : p.branches()) {
            acc += std::abs(to_l(bi.coeff)) * std::abs(to_l(bj.coeff)) *
                   kernel_ld(bi.center, bj.center, p.sigma()) *
                   std::abs(w(static_cast<long double>(bi.center), static_cast<long double>(bj.center)));
        }
    }
    return acc;
}

template <class Weight>
double hermitian_expectation(const GaussianPointer& p, Weight w, const char* what) {
    const long double norm = quadratic_form(p, p, [](long double, long double) { return 1.0L; }).real();
    if (!(norm > kDegenerateNorm)) {
        throw InvariantError(std::string(what) + ": degenerate pointer norm");
    }
    const lcplx num = quadratic_form(p, p, w);
    const long double scale = quadratic_scale(p, w);
    if (std::abs(num.imag()) > 1e-12L * std::max(scale, 1e-300L)) {
        throw InvariantError(std::string(what) + ": expectation value is not real");
    }
    return static_cast<double>(num.real() / norm);
}

}  // namespace

GaussianPointer::GaussianPointer(double sigma, std::vector<GaussianBranch> branches)
    : sigma_(sigma), branches_(std::move(branches)) {
    if (!(sigma_ > 0.0) || !std::isfinite(sigma_)) {
        throw std::invalid_argument("pointer width sigma must be positive and finite");
    }
    for (const auto& b : branches_) {
        require_finite(b.center, "branch center");
        require_finite(b.coeff.real(), "branch coefficient");
        require_finite(b.coeff.imag(), "branch coefficient");
    }
}

GaussianPointer GaussianPointer::ground(double sigma, double center) {
    return GaussianPointer(sigma, {{cplx{1.0, 0.0}, center}});
}

double GaussianPointer::norm_squared() const {
    return static_cast<double>(
        quadratic_form(*this, *this, [](long double, long double) { return 1.0L; }).real());
}

GaussianPointer GaussianPointer::normalized() const {
    const double n2 = norm_squared();
    if (!(n2 > kDegenerateNorm)) {
        throw InvariantError("cannot normalize a pointer with vanishing norm");
    }
    return scaled(cplx{1.0 / std::sqrt(n2), 0.0});
}

GaussianPointer GaussianPointer::shifted(double offset) const {
    auto out = branches_;
    for (auto& b : out) b.center += offset;
    return GaussianPointer(sigma_, std::move(out));
}

GaussianPointer GaussianPointer::scaled(cplx factor) const {
    auto out = branches_;
    for (auto& b : out) b.coeff *= factor;
    return GaussianPointer(sigma_, std::move(out));
}

GaussianPointer GaussianPointer::merged() const {
    auto sorted = branches_;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const GaussianBranch& a, const GaussianBranch& b) { return a.center < b.center; });
    std::vector<GaussianBranch> out;
    for (const auto& b : sorted) {
        if (!out.empty() && std::abs(out.back().center - b.center) <= kMergeTolerance * sigma_) {
            out.back().coeff += b.coeff;
        } else {
            out.push_back(b);
        }
    }
    std::erase_if(out, [](const GaussianBranch& b) { return b.coeff == cplx{0.0, 0.0}; });
    return GaussianPointer(sigma_, std::move(out));
}

cplx GaussianPointer::evaluate(double x) const {
    const double prefactor = std::pow(2.0 * std::numbers::pi * sigma_ * sigma_, -0.25);
    cplx acc{0.0, 0.0};
    for (const auto& b : branches_) {
        const double u = x - b.center;
        acc += b.coeff * (prefactor * std::exp(-(u * u) / (4.0 * sigma_ * sigma_)));
    }
    return acc;
}

double gaussian_kernel(double di, double dj, double sigma) {
    const double d = di - dj;
    return std::exp(-(d * d) / (8.0 * sigma * sigma));
}

cplx gaussian_overlap(const GaussianPointer& p, const GaussianPointer& q) {
    if (p.sigma() != q.sigma()) {
        throw std::invalid_argument("overlap of pointers with different widths is not supported");
    }
    const lcplx v = quadratic_form(p, q, [](long double, long double) { return 1.0L; });
    return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

double gaussian_mean_x(const GaussianPointer& p) {
    return hermitian_expectation(
        p, [](long double di, long double dj) { return 0.5L * (di + dj); }, "gaussian_mean_x");
}

double gaussian_second_moment(const GaussianPointer& p) {
    const long double s2 = static_cast<long double>(p.sigma()) * p.sigma();
    return hermitian_expectation(
        p,
        [s2](long double di, long double dj) {
            const long double m = 0.5L * (di + dj);
            return s2 + m * m;
        },
        "gaussian_second_moment");
}

double gaussian_variance(const GaussianPointer& p) {
    // Central second moment about the mean; avoids <x^2> - <x>^2 cancellation.
    const double mean = gaussian_mean_x(p);
    return gaussian_second_moment(p.shifted(-mean));
}

double l2_distance(const GaussianPointer& p, const GaussianPointer& q) {
    if (p.sigma() != q.sigma()) {
        throw std::invalid_argument("distance between pointers with different widths is not supported");
    }
    std::vector<GaussianBranch> diff(p.branches().begin(), p.branches().end());
    for (const auto& b : q.branches()) diff.push_back({-b.coeff, b.center});
    const GaussianPointer d = GaussianPointer(p.sigma(), std::move(diff)).merged();
    return std::sqrt(std::max(0.0, d.norm_squared()));
}

GridPointer::GridPointer(double xmin, double xmax, std::vector<cplx> values)
    : xmin_(xmin), xmax_(xmax), values_(std::move(values)) {
    require_finite(xmin_, "grid xmin");
    require_finite(xmax_, "grid xmax");
    if (!(xmax_ > xmin_)) throw std::invalid_argument("grid requires xmax > xmin");
    if (values_.size() < 2) throw std::invalid_argument("grid requires at least two points");
    for (const auto& v : values_) {
        require_finite(v.real(), "grid value");
        require_finite(v.imag(), "grid value");
    }
}

GridPointer GridPointer::sample(const std::function<cplx(double)>& f, double xmin, double xmax,
                                std::size_t n) {
    if (n < 2) throw std::invalid_argument("grid requires at least two points");
    std::vector<cplx> values(n);
    const double dx = (xmax - xmin) / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) values[k] = f(xmin + dx * static_cast<double>(k));
    return GridPointer(xmin, xmax, std::move(values));
}

double GridPointer::x(std::size_t k) const { return xmin_ + dx() * static_cast<double>(k); }

double GridPointer::weight(std::size_t k) const {
    const double h = dx();
    return (k == 0 || k + 1 == values_.size()) ? 0.5 * h : h;
}

double GridPointer::norm_squared() const {
    double acc = 0.0;
    for (std::size_t k = 0; k < values_.size(); ++k) acc += weight(k) * std::norm(values_[k]);
    return acc;
}

GridPointer GridPointer::normalized() const {
    const double n2 = norm_squared();
    if (!(n2 > 0.0)) throw InvariantError("cannot normalize a zero grid state");
    auto out = values_;
    const double s = 1.0 / std::sqrt(n2);
    for (auto& v : out) v *= s;
    return GridPointer(xmin_, xmax_, std::move(out));
}

GridPointer to_grid(const GaussianPointer& p, double xmin, double xmax, std::size_t n) {
    if (p.size() == 0) throw std::invalid_argument("pointer has no branches");
    const double pad = kDefaultGridPadding * p.sigma();
    const double slack = 1e-9 * p.sigma();
    for (const auto& b : p.branches()) {
        if (xmin > b.center - pad + slack || xmax < b.center + pad - slack) {
            throw std::invalid_argument("grid window must cover every branch center by 6 sigma");
        }
    }
    return GridPointer::sample([&p](double x) { return p.evaluate(x); }, xmin, xmax, n).normalized();
}

GridPointer to_grid(const GaussianPointer& p) {
    if (p.size() == 0) throw std::invalid_argument("pointer has no branches");
    const auto [lo, hi] = std::minmax_element(
        p.branches().begin(), p.branches().end(),
        [](const GaussianBranch& a, const GaussianBranch& b) { return a.center < b.center; });
    const double pad = kDefaultGridPadding * p.sigma();
    return to_grid(p, lo->center - pad, hi->center + pad, kDefaultGridPoints);
}

GridMoments grid_moments(const GridPointer& p) {
    const double n2 = p.norm_squared();
    if (!(n2 > 0.0)) throw InvariantError("grid moments of a zero state");
    double m1 = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) m1 += p.weight(k) * p.x(k) * std::norm(p.values()[k]);
    const double mean = m1 / n2;
    double m2 = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        const double u = p.x(k) - mean;
        m2 += p.weight(k) * u * u * std::norm(p.values()[k]);
    }
    return {mean, m2 / n2};
}

QubitPointer::QubitPointer(cplx amp_g, cplx amp_e) : g_(amp_g), e_(amp_e) {
    if (std::abs(std::norm(g_) + std::norm(e_) - 1.0) > 1e-12) {
        throw std::invalid_argument("qubit pointer amplitudes must be normalized");
    }
}

QubitPointer QubitPointer::from_unnormalized(cplx amp_g, cplx amp_e) {
    const double n2 = std::norm(amp_g) + std::norm(amp_e);
    if (!(n2 > kDegenerateNorm)) throw InvariantError("cannot normalize a zero qubit pointer");
    const double s = 1.0 / std::sqrt(n2);
    return QubitPointer(amp_g * s, amp_e * s);
}

QubitPointer QubitPointer::plus() {
    const double h = 1.0 / std::numbers::sqrt2;
    return QubitPointer(cplx{h, 0.0}, cplx{h, 0.0});
}

QubitPointer qubit_rotate(const QubitPointer& p, double theta) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    return QubitPointer(c * p.amp_g() - s * p.amp_e(), s * p.amp_g() + c * p.amp_e());
}

}  // namespace hardy
