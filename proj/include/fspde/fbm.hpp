#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fspde/common.hpp"
#include "fspde/time_grid.hpp"

namespace fspde {

/// E[B^H(s) B^H(t)] for standard fractional Brownian motion.
template <typename Scalar>
Scalar fbm_covariance(Scalar s, Scalar t, Scalar hurst) {
    if (s < Scalar(0) || t < Scalar(0)) throw DomainError("fbm_covariance: negative time");
    if (!(hurst > Scalar(0) && hurst < Scalar(1))) throw DomainError("fbm_covariance: H must lie in (0,1)");
    using std::abs;
    using std::pow;
    const Scalar two_h = Scalar(2) * hurst;
    return Scalar(0.5) * (pow(t, two_h) + pow(s, two_h) - pow(abs(t - s), two_h));
}

/// Autocovariance of unit-step fractional Gaussian noise at integer lag k.
template <typename Scalar>
Scalar fgn_autocovariance(Scalar lag, Scalar hurst) {
    using std::abs;
    using std::pow;
    const Scalar two_h = Scalar(2) * hurst;
    const Scalar k = abs(lag);
    return Scalar(0.5) * (pow(k + Scalar(1), two_h) - Scalar(2) * pow(k, two_h) + pow(abs(k - Scalar(1)), two_h));
}

/// One scalar fBm trajectory sampled on a uniform grid, starting at the origin.
struct FbmPath {
    TimeGrid grid;
    double hurst;
    Eigen::VectorXd values;
    std::uint64_t seed;

    /// Piecewise-linear interpolant of the samples.
    double operator()(double t) const;
};

/// Exact sampler via Cholesky factorization of the covariance of (B(t_1),...,B(t_n)).
/// The factor is computed once; each call to `sample` costs O(n^2).
class DenseFbmSampler {
public:
    DenseFbmSampler(const TimeGrid& grid, double hurst);

    FbmPath sample(std::uint64_t seed) const;
    Eigen::VectorXd sample_values(Rng& rng) const;

    const TimeGrid& grid() const noexcept { return grid_; }
    double hurst() const noexcept { return hurst_; }

private:
    TimeGrid grid_;
    double hurst_;
    Eigen::MatrixXd factor_;
};

/// Davies-Harte circulant embedding of fractional Gaussian noise; the path is the
/// cumulative sum of the increments.
class CirculantFbmSampler {
public:
    /// `tolerance` bounds how negative an embedding eigenvalue may be (relative to the
    /// largest) before the sampler declares itself unusable.
    CirculantFbmSampler(const TimeGrid& grid, double hurst, double tolerance = 1e-10);

    bool valid() const noexcept { return valid_; }
    double min_eigenvalue() const noexcept { return min_eigenvalue_; }

    /// Falls back to the dense sampler when the embedding is not nonnegative definite.
    FbmPath sample(std::uint64_t seed) const;
    Eigen::VectorXd sample_values(Rng& rng) const;

private:
    TimeGrid grid_;
    double hurst_;
    bool valid_ = true;
    double min_eigenvalue_ = 0.0;
    std::vector<double> sqrt_eigen_;
};

struct SamplerDiagnostics {
    bool fell_back = false;
    double min_eigenvalue = 0.0;
    std::string message;
};

FbmPath sample_fbm_dense(const TimeGrid& grid, double hurst, std::uint64_t seed);
FbmPath sample_fbm_circulant(const TimeGrid& grid, double hurst, std::uint64_t seed,
                             SamplerDiagnostics* diagnostics = nullptr);

struct WeylParams {
    double alpha;
    std::size_t resolution = 2048;  // trapezoid panels in the regularized variable
};

/// Right-sided Weyl derivative D^{1-alpha}_{t-} g_{t-}(s) of a callable path by quadrature.
///
/// The singular part (1-alpha) * int_s^t (g(s)-g(y)) (y-s)^{alpha-2} dy is taken in the
/// variable u = (y-s)^alpha, where it becomes (1/alpha) int (g(s)-g(s+u^{1/alpha})) u^{-1/alpha} du
/// with a bounded integrand for Lipschitz g. The u = 0 value is extrapolated linearly.
template <typename Path>
double weyl_right_derivative(const Path& g, const WeylParams& params, double s, double t) {
    const double alpha = params.alpha;
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("weyl_right_derivative: alpha must lie in (0,1)");
    if (!(s < t)) throw DomainError("weyl_right_derivative: requires s < t");
    const std::size_t m = std::max<std::size_t>(params.resolution, 4);
    const double gs = g(s);
    const double u_max = std::pow(t - s, alpha);
    const double du = u_max / static_cast<double>(m);
    const double inv_alpha = 1.0 / alpha;
    // Divide by the representable step y - s so the difference quotient does not cancel.
    auto integrand = [&](double u) {
        const double y = s + std::pow(u, inv_alpha);
        return y > s ? (gs - g(y)) / (y - s) : 0.0;
    };
    std::vector<double> f(m + 1);
    for (std::size_t k = 1; k <= m; ++k) f[k] = integrand(static_cast<double>(k) * du);
    f[0] = 2.0 * f[1] - f[2];
    double trap = 0.5 * (f[0] + f[m]);
    for (std::size_t k = 1; k < m; ++k) trap += f[k];
    const double singular = trap * du * inv_alpha;
    const double boundary = (gs - g(t)) / std::pow(t - s, 1.0 - alpha);
    return (boundary + (1.0 - alpha) * singular) / std::tgamma(alpha);
}

/// Weyl derivative of the piecewise-linear interpolant of grid samples, integrated exactly
/// segment by segment.
double weyl_right_derivative(const TimeGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& values,
                             double alpha, double s, double t);

inline double weyl_right_derivative(const FbmPath& path, double alpha, double s, double t) {
    return weyl_right_derivative(path.grid, path.values, alpha, s, t);
}

/// Lambda_alpha(g) = sup_{s<t} |D^{1-alpha}_{t-} g_{t-}(s)| / Gamma(1-alpha), with the sup
/// taken over grid pairs. At most `max_anchors` left endpoints s are used (uniform stride).
double lambda_alpha(const TimeGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& values, double alpha,
                    std::size_t max_anchors = 512);

inline double lambda_alpha(const FbmPath& path, double alpha, std::size_t max_anchors = 512) {
    return lambda_alpha(path.grid, path.values, alpha, max_anchors);
}

}  // namespace fspde
