#include "fspde/fbm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/FFT>

namespace fspde {

namespace {

void check_hurst(double hurst) {
    if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("fBm: Hurst index must lie in (0,1)");
}

}  // namespace

double FbmPath::operator()(double t) const {
    if (t <= 0.0) return values[0];
    const double r = t / grid.dt();
    const auto k = static_cast<std::size_t>(std::floor(r));
    if (k >= grid.n_steps()) return values[static_cast<Eigen::Index>(grid.n_steps())];
    const double w = r - static_cast<double>(k);
    const auto i = static_cast<Eigen::Index>(k);
    return (1.0 - w) * values[i] + w * values[i + 1];
}

DenseFbmSampler::DenseFbmSampler(const TimeGrid& grid, double hurst) : grid_(grid), hurst_(hurst) {
    check_hurst(hurst);
    const auto n = static_cast<Eigen::Index>(grid.n_steps());
    Eigen::MatrixXd cov(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double c = fbm_covariance(grid.t(static_cast<std::size_t>(i + 1)),
                                            grid.t(static_cast<std::size_t>(j + 1)), hurst);
            cov(i, j) = c;
            cov(j, i) = c;
        }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov, Eigen::EigenvaluesOnly);
        std::ostringstream msg;
        msg << "dense fBm sampler: Cholesky factorization failed (n=" << n << ", H=" << hurst
            << ", eigenvalue range [" << eig.eigenvalues().minCoeff() << ", " << eig.eigenvalues().maxCoeff()
            << "])";
        throw NumericalError(msg.str());
    }
    factor_ = llt.matrixL();
}

Eigen::VectorXd DenseFbmSampler::sample_values(Rng& rng) const {
    std::normal_distribution<double> normal;
    const auto n = factor_.rows();
    Eigen::VectorXd z(n);
    for (Eigen::Index i = 0; i < n; ++i) z[i] = normal(rng);
    Eigen::VectorXd values(n + 1);
    values[0] = 0.0;
    values.tail(n).noalias() = factor_.triangularView<Eigen::Lower>() * z;
    return values;
}

FbmPath DenseFbmSampler::sample(std::uint64_t seed) const {
    Rng rng(seed);
    return FbmPath{grid_, hurst_, sample_values(rng), seed};
}

CirculantFbmSampler::CirculantFbmSampler(const TimeGrid& grid, double hurst, double tolerance)
    : grid_(grid), hurst_(hurst) {
    check_hurst(hurst);
    const std::size_t n = grid.n_steps();
    const std::size_t m = 2 * n;
    const double scale = std::pow(grid.dt(), 2.0 * hurst);
    std::vector<double> row(m);
    for (std::size_t j = 0; j <= n; ++j) row[j] = scale * fgn_autocovariance(static_cast<double>(j), hurst);
    for (std::size_t j = 1; j < n; ++j) row[m - j] = row[j];

    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> spectrum;
    fft.fwd(spectrum, row);

    double max_eig = 0.0;
    min_eigenvalue_ = spectrum[0].real();
    for (const auto& c : spectrum) {
        max_eig = std::max(max_eig, c.real());
        min_eigenvalue_ = std::min(min_eigenvalue_, c.real());
    }
    valid_ = min_eigenvalue_ >= -tolerance * max_eig;
    sqrt_eigen_.resize(m);
    for (std::size_t k = 0; k < m; ++k) sqrt_eigen_[k] = std::sqrt(std::max(spectrum[k].real(), 0.0) / m);
}

Eigen::VectorXd CirculantFbmSampler::sample_values(Rng& rng) const {
    const std::size_t m = sqrt_eigen_.size();
    const std::size_t n = m / 2;
    std::normal_distribution<double> normal;
    std::vector<std::complex<double>> y(m);
    y[0] = sqrt_eigen_[0] * normal(rng);
    y[n] = sqrt_eigen_[n] * normal(rng);
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    for (std::size_t k = 1; k < n; ++k) {
        const double re = normal(rng);
        const double im = normal(rng);
        y[k] = sqrt_eigen_[k] * inv_sqrt2 * std::complex<double>(re, im);
        y[m - k] = std::conj(y[k]);
    }
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> x;
    fft.fwd(x, y);
    Eigen::VectorXd values(static_cast<Eigen::Index>(n + 1));
    values[0] = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        values[static_cast<Eigen::Index>(k + 1)] = values[static_cast<Eigen::Index>(k)] + x[k].real();
    }
    return values;
}

FbmPath CirculantFbmSampler::sample(std::uint64_t seed) const {
    if (!valid_) return DenseFbmSampler(grid_, hurst_).sample(seed);
    Rng rng(seed);
    return FbmPath{grid_, hurst_, sample_values(rng), seed};
}

FbmPath sample_fbm_dense(const TimeGrid& grid, double hurst, std::uint64_t seed) {
    return DenseFbmSampler(grid, hurst).sample(seed);
}

FbmPath sample_fbm_circulant(const TimeGrid& grid, double hurst, std::uint64_t seed,
                             SamplerDiagnostics* diagnostics) {
    CirculantFbmSampler sampler(grid, hurst);
    if (diagnostics) {
        diagnostics->fell_back = !sampler.valid();
        diagnostics->min_eigenvalue = sampler.min_eigenvalue();
        diagnostics->message = sampler.valid() ? "" : "negative circulant eigenvalue; used dense sampler";
    }
    return sampler.sample(seed);
}

double weyl_right_derivative(const TimeGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& values,
                             double alpha, double s, double t) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("weyl_right_derivative: alpha must lie in (0,1)");
    if (!(s >= 0.0 && s < t && t <= grid.horizon() * (1.0 + 1e-12))) {
        throw DomainError("weyl_right_derivative: requires 0 <= s < t <= T");
    }
    if (values.size() != static_cast<Eigen::Index>(grid.size())) {
        throw DomainError("weyl_right_derivative: values do not match grid");
    }
    const double h = grid.dt();
    auto interp = [&](double x) {
        const double r = x / h;
        auto k = static_cast<Eigen::Index>(std::floor(r));
        k = std::clamp<Eigen::Index>(k, 0, values.size() - 2);
        const double w = r - static_cast<double>(k);
        return (1.0 - w) * values[k] + w * values[k + 1];
    };
    const double gs = interp(s);
    double integral = 0.0;
    double p = s;
    double gp = gs;
    while (p < t) {
        double q = (std::floor(p / h + 1e-12) + 1.0) * h;
        if (q > t || std::abs(q - t) < 1e-12 * h) q = t;
        const double gq = interp(q);
        const double slope = (gq - gp) / (q - p);
        const double w0 = p - s;
        const double w1 = q - s;
        const double k = gs - gp + slope * w0;
        if (w0 > 0.0) integral += k * (std::pow(w1, alpha - 1.0) - std::pow(w0, alpha - 1.0)) / (alpha - 1.0);
        integral -= slope * (std::pow(w1, alpha) - std::pow(w0, alpha)) / alpha;
        p = q;
        gp = gq;
    }
    const double boundary = (gs - interp(t)) / std::pow(t - s, 1.0 - alpha);
    return (boundary + (1.0 - alpha) * integral) / std::tgamma(alpha);
}

double lambda_alpha(const TimeGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& values, double alpha,
                    std::size_t max_anchors) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("lambda_alpha: alpha must lie in (0,1)");
    const std::size_t n = grid.n_steps();
    if (values.size() != static_cast<Eigen::Index>(n + 1)) throw DomainError("lambda_alpha: values do not match grid");
    const double h = grid.dt();
    std::vector<double> pow_am1(n + 1, 0.0);  // (jh)^{alpha-1}
    std::vector<double> pow_a(n + 1, 0.0);    // (jh)^{alpha}
    for (std::size_t j = 1; j <= n; ++j) {
        const double w = static_cast<double>(j) * h;
        pow_a[j] = std::pow(w, alpha);
        pow_am1[j] = pow_a[j] / w;
    }
    const std::size_t stride = std::max<std::size_t>(1, (n + max_anchors - 1) / std::max<std::size_t>(max_anchors, 1));
    const auto g = [&](std::size_t k) { return values[static_cast<Eigen::Index>(k)]; };
    double sup = 0.0;
    for (std::size_t a = 0; a < n; a += stride) {
        const double ga = g(a);
        double integral = 0.0;
        for (std::size_t b = a + 1; b <= n; ++b) {
            const std::size_t j0 = b - 1 - a;
            const std::size_t j1 = b - a;
            const double slope = (g(b) - g(b - 1)) / h;
            if (j0 > 0) {
                const double k = ga - g(b - 1) + slope * static_cast<double>(j0) * h;
                integral += k * (pow_am1[j1] - pow_am1[j0]) / (alpha - 1.0);
            }
            integral -= slope * (pow_a[j1] - pow_a[j0]) / alpha;
            // (t-s)^{1-alpha} = (j1 h) / (j1 h)^alpha
            const double boundary = (ga - g(b)) * pow_a[j1] / (static_cast<double>(j1) * h);
            sup = std::max(sup, std::abs(boundary + (1.0 - alpha) * integral));
        }
    }
    return sup / (std::tgamma(alpha) * std::tgamma(1.0 - alpha));
}

}  // namespace fspde
