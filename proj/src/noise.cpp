#include "fspde/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fspde {

CovarianceSpec CovarianceSpec::power_law(double c0, double decay, std::size_t n_modes) {
    if (c0 < 0.0) throw DomainError("CovarianceSpec: c0 must be nonnegative");
    if (n_modes == 0) throw DomainError("CovarianceSpec: need at least one mode");
    CovarianceSpec spec;
    spec.c0 = c0;
    spec.decay = decay;
    spec.n_modes = n_modes;
    return spec;
}

CovarianceSpec CovarianceSpec::explicit_list(std::vector<double> values) {
    if (values.empty()) throw DomainError("CovarianceSpec: empty eigenvalue list");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < 0.0) throw DomainError("CovarianceSpec: eigenvalues must be nonnegative");
    }
    CovarianceSpec spec;
    spec.n_modes = values.size();
    spec.explicit_values = std::move(values);
    return spec;
}

double CovarianceSpec::lambda(std::size_t i) const {
    if (i == 0 || i > n_modes) throw DomainError("CovarianceSpec: mode index out of range");
    if (!explicit_values.empty()) return explicit_values[i - 1];
    return c0 * std::pow(static_cast<double>(i), -decay);
}

Eigen::VectorXd CovarianceSpec::sqrt_lambdas() const {
    Eigen::VectorXd out(static_cast<Eigen::Index>(n_modes));
    for (std::size_t i = 1; i <= n_modes; ++i) out[static_cast<Eigen::Index>(i - 1)] = std::sqrt(lambda(i));
    return out;
}

namespace {

// sum_{i > n} i^{-q} via the Euler-Maclaurin tail with three correction terms.
double power_tail(std::size_t n, double q) {
    if (q <= 1.0) return std::numeric_limits<double>::infinity();
    const double a = static_cast<double>(n) + 1.0;
    double s = std::pow(a, 1.0 - q) / (q - 1.0) + 0.5 * std::pow(a, -q) + q / 12.0 * std::pow(a, -q - 1.0) -
               q * (q + 1.0) * (q + 2.0) / 720.0 * std::pow(a, -q - 3.0);
    return s;
}

}  // namespace

double CovarianceSpec::tail_sum() const {
    if (!explicit_values.empty() || c0 == 0.0) return 0.0;
    return c0 * power_tail(n_modes, decay);
}

double CovarianceSpec::sqrt_tail_sum() const {
    if (!explicit_values.empty() || c0 == 0.0) return 0.0;
    return std::sqrt(c0) * power_tail(n_modes, 0.5 * decay);
}

NoiseField::NoiseField(SpatialGridPtr space, CovarianceSpec cov, double hurst, std::vector<FbmPath> mode_paths,
                       std::uint64_t master_seed)
    : basis_(std::move(space), std::max<std::size_t>(mode_paths.size(), 1)),
      cov_(std::move(cov)),
      hurst_(hurst),
      mode_paths_(std::move(mode_paths)),
      master_seed_(master_seed) {
    if (mode_paths_.empty()) throw DomainError("NoiseField: need at least one mode path");
    if (mode_paths_.size() > cov_.n_modes) throw DomainError("NoiseField: more paths than covariance modes");
    for (const auto& p : mode_paths_) {
        if (!(p.grid == mode_paths_.front().grid)) throw DomainError("NoiseField: mode paths must share one grid");
    }
    sqrt_lambdas_ = cov_.sqrt_lambdas().head(static_cast<Eigen::Index>(mode_paths_.size()));
}

Eigen::VectorXd NoiseField::field(std::size_t k) const {
    Eigen::VectorXd amplitudes(static_cast<Eigen::Index>(n_modes()));
    for (std::size_t i = 0; i < n_modes(); ++i) {
        amplitudes[static_cast<Eigen::Index>(i)] = sqrt_lambdas_[static_cast<Eigen::Index>(i)] *
                                                   mode_paths_[i].values[static_cast<Eigen::Index>(k)];
    }
    return basis_.matrix() * amplitudes;
}

Eigen::MatrixXd NoiseField::increments() const {
    const auto n = static_cast<Eigen::Index>(grid().n_steps());
    Eigen::MatrixXd db(static_cast<Eigen::Index>(n_modes()), n);
    for (std::size_t i = 0; i < n_modes(); ++i) {
        const auto& v = mode_paths_[i].values;
        db.row(static_cast<Eigen::Index>(i)) =
            sqrt_lambdas_[static_cast<Eigen::Index>(i)] * (v.tail(n) - v.head(n)).transpose();
    }
    return basis_.matrix() * db;
}

NoiseField NoiseField::restricted(const TimeGrid& coarse, SpatialGridPtr space, std::size_t n_modes) const {
    const TimeGrid& fine = grid();
    if (coarse.horizon() != fine.horizon() || fine.n_steps() % coarse.n_steps() != 0) {
        throw DomainError("NoiseField::restricted: coarse grid must divide the fine grid");
    }
    if (n_modes == 0 || n_modes > this->n_modes()) throw DomainError("NoiseField::restricted: bad mode count");
    const std::size_t stride = fine.n_steps() / coarse.n_steps();
    std::vector<FbmPath> paths;
    paths.reserve(n_modes);
    for (std::size_t i = 0; i < n_modes; ++i) {
        const auto& src = mode_paths_[i];
        Eigen::VectorXd v(static_cast<Eigen::Index>(coarse.size()));
        for (std::size_t k = 0; k < coarse.size(); ++k) {
            v[static_cast<Eigen::Index>(k)] = src.values[static_cast<Eigen::Index>(k * stride)];
        }
        paths.push_back(FbmPath{coarse, src.hurst, std::move(v), src.seed});
    }
    CovarianceSpec cov = cov_;
    if (!cov.explicit_values.empty()) cov.explicit_values.resize(n_modes);
    cov.n_modes = n_modes;
    return NoiseField(std::move(space), std::move(cov), hurst_, std::move(paths), master_seed_);
}

NoiseField NoiseField::scaled(double factor) const {
    if (factor < 0.0) throw DomainError("NoiseField::scaled: negative factor");
    CovarianceSpec cov = cov_;
    cov.c0 *= factor;
    for (double& v : cov.explicit_values) v *= factor;
    return NoiseField(basis_.grid(), std::move(cov), hurst_, mode_paths_, master_seed_);
}

NoiseField build_noise(const CovarianceSpec& cov, SpatialGridPtr space, const TimeGrid& grid, double hurst,
                       std::uint64_t seed, FbmMethod method) {
    if (!cov.sqrt_trace_class()) {
        std::ostringstream msg;
        msg << "Hypothesis (C) violated: sum lambda_i^{1/2} diverges for decay p = " << cov.decay
            << " (need p > 2)";
        throw ConfigError("(C)", msg.str());
    }
    std::vector<FbmPath> paths;
    paths.reserve(cov.n_modes);
    if (method == FbmMethod::Circulant) {
        CirculantFbmSampler sampler(grid, hurst);
        for (std::size_t i = 0; i < cov.n_modes; ++i) paths.push_back(sampler.sample(derive_seed(seed, i)));
    } else {
        DenseFbmSampler sampler(grid, hurst);
        for (std::size_t i = 0; i < cov.n_modes; ++i) paths.push_back(sampler.sample(derive_seed(seed, i)));
    }
    return NoiseField(std::move(space), cov, hurst, std::move(paths), seed);
}

double r_alpha_H(const NoiseField& noise, double alpha) {
    double r = 0.0;
    for (std::size_t i = 0; i < noise.n_modes(); ++i) {
        const double sl = noise.sqrt_lambda(i);
        if (sl == 0.0) continue;
        r += sl * lambda_alpha(noise.mode_path(i), alpha);
    }
    return r;
}

const HypothesisCheck& HypothesisReport::find(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return c;
    }
    throw DomainError("HypothesisReport: unknown hypothesis " + name);
}

bool HypothesisReport::solvable() const {
    return passes("(C)") && passes("(L)") && passes("(K)") && passes("alpha-range");
}

bool HypothesisReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const HypothesisCheck& c) { return c.pass; });
}

HypothesisReport check_hypotheses(const HypothesisInputs& in) {
    HypothesisReport report;
    auto add = [&](std::string name, bool pass, std::string detail) {
        report.checks.push_back({std::move(name), pass, std::move(detail)});
    };
    std::ostringstream s;
    const double d = static_cast<double>(in.dimension);

    s << "sum lambda_i^{1/2} < inf requires decay p > 2; p = " << in.covariance.decay;
    add("(C)", in.covariance.sqrt_trace_class(), s.str());

    add("(L)", in.g_lipschitz && in.h_lipschitz, "g and h must be Lipschitz continuous");
    add("(I)", in.phi_smooth_zero_flux, "initial condition smooth with zero conormal flux");

    s.str("");
    s << "ellipticity k(x,t) >= k_lower > 0; k_lower = " << in.k_lower;
    add("(K)", in.k_lower > 0.0, s.str());

    const bool gamma_ok = in.gamma > 0.0 && in.gamma <= 1.0;
    const double h_min = gamma_ok ? 1.0 / (in.gamma + 1.0) : 1.0;
    s.str("");
    s << "h' Hoelder with exponent gamma in (0,1] and H > 1/(gamma+1) = " << h_min << "; gamma = " << in.gamma
      << ", H = " << in.hurst;
    add("(H_gamma)", gamma_ok && in.hurst > h_min && in.hurst < 1.0, s.str());

    s.str("");
    s << "alpha in (1-H, 1/2) = (" << 1.0 - in.hurst << ", 0.5) with H in (1/2,1); alpha = " << in.alpha
      << ", H = " << in.hurst;
    add("alpha-range", in.hurst > 0.5 && in.hurst < 1.0 && in.alpha > 1.0 - in.hurst && in.alpha < 0.5, s.str());

    const double a_max_a = gamma_ok ? in.gamma / (in.gamma + 1.0) : 0.0;
    s.str("");
    s << "Theorem (a): alpha in (1-H, gamma/(gamma+1)) = (" << 1.0 - in.hurst << ", " << a_max_a << ")";
    add("theorem-a", gamma_ok && in.alpha > 1.0 - in.hurst && in.alpha < a_max_a, s.str());

    report.theorem_b_hurst_min = std::max(h_min, (d + 1.0) / (d + 2.0));
    report.theorem_b_alpha_min = 1.0 - in.hurst;
    report.theorem_b_alpha_max = std::min(a_max_a, 1.0 / (d + 2.0));
    s.str("");
    s << "Theorem (b): h affine, H > " << report.theorem_b_hurst_min << ", alpha in (" << report.theorem_b_alpha_min
      << ", " << report.theorem_b_alpha_max << ")";
    add("theorem-b",
        in.h_affine && in.hurst > report.theorem_b_hurst_min && in.hurst < 1.0 &&
            in.alpha > report.theorem_b_alpha_min && in.alpha < report.theorem_b_alpha_max,
        s.str());
    return report;
}

}  // namespace fspde
