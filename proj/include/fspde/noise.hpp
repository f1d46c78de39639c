#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fspde/fbm.hpp"
#include "fspde/space.hpp"
#include "fspde/time_grid.hpp"

namespace fspde {

/// Eigenvalues lambda_i (i = 1..n_modes) of the noise covariance: either the power law
/// c0 * i^{-p} or an explicit finite list.
struct CovarianceSpec {
    double c0 = 1.0;
    double decay = 3.0;  // p
    std::vector<double> explicit_values;
    std::size_t n_modes = 16;

    static CovarianceSpec power_law(double c0, double decay, std::size_t n_modes);
    static CovarianceSpec explicit_list(std::vector<double> values);

    /// lambda_i for 1-based i.
    double lambda(std::size_t i) const;
    Eigen::VectorXd sqrt_lambdas() const;

    /// sum_{i > n_modes} lambda_i (0 for explicit lists).
    double tail_sum() const;
    /// sum_{i > n_modes} lambda_i^{1/2}; infinite when the power law fails (C).
    double sqrt_tail_sum() const;

    /// Hypothesis (C): sum lambda_i^{1/2} < infinity.
    bool sqrt_trace_class() const { return !explicit_values.empty() || c0 == 0.0 || decay > 2.0; }
};

/// Truncated L^2(0,1)-valued fractional Wiener process
///   W(x,t) = sum_{i<=N} lambda_i^{1/2} e_{i-1}(x) B_i(t).
/// Noise mode i (1-based) is paired with cosine function e_{i-1}, so the first mode is
/// spatially constant.
class NoiseField {
public:
    NoiseField(SpatialGridPtr space, CovarianceSpec cov, double hurst, std::vector<FbmPath> mode_paths,
               std::uint64_t master_seed);

    const TimeGrid& grid() const noexcept { return mode_paths_.front().grid; }
    const SpectralBasis& basis() const noexcept { return basis_; }
    const CovarianceSpec& covariance() const noexcept { return cov_; }
    double hurst() const noexcept { return hurst_; }
    std::uint64_t master_seed() const noexcept { return master_seed_; }
    std::size_t n_modes() const noexcept { return mode_paths_.size(); }

    /// 0-based mode index.
    const FbmPath& mode_path(std::size_t i) const { return mode_paths_.at(i); }
    double sqrt_lambda(std::size_t i) const { return sqrt_lambdas_[static_cast<Eigen::Index>(i)]; }
    const Eigen::VectorXd& sqrt_lambdas() const noexcept { return sqrt_lambdas_; }

    /// W(., t_k) on the spatial grid.
    Eigen::VectorXd field(std::size_t k) const;
    /// W(., t_{k+1}) - W(., t_k); one column per step.
    Eigen::MatrixXd increments() const;

    /// Same realization viewed on a coarser time grid, another spatial grid, and/or fewer modes.
    NoiseField restricted(const TimeGrid& coarse, SpatialGridPtr space, std::size_t n_modes) const;

    /// Copy with every lambda_i scaled by `factor` (same fBm paths).
    NoiseField scaled(double factor) const;

private:
    SpectralBasis basis_;
    CovarianceSpec cov_;
    double hurst_;
    std::vector<FbmPath> mode_paths_;
    std::uint64_t master_seed_;
    Eigen::VectorXd sqrt_lambdas_;
};

enum class FbmMethod { Circulant, Dense };

/// Mode seeds are derive_seed(seed, i), so adding modes never changes existing ones.
NoiseField build_noise(const CovarianceSpec& cov, SpatialGridPtr space, const TimeGrid& grid, double hurst,
                       std::uint64_t seed, FbmMethod method = FbmMethod::Circulant);

/// r_alpha^H = sum_i lambda_i^{1/2} Lambda_alpha(B_i).
double r_alpha_H(const NoiseField& noise, double alpha);

struct HypothesisInputs {
    double hurst = 0.75;
    double alpha = 0.3;
    CovarianceSpec covariance;
    double gamma = 1.0;        // Hoelder exponent of h'; <= 0 means h' is not Hoelder/bounded
    bool h_affine = true;
    bool g_lipschitz = true;
    bool h_lipschitz = true;
    bool phi_smooth_zero_flux = true;
    double k_lower = 1.0;      // ellipticity constant of the diffusivity
    int dimension = 1;
};

struct HypothesisCheck {
    std::string name;
    bool pass;
    std::string detail;
};

struct HypothesisReport {
    std::vector<HypothesisCheck> checks;
    // Part (b) admissible ranges for the given gamma and dimension.
    double theorem_b_hurst_min = 0.0;
    double theorem_b_alpha_min = 0.0;
    double theorem_b_alpha_max = 0.0;

    const HypothesisCheck& find(const std::string& name) const;
    bool passes(const std::string& name) const { return find(name).pass; }
    /// (C), (L), (K) and the alpha range: required for any solve.
    bool solvable() const;
    bool all_pass() const;
};

HypothesisReport check_hypotheses(const HypothesisInputs& inputs);

}  // namespace fspde
