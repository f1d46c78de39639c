#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fspde/common.hpp"
#include "fspde/space.hpp"

namespace fspde {

/// Separable diffusivity k(x,t) = k0 * kappa(t) on D = (0,1).
struct DiffusivitySpec {
    enum class Profile { Constant, Sinusoidal, Tabulated };

    double k0 = 1.0;
    Profile profile = Profile::Constant;
    double amplitude = 0.0;  // sinusoidal: kappa = 1 + amplitude * sin(2 pi frequency t)
    double frequency = 1.0;
    std::vector<double> table_t;      // tabulated: piecewise-linear kappa, constant outside
    std::vector<double> table_kappa;
    // Hoelder exponents of the coefficients; metadata only (smooth profiles admit any beta < 1).
    double beta = 1.0;
    double beta_prime = 1.0;

    static DiffusivitySpec constant(double k0);
    static DiffusivitySpec sinusoidal(double k0, double amplitude, double frequency);
    static DiffusivitySpec tabulated(double k0, std::vector<double> t, std::vector<double> kappa);

    void validate() const;
    bool is_constant() const noexcept { return profile == Profile::Constant; }

    double kappa(double t) const;
    double k(double t) const { return k0 * kappa(t); }
    /// K(t) = int_0^t k0 kappa(r) dr.
    double cumulative(double t) const;
    double lower_bound(double horizon) const;
    double upper_bound(double horizon) const;
};

/// Neumann Green's function of d_t - div(k grad) on (0,1):
///   G(x,t;y,s) = sum_{m<=M} exp(-mu_m (K(t)-K(s))) e_m(x) e_m(y),  mu_m = (m pi)^2.
/// For small diffusion times, and wherever G is small enough for the spectral sum's round-off
/// to matter, the equivalent method-of-images sum is used instead.
class SpectralKernel {
public:
    /// `space` may be null when only pointwise kernel evaluation is needed; apply_U then throws.
    SpectralKernel(DiffusivitySpec diffusivity, SpatialGridPtr space, std::size_t truncation = 256);

    const DiffusivitySpec& diffusivity() const noexcept { return diffusivity_; }
    std::size_t truncation() const noexcept { return truncation_; }
    const Eigen::VectorXd& eigenvalues() const noexcept { return mu_; }
    const SpectralBasis& basis() const;
    bool has_basis() const noexcept { return basis_.has_value(); }

    double cumulative(double t) const { return diffusivity_.cumulative(t); }
    /// Diffusion time below which the image sum replaces the truncated spectral sum.
    double tau_switch() const noexcept { return tau_switch_; }

    double green(double x, double t, double y, double s) const;
    /// G as a function of the diffusion time tau = K(t) - K(s) > 0.
    double green_tau(double x, double y, double tau) const;
    double green_spectral(double x, double y, double tau) const;
    double green_images(double x, double y, double tau) const;

    /// Mode multipliers exp(-mu_m (K(t) - K(s))), t >= s.
    Eigen::VectorXd decay(double t, double s) const;
    GridFunction apply_U(const GridFunction& v, double t, double s) const;

private:
    DiffusivitySpec diffusivity_;
    std::size_t truncation_;
    Eigen::VectorXd mu_;
    std::optional<SpectralBasis> basis_;
    double tau_switch_;
};

struct KernelIdentityReport {
    double symmetry = 0.0;      // max |G(x,t;y,s) - G(y,t;x,s)|
    double semigroup = 0.0;     // max relative |U(t,tau)U(tau,sigma)v - U(t,sigma)v|
    double self_adjoint = 0.0;  // max relative |(Uv,w) - (v,Uw)|
    double mass = 0.0;          // max |int G dy - 1|
    double overlap = 0.0;       // max |spectral - images| / (4 pi tau)^{-1/2} on [tau_switch, 4 tau_switch]
    bool pass = false;
};

inline constexpr double kIdentityTolerance = 1e-10;
inline constexpr double kMassTolerance = 1e-8;
inline constexpr double kOverlapTolerance = 1e-8;

/// Symmetry, semigroup, self-adjointness, mass conservation and representation overlap,
/// on random points drawn from `seed`. Requires a kernel with a spatial basis.
KernelIdentityReport check_kernel_identities(const SpectralKernel& kernel, std::uint64_t seed, double horizon = 1.0);

struct SampleSpec {
    std::size_t n_time = 128;       // time-grid steps on [0, horizon]; refinement doubles it
    std::size_t n_samples = 10000;  // random tuples per grid
    std::uint64_t seed = 20240601;
    double horizon = 1.0;
};

struct GaussianBoundReport {
    double c_prime = 0.0;          // exponent constant 1/(8 k_upper)
    double fitted_c = 0.0;         // smallest c on the base grid
    double fitted_c_refined = 0.0; // same on the 2x refined grid
    double drift = 0.0;
    std::size_t violations = 0;        // refined tuples above fitted_c with c'
    std::size_t violations_loose = 0;  // same with c'/2 (k_upper doubled)
    std::size_t n_tuples = 0;
    bool pass = false;
};

GaussianBoundReport check_gaussian_bound(const SpectralKernel& kernel, const SampleSpec& spec);

/// One kernel inequality checked by sampling: the max of LHS/RHS over tuples on a base
/// grid and on its 2x refinement, plus a log-log slope check of the LHS increment rate.
/// Free interior points (t*, tau*, sigma*) are instantiated where the right side is
/// largest; the midpoint instantiation is reported alongside.
struct InequalityWitness {
    std::string name;
    double max_ratio = 0.0;
    double max_ratio_refined = 0.0;
    double drift = 0.0;
    double max_ratio_midpoint = 0.0;
    double slope = 0.0;
    double slope_target = 0.0;
    bool slope_exact = false;  // true: |slope - target| <= 0.05; false: slope >= target - 0.05
    // Optional second increment direction (mixed differences); NaN when unused.
    double slope2 = std::numeric_limits<double>::quiet_NaN();
    double slope2_target = 0.0;
    bool pass = false;
};

struct Lemma1Report {
    double delta = 0.0;
    std::array<InequalityWitness, 4> inequalities;  // source, target, powered target, powered source
    bool pass = false;
};

/// Ratio drift tolerated under 2x refinement.
inline constexpr double kWitnessDriftTolerance = 0.10;
inline constexpr double kSlopeTolerance = 0.05;

Lemma1Report check_lemma1(const SpectralKernel& kernel, double delta, const SampleSpec& spec);

/// Mixed second time difference of G (t > s > tau > sigma).
InequalityWitness check_second_difference(const SpectralKernel& kernel, double delta, const SampleSpec& spec);

/// |G(x,t;y,tau) - G(x,s;y,tau) - G(x,t;y,sigma) + G(x,s;y,sigma)|; throws unless t > s > tau > sigma.
double green_second_difference(const SpectralKernel& kernel, double x, double y, double t, double s, double tau,
                               double sigma);

}  // namespace fspde
