#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "fspde/greens.hpp"
#include "fspde/noise.hpp"
#include "fspde/solver.hpp"

namespace fspde {

struct HolderBounds {
    double main = 0.0;           // min(1/2 - alpha, beta / 2)
    double constant_h = 0.0;     // beta / 2
    double factorization = 0.0;  // min(2 / (d + 2), beta / 2)
    double applicable = 0.0;     // the bound matching the h flags
};

struct HFlags {
    bool constant = false;
    bool affine = true;
};

/// Suprema of the admissible temporal Hoelder exponents (open intervals).
/// Throws DomainError for alpha outside (0, 1/2), beta outside (0, 1], H outside (0, 1),
/// gamma outside (0, 1] or d < 1.
HolderBounds theoretical_holder_bound(double alpha, double beta, double hurst, double gamma, int d, HFlags flags);

struct LagSpec {
    enum class Statistic { Median, Max };

    std::size_t min_steps = 4;    // smallest lag in time steps
    double max_fraction = 0.25;   // largest lag as a fraction of T
    std::size_t n_lags = 12;      // geometric lags, deduplicated after rounding
    Statistic statistic = Statistic::Median;
};

struct HolderReport {
    double theta = 0.0;      // log-log slope
    double r2 = 0.0;
    double prefactor = 0.0;  // exp(intercept): fitted R in |u(t+l) - u(t)| ~ R l^theta
    double lag_min = 0.0;
    double lag_max = 0.0;
    std::vector<double> lags;
    std::vector<double> increments;  // statistic per lag
    bool undefined_slope = false;
    double bound = 0.0;      // theoretical sup, set by the caller (0 if unused)
    bool pass = false;       // theta >= 0.9 * bound when a bound is set
};

/// Regression estimate of the temporal Hoelder exponent of t -> u(t) in L^2.
/// Requires at least 64 time points; a constant path yields undefined_slope = true.
HolderReport estimate_holder(const TimeGrid& grid, const SpatialGrid& space, const Eigen::MatrixXd& states,
                             const LagSpec& lags = {});
HolderReport estimate_holder(const SolutionPath& u, const LagSpec& lags = {});

/// Fraction of the bound an estimate must reach to count as consistent with it.
inline constexpr double kHolderBoundFraction = 0.9;

struct FactorizationReport {
    double epsilon = 0.0;
    double prefactor = 0.0;      // sin(epsilon pi) / pi
    double sup_difference = 0.0;
    double sup_reference = 0.0;  // sup_t ||C(u)(t)||_2
    double relative = 0.0;
    std::vector<double> differences;  // ||C_hat(t_k) - C(u)(t_k)||_2
};

inline double factorization_prefactor(double epsilon) { return std::sin(epsilon * M_PI) / M_PI; }

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(std::size_t n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

/// Rebuilds C(u) from the auxiliary process
///   Y(t) = sum_i lambda_i^{1/2} int_0^t (t - r)^{-eps} U(t, r)[h(u(r)) e_i] dB_i(r)
/// as (sin(eps pi)/pi) int_0^t (t - r)^{eps - 1} U(t, r) Y(r) dr and compares with eval_C.
/// Throws DomainError unless epsilon lies in (0, 1/2).
FactorizationReport factorization_reconstruct(const SpectralKernel& kernel, const Eigen::MatrixXd& u,
                                              const ScalarFunction& h, const NoiseField& noise, double epsilon);

}  // namespace fspde
