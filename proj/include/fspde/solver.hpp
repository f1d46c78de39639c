#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fspde/fracint.hpp"
#include "fspde/greens.hpp"
#include "fspde/noise.hpp"

namespace fspde {

/// Closed-form Lipschitz scalar function used for g and h.
struct ScalarFunction {
    enum class Kind { Zero, Constant, Affine, Sine, ClippedPoly };

    Kind kind = Kind::Zero;
    double a = 0.0;  // constant value, or intercept of a + b u
    double b = 0.0;  // slope of a + b u
    double amplitude = 0.0;  // amplitude * sin(frequency * u)
    double frequency = 1.0;
    std::vector<double> coefficients;  // p(clamp(u, -clip, clip)), ascending powers
    double clip = 1.0;

    static ScalarFunction zero() { return {}; }
    static ScalarFunction constant(double value);
    static ScalarFunction affine(double intercept, double slope);
    static ScalarFunction sine(double amplitude, double frequency);
    static ScalarFunction clipped_poly(std::vector<double> coefficients, double clip);

    double operator()(double u) const;
    Eigen::VectorXd operator()(const Eigen::VectorXd& u) const;

    double lipschitz() const;
    bool is_zero() const;
    bool is_constant() const;
    bool is_affine() const;
    /// Hoelder exponent of the derivative (0 if the derivative is discontinuous).
    double gamma() const;
    /// Max difference quotient over a sample grid stays below the declared constant.
    bool verify_lipschitz(double lo = -10.0, double hi = 10.0, std::size_t n = 4001) const;

    std::string describe() const;
};

struct NonlinearitySpec {
    ScalarFunction g;
    ScalarFunction h;
    double gamma = 1.0;
};

struct InitialCondition {
    GridFunction phi;
    bool smooth_zero_flux = true;

    /// phi(x) = sum_m c_m cos(m pi x).
    static InitialCondition cosine_series(SpatialGridPtr space, const std::vector<double>& coefficients);
    static InitialCondition constant(SpatialGridPtr space, double value);
};

enum class Provenance { MildPicard, Galerkin };

std::string to_string(Provenance p);

/// u(., t_k) for every grid time; column k holds the state at t_k.
struct SolutionPath {
    TimeGrid grid;
    SpatialGridPtr space;
    Eigen::MatrixXd states;
    Provenance provenance = Provenance::MildPicard;
    std::vector<double> history;  // successive-iterate distances (Picard) or empty
    std::size_t iterations = 0;
    AlphaNorms norms;

    GridFunction state(std::size_t k) const { return {space, states.col(static_cast<Eigen::Index>(k))}; }
};

/// Everything a solve needs; the kernel must carry a basis on the noise's spatial grid.
struct Problem {
    std::shared_ptr<const SpectralKernel> kernel;
    std::shared_ptr<const NoiseField> noise;
    NonlinearitySpec nonlinearity;
    InitialCondition initial;
    double alpha = 0.3;
    double tol = 1e-6;
    std::size_t max_iter = 50;
    double overflow_guard = 1e8;

    const TimeGrid& grid() const { return noise->grid(); }
    void validate() const;
};

/// A(phi)(t_k) = U(t_k, 0) phi, with A(0) = phi.
Eigen::MatrixXd eval_A(const SpectralKernel& kernel, const GridFunction& phi, const TimeGrid& grid);

/// B(u)(t_k) = sum_{l<k} U(t_k, t_l) g(u(t_l)) dt.
Eigen::MatrixXd eval_B(const SpectralKernel& kernel, const Eigen::MatrixXd& u, const TimeGrid& grid,
                       const ScalarFunction& g);

/// C(u)(t_k) = sum_i lambda_i^{1/2} sum_{l<k} U(t_k, t_l)[h(u(t_l)) e_i] (B_i(t_{l+1}) - B_i(t_l)).
Eigen::MatrixXd eval_C(const SpectralKernel& kernel, const Eigen::MatrixXd& u, const ScalarFunction& h,
                       const NoiseField& noise);

/// Picard iteration u <- A + B(u) + C(u) from A(phi), stopped in the alpha,2,T norm.
/// Throws ConvergenceError (with the distance history) after max_iter iterations.
SolutionPath solve_mild_picard(const Problem& problem);

/// || u - (A + B(u) + C(u)) ||_{alpha,2,T}.
double mild_residual(const Problem& problem, const SolutionPath& u);

/// Spectral Galerkin on the kernel's M + 1 modes, semi-implicit Euler with exact noise increments.
/// Throws NumericalError if the L^2 norm exceeds the overflow guard.
SolutionPath solve_galerkin(const Problem& problem);

struct ComparisonReport {
    std::vector<double> distances;  // ||u_a(t_k) - u_b(t_k)||_2
    double sup_distance = 0.0;
    double sup_norm_reference = 0.0;  // sup_t ||u_a(t)||_2
    double relative = 0.0;
};

/// Throws DomainError if the two paths live on different grids.
ComparisonReport compare_solutions(const SolutionPath& a, const SolutionPath& b);

}  // namespace fspde
