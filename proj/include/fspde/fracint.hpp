#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "fspde/noise.hpp"
#include "fspde/space.hpp"
#include "fspde/time_grid.hpp"

namespace fspde {

/// Scalar path sampled on a uniform time grid.
struct ScalarPath {
    TimeGrid grid;
    Eigen::VectorXd values;
};

struct YoungResult {
    double value = 0.0;           // left-point sum on the finest grid
    double error_estimate = 0.0;  // |S_h - S_2h| / (2^rate - 1)
    double observed_rate = 0.0;   // fitted decay rate of successive differences
    std::vector<double> level_sums;  // coarsest first
};

/// Left-point Riemann-Stieltjes sum of f against g over steps [0, k_end).
template <typename DerivedF, typename DerivedG>
double riemann_stieltjes(const Eigen::MatrixBase<DerivedF>& f, const Eigen::MatrixBase<DerivedG>& g,
                         std::size_t k_end, std::size_t stride = 1) {
    double acc = 0.0;
    for (std::size_t k = 0; k + stride <= k_end; k += stride) {
        const auto i = static_cast<Eigen::Index>(k);
        acc += f[i] * (g[i + static_cast<Eigen::Index>(stride)] - g[i]);
    }
    return acc;
}

/// int_0^T f dg as the limit of left-point sums under dyadic refinement. Uses up to
/// `levels` nested grids (strides 2^{levels-1}, ..., 1). Throws DomainError on mismatched grids.
YoungResult young_integral_scalar(const ScalarPath& f, const ScalarPath& g, std::size_t levels = 5);

/// Operator-valued integrand: apply(k, i) returns F(t_k) e_i on the spatial grid, where
/// e_i is the basis function paired with noise mode i (0-based).
struct OperatorPath {
    TimeGrid grid;
    SpatialGridPtr space;
    std::size_t n_modes = 0;
    std::function<Eigen::VectorXd(std::size_t k, std::size_t i)> apply;
};

/// Random smooth integrand: F(t) e_i = sum_{m<4} a_{im}(t) cos(m pi x) with
/// a_{im}(t) = c0 + c1 t + c2 sin(2 pi f t + psi), coefficients drawn from `seed`.
OperatorPath random_smooth_operator(const TimeGrid& grid, SpatialGridPtr space, std::size_t n_modes,
                                   std::uint64_t seed);

/// sum_i lambda_i^{1/2} int_0^t F(s) e_i dB_i(s), left-point sums on the noise grid.
GridFunction vector_young_integral(const OperatorPath& F, const NoiseField& noise, double t);

/// Matrix of weighted L^2 distances between the columns of `states`.
Eigen::MatrixXd pairwise_distances(const Eigen::MatrixXd& states, const Eigen::VectorXd& weights);

/// Column norms of `states` in the weighted L^2 sense.
Eigen::VectorXd column_norms(const Eigen::MatrixXd& states, const Eigen::VectorXd& weights);

/// Inner singular integral I(t_k) = int_0^{t_k} d(t_k, r) (t_k - r)^{-alpha-1} dr for every node,
/// with d interpolated linearly between nodes and integrated exactly against the kernel.
Eigen::VectorXd increment_integrals(const Eigen::VectorXd& times, const Eigen::MatrixXd& distances, double alpha);

struct AlphaNorms {
    double alpha = 0.0;
    double norm_alpha_1 = 0.0;
    double norm_alpha_2_T = 0.0;
    double sup_norm = 0.0;
};

/// ||f||_{alpha,1} = int_0^T ( |f(s)| s^{-alpha} + int_0^s |f(s)-f(r)| (s-r)^{-alpha-1} dr ) ds
/// for a path sampled at increasing `times` (first node 0); columns of `states` are f(t_k).
double norm_alpha_1(const Eigen::VectorXd& times, const Eigen::MatrixXd& states, const Eigen::VectorXd& weights,
                    double alpha);

/// ||u||_{alpha,2,T} = ( sup_t |u(t)|^2 + int_0^T ( int_0^t |u(t)-u(r)| (t-r)^{-alpha-1} dr )^2 dt )^{1/2}.
double norm_alpha_2_T(const Eigen::VectorXd& times, const Eigen::MatrixXd& states, const Eigen::VectorXd& weights,
                      double alpha);

AlphaNorms alpha_norms(const Eigen::VectorXd& times, const Eigen::MatrixXd& states, const Eigen::VectorXd& weights,
                       double alpha);

/// Same norms for paths on a uniform time grid and spatial grid.
AlphaNorms alpha_norms(const TimeGrid& grid, const SpatialGrid& space, const Eigen::MatrixXd& states, double alpha);

/// Nodes T (k/n)^grading, k = 0..n, clustered at s = 0.
Eigen::VectorXd graded_nodes(double horizon, std::size_t n, double grading = 2.0);

using PathFunction = std::function<Eigen::VectorXd(double)>;

/// Norms of a path given as a function of time, evaluated on a graded mesh.
double norm_alpha_1(const PathFunction& f, const SpatialGrid& space, double horizon, double alpha,
                    std::size_t n = 1024, double grading = 2.0);
double norm_alpha_2_T(const PathFunction& u, const SpatialGrid& space, double horizon, double alpha,
                      std::size_t n = 1024, double grading = 2.0);

/// Schwarz constant c(T, alpha) with ||.||_{alpha,1} <= c ||.||_{alpha,2,T}.
double alpha_norm_embedding_constant(double horizon, double alpha);

struct BoundReport {
    double lhs = 0.0;       // || sum_i lambda_i^{1/2} int F e_i dB_i ||_2
    double rhs = 0.0;       // r_alpha^H sup_i ||F e_i||_{alpha,1}
    double r = 0.0;         // r_alpha^H
    double sup_norm = 0.0;  // sup_i ||F e_i||_{alpha,1}
    bool pass = false;
};

/// Relative slack allowed in numerical inequality checks.
inline constexpr double kInequalitySlack = 0.01;

/// sup_i ||F(.) e_i||_{alpha,1} over the modes of F.
double operator_norm_alpha_1(const OperatorPath& F, double alpha);

/// Checks |int_0^T F dW| <= r_alpha^H sup_i ||F(.) e_i||_{alpha,1}.
BoundReport check_bound_i(const OperatorPath& F, const NoiseField& noise, double alpha);

/// Same check with r_alpha^H and the operator norm supplied (both independent of the other argument).
BoundReport check_bound_i(const OperatorPath& F, const NoiseField& noise, double r_alpha, double sup_norm);

}  // namespace fspde
