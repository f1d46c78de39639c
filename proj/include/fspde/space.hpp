#pragma once

#include <cstddef>
#include <memory>

#include <Eigen/Dense>

namespace fspde {

/// Uniform grid x_j = j/(n-1) on [0,1] with trapezoid weights.
struct SpatialGrid {
    Eigen::VectorXd x;
    Eigen::VectorXd weights;

    static std::shared_ptr<const SpatialGrid> uniform(std::size_t n_points);

    std::size_t size() const noexcept { return static_cast<std::size_t>(x.size()); }

    template <typename DerivedA, typename DerivedB>
    double inner(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) const {
        return (weights.array() * a.array() * b.array()).sum();
    }

    template <typename Derived>
    double norm(const Eigen::MatrixBase<Derived>& a) const {
        return std::sqrt((weights.array() * a.array().square()).sum());
    }
};

using SpatialGridPtr = std::shared_ptr<const SpatialGrid>;

/// Element of L^2(0,1) sampled on a spatial grid.
struct GridFunction {
    SpatialGridPtr grid;
    Eigen::VectorXd values;

    double norm() const { return grid->norm(values); }
};

/// Neumann cosine basis e_0 = 1, e_m(x) = sqrt(2) cos(m pi x), sampled on a grid.
///
/// Trapezoid quadrature on the endpoint-inclusive grid integrates cos(k pi x) exactly
/// for 0 < k < 2(n_x - 1), so the sampled basis is orthonormal to round-off as long as
/// n_modes < n_x.
class SpectralBasis {
public:
    SpectralBasis(SpatialGridPtr grid, std::size_t n_modes);

    std::size_t n_modes() const noexcept { return static_cast<std::size_t>(values_.cols()); }
    const SpatialGridPtr& grid() const noexcept { return grid_; }

    /// n_x by n_modes matrix whose column m samples e_m.
    const Eigen::MatrixXd& matrix() const noexcept { return values_; }
    auto function(std::size_t m) const { return values_.col(static_cast<Eigen::Index>(m)); }

    /// Mode coefficients (v, e_m)_2 for each column of `v`.
    template <typename Derived>
    Eigen::MatrixXd project(const Eigen::MatrixBase<Derived>& v) const {
        return values_.transpose() * (grid_->weights.asDiagonal() * v);
    }

    template <typename Derived>
    Eigen::MatrixXd synthesize(const Eigen::MatrixBase<Derived>& coefficients) const {
        return values_ * coefficients;
    }

    /// max_{i,j} |(e_i, e_j)_2 - delta_ij|.
    double orthonormality_residual() const;

    /// max_m ||e_m||_inf.
    double sup_norm() const { return values_.cwiseAbs().maxCoeff(); }

private:
    SpatialGridPtr grid_;
    Eigen::MatrixXd values_;
};

}  // namespace fspde
