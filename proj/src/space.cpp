#include "fspde/space.hpp"

#include <cmath>

#include "fspde/common.hpp"

namespace fspde {

std::shared_ptr<const SpatialGrid> SpatialGrid::uniform(std::size_t n_points) {
    if (n_points < 3) throw DomainError("SpatialGrid: need at least 3 points");
    auto grid = std::make_shared<SpatialGrid>();
    const auto n = static_cast<Eigen::Index>(n_points);
    const double h = 1.0 / static_cast<double>(n - 1);
    grid->x = Eigen::VectorXd::LinSpaced(n, 0.0, 1.0);
    grid->weights = Eigen::VectorXd::Constant(n, h);
    grid->weights[0] = 0.5 * h;
    grid->weights[n - 1] = 0.5 * h;
    return grid;
}

SpectralBasis::SpectralBasis(SpatialGridPtr grid, std::size_t n_modes) : grid_(std::move(grid)) {
    if (!grid_) throw DomainError("SpectralBasis: null grid");
    if (n_modes == 0) throw DomainError("SpectralBasis: need at least one mode");
    if (n_modes >= grid_->size()) {
        throw DomainError("SpectralBasis: n_modes must be below n_x to stay orthonormal on the grid");
    }
    const auto nx = static_cast<Eigen::Index>(grid_->size());
    const auto nm = static_cast<Eigen::Index>(n_modes);
    values_.resize(nx, nm);
    values_.col(0).setOnes();
    const double root2 = std::sqrt(2.0);
    for (Eigen::Index m = 1; m < nm; ++m) {
        values_.col(m) = root2 * (static_cast<double>(m) * M_PI * grid_->x.array()).cos();
    }
}

double SpectralBasis::orthonormality_residual() const {
    const Eigen::MatrixXd gram = values_.transpose() * grid_->weights.asDiagonal() * values_;
    return (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

}  // namespace fspde
