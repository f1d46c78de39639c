#include "fspde/time_grid.hpp"

#include <cmath>
#include <string>

#include "fspde/common.hpp"

namespace fspde {

TimeGrid::TimeGrid(double horizon, std::size_t n_steps) : horizon_(horizon), n_steps_(n_steps) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw DomainError("TimeGrid: horizon must be positive and finite");
    }
    if (n_steps < 2) {
        throw DomainError("TimeGrid: n_steps must be at least 2");
    }
}

Eigen::VectorXd TimeGrid::points() const {
    Eigen::VectorXd p(size());
    for (std::size_t k = 0; k < size(); ++k) p[static_cast<Eigen::Index>(k)] = t(k);
    return p;
}

std::size_t TimeGrid::index_of(double t) const {
    const double r = t / dt();
    const double k = std::round(r);
    if (k < 0 || k > static_cast<double>(n_steps_) || std::abs(r - k) > 1e-9) {
        throw DomainError("TimeGrid: t = " + std::to_string(t) + " is not a grid point");
    }
    return static_cast<std::size_t>(k);
}

TimeGrid TimeGrid::coarsened(std::size_t factor) const {
    if (factor == 0 || n_steps_ % factor != 0) {
        throw DomainError("TimeGrid: coarsening factor must divide n_steps");
    }
    return TimeGrid(horizon_, n_steps_ / factor);
}

}  // namespace fspde
