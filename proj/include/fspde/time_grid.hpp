#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace fspde {

/// Uniform grid t_k = k T / n_steps on [0, T].
class TimeGrid {
public:
    TimeGrid(double horizon, std::size_t n_steps);

    double horizon() const noexcept { return horizon_; }
    std::size_t n_steps() const noexcept { return n_steps_; }
    std::size_t size() const noexcept { return n_steps_ + 1; }
    double dt() const noexcept { return horizon_ / static_cast<double>(n_steps_); }
    double t(std::size_t k) const noexcept {
        return k == n_steps_ ? horizon_ : horizon_ * static_cast<double>(k) / static_cast<double>(n_steps_);
    }
    Eigen::VectorXd points() const;

    /// Index of a grid time; throws DomainError if `t` is not (within 1e-9 dt) a grid point.
    std::size_t index_of(double t) const;

    /// Grid with n_steps / factor steps over the same horizon.
    TimeGrid coarsened(std::size_t factor) const;

    bool operator==(const TimeGrid& other) const noexcept {
        return horizon_ == other.horizon_ && n_steps_ == other.n_steps_;
    }

private:
    double horizon_;
    std::size_t n_steps_;
};

}  // namespace fspde
