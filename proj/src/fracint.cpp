#include "fspde/fracint.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "fspde/common.hpp"
#include "fspde/stats.hpp"

namespace fspde {

YoungResult young_integral_scalar(const ScalarPath& f, const ScalarPath& g, std::size_t levels) {
    if (!(f.grid == g.grid)) throw DomainError("young_integral_scalar: integrand and integrator grids differ");
    const std::size_t n = f.grid.n_steps();
    if (static_cast<std::size_t>(f.values.size()) != n + 1 || static_cast<std::size_t>(g.values.size()) != n + 1) {
        throw DomainError("young_integral_scalar: path length does not match its grid");
    }
    if (levels == 0) throw DomainError("young_integral_scalar: need at least one level");
    std::size_t usable = 1;
    while (usable < levels && n % (std::size_t{1} << usable) == 0) ++usable;

    YoungResult res;
    for (std::size_t j = 0; j < usable; ++j) {
        const std::size_t stride = std::size_t{1} << (usable - 1 - j);
        res.level_sums.push_back(riemann_stieltjes(f.values, g.values, n, stride));
    }
    res.value = res.level_sums.back();
    if (usable < 2) return res;

    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t j = 1; j < usable; ++j) {
        const double d = std::abs(res.level_sums[j] - res.level_sums[j - 1]);
        if (d > 0.0) {
            lx.push_back(static_cast<double>(j));
            ly.push_back(std::log2(d));
        }
    }
    res.observed_rate = lx.size() >= 2 ? std::clamp(-stats::fit_line(lx, ly).slope, 0.05, 2.0) : 1.0;
    const double last = std::abs(res.level_sums[usable - 1] - res.level_sums[usable - 2]);
    res.error_estimate = last / (std::exp2(res.observed_rate) - 1.0);
    return res;
}

namespace {

bool same_space(const SpatialGrid& a, const SpatialGrid& b) {
    return &a == &b || (a.size() == b.size() && a.x == b.x);
}

}  // namespace

OperatorPath random_smooth_operator(const TimeGrid& grid, SpatialGridPtr space, std::size_t n_modes,
                                   std::uint64_t seed) {
    constexpr Eigen::Index kShapes = 4;
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto n_t = static_cast<Eigen::Index>(grid.size());
    const auto n_i = static_cast<Eigen::Index>(n_modes);

    Eigen::MatrixXd shapes(static_cast<Eigen::Index>(space->size()), kShapes);
    for (Eigen::Index m = 0; m < kShapes; ++m) {
        shapes.col(m) = (static_cast<double>(m) * M_PI * space->x.array()).cos().matrix();
    }
    // coeff(m, i * n_t + k) = a_{im}(t_k)
    auto coeff = std::make_shared<Eigen::MatrixXd>(kShapes, n_i * n_t);
    for (Eigen::Index i = 0; i < n_i; ++i) {
        for (Eigen::Index m = 0; m < kShapes; ++m) {
            const double scale = 1.0 / (1.0 + static_cast<double>(m));
            const double c0 = scale * normal(rng), c1 = scale * normal(rng), c2 = scale * normal(rng);
            const double f = 0.5 + 3.0 * unit(rng);
            const double psi = 2.0 * M_PI * unit(rng);
            for (Eigen::Index k = 0; k < n_t; ++k) {
                const double t = grid.t(static_cast<std::size_t>(k));
                (*coeff)(m, i * n_t + k) = c0 + c1 * t + c2 * std::sin(2.0 * M_PI * f * t + psi);
            }
        }
    }
    auto basis = std::make_shared<Eigen::MatrixXd>(std::move(shapes));
    OperatorPath F{grid, std::move(space), n_modes, {}};
    F.apply = [basis, coeff, n_t](std::size_t k, std::size_t i) -> Eigen::VectorXd {
        return *basis * coeff->col(static_cast<Eigen::Index>(i) * n_t + static_cast<Eigen::Index>(k));
    };
    return F;
}

GridFunction vector_young_integral(const OperatorPath& F, const NoiseField& noise, double t) {
    if (!(F.grid == noise.grid())) throw DomainError("vector_young_integral: time grid mismatch");
    if (!F.space || !same_space(*F.space, *noise.basis().grid())) {
        throw DomainError("vector_young_integral: spatial grid mismatch");
    }
    if (F.n_modes > noise.n_modes()) throw DomainError("vector_young_integral: more modes than the noise carries");
    const std::size_t k_end = F.grid.index_of(t);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(F.space->size()));
    for (std::size_t i = 0; i < F.n_modes; ++i) {
        const auto& b = noise.mode_path(i).values;
        Eigen::VectorXd mode = Eigen::VectorXd::Zero(acc.size());
        for (std::size_t k = 0; k < k_end; ++k) {
            const auto kk = static_cast<Eigen::Index>(k);
            mode += F.apply(k, i) * (b[kk + 1] - b[kk]);
        }
        acc += noise.sqrt_lambda(i) * mode;
    }
    return GridFunction{F.space, std::move(acc)};
}

Eigen::MatrixXd pairwise_distances(const Eigen::MatrixXd& states, const Eigen::VectorXd& weights) {
    const Eigen::Index n = states.cols();
    if (weights.size() != states.rows()) throw DomainError("pairwise_distances: weight/state size mismatch");
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < a; ++b) {
            const double v = std::sqrt((weights.array() * (states.col(a) - states.col(b)).array().square()).sum());
            d(a, b) = v;
            d(b, a) = v;
        }
    }
    return d;
}

Eigen::VectorXd column_norms(const Eigen::MatrixXd& states, const Eigen::VectorXd& weights) {
    if (weights.size() != states.rows()) throw DomainError("column_norms: weight/state size mismatch");
    return (weights.asDiagonal() * states.cwiseAbs2()).colwise().sum().cwiseSqrt().transpose();
}

Eigen::VectorXd increment_integrals(const Eigen::VectorXd& times, const Eigen::MatrixXd& distances, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    const Eigen::Index n = times.size();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (Eigen::Index k = 1; k < n; ++k) {
        // Adjacent cell: d vanishes at r = 0, so d(r) = d_{k-1} r / r_{k-1}.
        const double r_adj = times[k] - times[k - 1];
        double acc = distances(k, k - 1) * std::pow(r_adj, -alpha) / (1.0 - alpha);
        for (Eigen::Index j = 0; j + 1 < k; ++j) {
            const double r_hi = times[k] - times[j];
            const double r_lo = times[k] - times[j + 1];
            const double d_hi = distances(k, j);
            const double d_lo = distances(k, j + 1);
            const double b = (d_hi - d_lo) / (r_hi - r_lo);
            const double a = d_lo - b * r_lo;
            acc += a * (std::pow(r_lo, -alpha) - std::pow(r_hi, -alpha)) / alpha +
                   b * (std::pow(r_hi, 1.0 - alpha) - std::pow(r_lo, 1.0 - alpha)) / (1.0 - alpha);
        }
        out[k] = acc;
    }
    return out;
}

namespace {

void check_path(const Eigen::VectorXd& times, const Eigen::MatrixXd& states, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    if (times.size() < 2 || states.cols() != times.size()) throw DomainError("alpha norm: node/state count mismatch");
    if (times[0] != 0.0) throw DomainError("alpha norm: first node must be 0");
    for (Eigen::Index k = 1; k < times.size(); ++k) {
        if (!(times[k] > times[k - 1])) throw DomainError("alpha norm: nodes must increase");
    }
}

// int over the nodes of a piecewise-linear n(s) against s^{-alpha}, exactly.
double weighted_start_integral(const Eigen::VectorXd& times, const Eigen::VectorXd& values, double alpha) {
    double acc = 0.0;
    const double e1 = 1.0 - alpha;
    const double e2 = 2.0 - alpha;
    for (Eigen::Index j = 0; j + 1 < times.size(); ++j) {
        const double s0 = times[j], s1 = times[j + 1];
        const double b = (values[j + 1] - values[j]) / (s1 - s0);
        const double a = values[j] - b * s0;
        acc += a * (std::pow(s1, e1) - std::pow(s0, e1)) / e1 + b * (std::pow(s1, e2) - std::pow(s0, e2)) / e2;
    }
    return acc;
}

double trapezoid(const Eigen::VectorXd& times, const Eigen::VectorXd& values) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j + 1 < times.size(); ++j) {
        acc += 0.5 * (values[j] + values[j + 1]) * (times[j + 1] - times[j]);
    }
    return acc;
}

}  // namespace

AlphaNorms alpha_norms(const Eigen::VectorXd& times, const Eigen::MatrixXd& states, const Eigen::VectorXd& weights,
                       double alpha) {
    check_path(times, states, alpha);
    const Eigen::VectorXd norms = column_norms(states, weights);
    const Eigen::VectorXd inner = increment_integrals(times, pairwise_distances(states, weights), alpha);
    AlphaNorms out;
    out.alpha = alpha;
    out.sup_norm = norms.maxCoeff();
    out.norm_alpha_1 = weighted_start_integral(times, norms, alpha) + trapezoid(times, inner);
    out.norm_alpha_2_T =
        std::sqrt(out.sup_norm * out.sup_norm + trapezoid(times, inner.cwiseAbs2().eval()));
    return out;
}

double norm_alpha_1(const Eigen::VectorXd& times, const Eigen::MatrixXd& states, const Eigen::VectorXd& weights,
                    double alpha) {
    return alpha_norms(times, states, weights, alpha).norm_alpha_1;
}

double norm_alpha_2_T(const Eigen::VectorXd& times, const Eigen::MatrixXd& states, const Eigen::VectorXd& weights,
                      double alpha) {
    return alpha_norms(times, states, weights, alpha).norm_alpha_2_T;
}

AlphaNorms alpha_norms(const TimeGrid& grid, const SpatialGrid& space, const Eigen::MatrixXd& states, double alpha) {
    return alpha_norms(grid.points(), states, space.weights, alpha);
}

Eigen::VectorXd graded_nodes(double horizon, std::size_t n, double grading) {
    if (n < 1 || !(horizon > 0.0) || !(grading >= 1.0)) throw DomainError("graded_nodes: invalid mesh parameters");
    Eigen::VectorXd t(static_cast<Eigen::Index>(n + 1));
    for (std::size_t k = 0; k <= n; ++k) {
        t[static_cast<Eigen::Index>(k)] = horizon * std::pow(static_cast<double>(k) / static_cast<double>(n), grading);
    }
    return t;
}

namespace {

Eigen::MatrixXd tabulate(const PathFunction& f, const SpatialGrid& space, const Eigen::VectorXd& times) {
    Eigen::MatrixXd states(static_cast<Eigen::Index>(space.size()), times.size());
    for (Eigen::Index k = 0; k < times.size(); ++k) {
        states.col(k) = f(times[k]);
    }
    return states;
}

}  // namespace

double norm_alpha_1(const PathFunction& f, const SpatialGrid& space, double horizon, double alpha, std::size_t n,
                    double grading) {
    const Eigen::VectorXd t = graded_nodes(horizon, n, grading);
    return norm_alpha_1(t, tabulate(f, space, t), space.weights, alpha);
}

double norm_alpha_2_T(const PathFunction& u, const SpatialGrid& space, double horizon, double alpha, std::size_t n,
                      double grading) {
    const Eigen::VectorXd t = graded_nodes(horizon, n, grading);
    return norm_alpha_2_T(t, tabulate(u, space, t), space.weights, alpha);
}

double alpha_norm_embedding_constant(double horizon, double alpha) {
    return std::pow(horizon, 1.0 - alpha) / (1.0 - alpha) + std::sqrt(horizon);
}

double operator_norm_alpha_1(const OperatorPath& F, double alpha) {
    const Eigen::VectorXd times = F.grid.points();
    double sup = 0.0;
    Eigen::MatrixXd states(static_cast<Eigen::Index>(F.space->size()), times.size());
    for (std::size_t i = 0; i < F.n_modes; ++i) {
        for (std::size_t k = 0; k < F.grid.size(); ++k) states.col(static_cast<Eigen::Index>(k)) = F.apply(k, i);
        sup = std::max(sup, norm_alpha_1(times, states, F.space->weights, alpha));
    }
    return sup;
}

BoundReport check_bound_i(const OperatorPath& F, const NoiseField& noise, double alpha) {
    return check_bound_i(F, noise, r_alpha_H(noise, alpha), operator_norm_alpha_1(F, alpha));
}

BoundReport check_bound_i(const OperatorPath& F, const NoiseField& noise, double r_alpha, double sup_norm) {
    BoundReport rep;
    rep.lhs = vector_young_integral(F, noise, F.grid.horizon()).norm();
    rep.r = r_alpha;
    rep.sup_norm = sup_norm;
    rep.rhs = rep.r * rep.sup_norm;
    rep.pass = rep.lhs <= (1.0 + kInequalitySlack) * rep.rhs || rep.lhs == 0.0;
    return rep;
}

}  // namespace fspde
