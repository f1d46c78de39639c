#include "fspde/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fspde/common.hpp"
#include "fspde/stats.hpp"

namespace fspde {

HolderBounds theoretical_holder_bound(double alpha, double beta, double hurst, double gamma, int d, HFlags flags) {
    if (!(alpha > 0.0 && alpha < 0.5)) throw DomainError("holder bound: alpha must lie in (0, 1/2)");
    if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("holder bound: beta must lie in (0, 1]");
    if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("holder bound: H must lie in (0, 1)");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw DomainError("holder bound: gamma must lie in (0, 1]");
    if (d < 1) throw DomainError("holder bound: dimension must be >= 1");
    HolderBounds b;
    b.main = std::min(0.5 - alpha, 0.5 * beta);
    b.constant_h = 0.5 * beta;
    b.factorization = std::min(2.0 / (d + 2.0), 0.5 * beta);
    b.applicable = flags.constant ? b.constant_h : b.main;
    return b;
}

HolderReport estimate_holder(const TimeGrid& grid, const SpatialGrid& space, const Eigen::MatrixXd& states,
                             const LagSpec& spec) {
    if (grid.size() < 64) throw DomainError("estimate_holder: need at least 64 time points");
    if (static_cast<std::size_t>(states.cols()) != grid.size() ||
        static_cast<std::size_t>(states.rows()) != space.size()) {
        throw DomainError("estimate_holder: state matrix does not match the grids");
    }
    const std::size_t n = grid.n_steps();
    const std::size_t lo = std::max<std::size_t>(1, spec.min_steps);
    const auto hi = static_cast<std::size_t>(std::floor(spec.max_fraction * static_cast<double>(n)));
    if (hi < lo || spec.n_lags < 2) throw DomainError("estimate_holder: empty lag range");

    std::vector<std::size_t> steps;
    for (std::size_t j = 0; j < spec.n_lags; ++j) {
        const double f = static_cast<double>(j) / static_cast<double>(spec.n_lags - 1);
        const auto s = static_cast<std::size_t>(
            std::lround(static_cast<double>(lo) * std::pow(static_cast<double>(hi) / static_cast<double>(lo), f)));
        if (steps.empty() || s != steps.back()) steps.push_back(s);
    }

    HolderReport rep;
    rep.lag_min = static_cast<double>(steps.front()) * grid.dt();
    rep.lag_max = static_cast<double>(steps.back()) * grid.dt();
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t s : steps) {
        const auto len = static_cast<Eigen::Index>(n + 1 - s);
        const Eigen::MatrixXd diff = states.rightCols(len) - states.leftCols(len);
        const Eigen::VectorXd norms = (space.weights.asDiagonal() * diff.cwiseAbs2()).colwise().sum().cwiseSqrt();
        const double stat = spec.statistic == LagSpec::Statistic::Median
                                ? stats::median(std::vector<double>(norms.data(), norms.data() + norms.size()))
                                : norms.maxCoeff();
        const double lag = static_cast<double>(s) * grid.dt();
        rep.lags.push_back(lag);
        rep.increments.push_back(stat);
        if (stat > 0.0) {
            lx.push_back(std::log(lag));
            ly.push_back(std::log(stat));
        }
    }
    if (lx.size() < 2) {
        rep.undefined_slope = true;
        rep.theta = std::numeric_limits<double>::quiet_NaN();
        return rep;
    }
    const auto fit = stats::fit_line(lx, ly);
    rep.theta = fit.slope;
    rep.r2 = fit.r2;
    rep.prefactor = std::exp(fit.intercept);
    return rep;
}

HolderReport estimate_holder(const SolutionPath& u, const LagSpec& lags) {
    return estimate_holder(u.grid, *u.space, u.states, lags);
}

void gauss_legendre(std::size_t n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
    if (n == 0) throw DomainError("gauss_legendre: need at least one node");
    // Golub-Welsch: eigen-decomposition of the Jacobi matrix of the Legendre recurrence.
    const auto m = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index k = 1; k < m; ++k) {
        const double b = static_cast<double>(k) / std::sqrt(4.0 * static_cast<double>(k * k) - 1.0);
        J(k, k - 1) = b;
        J(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    nodes = es.eigenvalues();
    weights = 2.0 * es.eigenvectors().row(0).transpose().cwiseAbs2();
}

namespace {

constexpr std::size_t kQuadratureNodes = 16;

struct CellQuadrature {
    Eigen::VectorXd x;  // offsets s in [0, h] from the left cell end
    Eigen::VectorXd w;
};

// Composite rule on [0, h] for the smooth far cells.
CellQuadrature far_rule(double h, const Eigen::VectorXd& gx, const Eigen::VectorXd& gw) {
    return {(0.5 * h * (gx.array() + 1.0)).matrix(), 0.5 * h * gw};
}

// Rule for the cell ending at t: int_0^h (h - s)^{eps-1} F(s) ds = (1/eps) int_0^{h^eps} F(h - w^{1/eps}) dw.
// Kernel weights are folded in, so callers must not multiply by (t - r)^{eps-1} again.
CellQuadrature near_rule(double h, double eps, const Eigen::VectorXd& gx, const Eigen::VectorXd& gw) {
    const double top = std::pow(h, eps);
    CellQuadrature q;
    q.x.resize(gx.size());
    q.w.resize(gx.size());
    for (Eigen::Index j = 0; j < gx.size(); ++j) {
        const double w = 0.5 * top * (gx[j] + 1.0);
        q.x[j] = h - std::pow(w, 1.0 / eps);
        q.w[j] = 0.5 * top * gw[j] / eps;
    }
    return q;
}

}  // namespace

FactorizationReport factorization_reconstruct(const SpectralKernel& kernel, const Eigen::MatrixXd& u,
                                              const ScalarFunction& h, const NoiseField& noise, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 0.5)) throw DomainError("factorization: epsilon must lie in (0, 1/2)");
    const TimeGrid& grid = noise.grid();
    const auto& basis = kernel.basis();
    const auto& space = *basis.grid();
    const Eigen::VectorXd& mu = kernel.eigenvalues();
    const auto n_modes = static_cast<Eigen::Index>(basis.n_modes());
    const auto n_t = static_cast<Eigen::Index>(grid.size());
    const double dt = grid.dt();

    FactorizationReport rep;
    rep.epsilon = epsilon;
    rep.prefactor = factorization_prefactor(epsilon);

    const Eigen::MatrixXd C = eval_C(kernel, u, h, noise);

    // Sources p_l = P(h(u_l) dW_l) in mode space.
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n_modes, n_t - 1);
    if (!h.is_zero()) {
        const Eigen::MatrixXd dW = noise.increments();
        for (Eigen::Index l = 0; l + 1 < n_t; ++l) {
            p.col(l) = basis.project(h(Eigen::VectorXd(u.col(l))).cwiseProduct(dW.col(l))).col(0);
        }
    }
    std::vector<double> K(static_cast<std::size_t>(n_t));
    for (Eigen::Index k = 0; k < n_t; ++k) K[static_cast<std::size_t>(k)] = kernel.cumulative(grid.t(k));

    // Y(t_k) = sum_{l<k} (t_k - t_l)^{-eps} U(t_k, t_l) p_l.
    Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(n_modes, n_t);
    for (Eigen::Index k = 1; k < n_t; ++k) {
        for (Eigen::Index l = 0; l < k; ++l) {
            const double tau = K[static_cast<std::size_t>(k)] - K[static_cast<std::size_t>(l)];
            const double w = std::pow(grid.t(k) - grid.t(l), -epsilon);
            Y.col(k).array() += w * (-mu.array() * tau).exp() * p.col(l).array();
        }
    }

    // C_hat(t_k) = pref sum_{m<k} int_{t_m}^{t_{m+1}} (t_k - r)^{eps-1} U(t_k, r) Y(r) dr, Y linear per cell.
    Eigen::VectorXd gx;
    Eigen::VectorXd gw;
    gauss_legendre(kQuadratureNodes, gx, gw);
    const CellQuadrature far = far_rule(dt, gx, gw);
    const CellQuadrature near = near_rule(dt, epsilon, gx, gw);

    // Mode weights (W0, W1) of the cell [t_m, t_{m+1}] seen from t_k, for left and right node values.
    auto cell_weights = [&](Eigen::Index k, Eigen::Index m, Eigen::VectorXd& w0, Eigen::VectorXd& w1) {
        const bool adjacent = m + 1 == k;
        const CellQuadrature& q = adjacent ? near : far;
        w0.setZero(n_modes);
        w1.setZero(n_modes);
        for (Eigen::Index j = 0; j < q.x.size(); ++j) {
            const double r = grid.t(m) + q.x[j];
            const double gap = grid.t(k) - r;
            const double tau = kernel.diffusivity().is_constant() ? kernel.diffusivity().k0 * gap
                                                            : K[static_cast<std::size_t>(k)] - kernel.cumulative(r);
            const double kern = adjacent ? 1.0 : std::pow(gap, epsilon - 1.0);
            const double theta = q.x[j] / dt;
            const Eigen::ArrayXd e = (-mu.array() * tau).exp() * (q.w[j] * kern);
            w0.array() += (1.0 - theta) * e;
            w1.array() += theta * e;
        }
    };

    Eigen::MatrixXd Chat = Eigen::MatrixXd::Zero(n_modes, n_t);
    Eigen::VectorXd w0;
    Eigen::VectorXd w1;
    if (kernel.diffusivity().is_constant()) {
        // Weights depend only on k - m.
        std::vector<Eigen::VectorXd> t0(static_cast<std::size_t>(n_t));
        std::vector<Eigen::VectorXd> t1(static_cast<std::size_t>(n_t));
        for (Eigen::Index q = 1; q < n_t; ++q) {
            cell_weights(q, 0, w0, w1);
            t0[static_cast<std::size_t>(q)] = w0;
            t1[static_cast<std::size_t>(q)] = w1;
        }
        for (Eigen::Index k = 1; k < n_t; ++k) {
            for (Eigen::Index m = 0; m < k; ++m) {
                const auto q = static_cast<std::size_t>(k - m);
                Chat.col(k).array() += t0[q].array() * Y.col(m).array() + t1[q].array() * Y.col(m + 1).array();
            }
        }
    } else {
        for (Eigen::Index k = 1; k < n_t; ++k) {
            for (Eigen::Index m = 0; m < k; ++m) {
                cell_weights(k, m, w0, w1);
                Chat.col(k).array() += w0.array() * Y.col(m).array() + w1.array() * Y.col(m + 1).array();
            }
        }
    }
    Chat *= rep.prefactor;

    const Eigen::MatrixXd diff = basis.synthesize(Chat) - C;
    rep.differences.resize(static_cast<std::size_t>(n_t));
    for (Eigen::Index k = 0; k < n_t; ++k) {
        rep.differences[static_cast<std::size_t>(k)] = space.norm(diff.col(k));
        rep.sup_reference = std::max(rep.sup_reference, space.norm(C.col(k)));
    }
    rep.sup_difference = *std::max_element(rep.differences.begin(), rep.differences.end());
    rep.relative = rep.sup_reference > 0.0 ? rep.sup_difference / rep.sup_reference : rep.sup_difference;
    return rep;
}

}  // namespace fspde
