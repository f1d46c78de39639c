#include "fspde/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fspde/common.hpp"

namespace fspde {

ScalarFunction ScalarFunction::constant(double value) {
    ScalarFunction f;
    f.kind = Kind::Constant;
    f.a = value;
    return f;
}

ScalarFunction ScalarFunction::affine(double intercept, double slope) {
    ScalarFunction f;
    f.kind = Kind::Affine;
    f.a = intercept;
    f.b = slope;
    return f;
}

ScalarFunction ScalarFunction::sine(double amplitude, double frequency) {
    ScalarFunction f;
    f.kind = Kind::Sine;
    f.amplitude = amplitude;
    f.frequency = frequency;
    return f;
}

ScalarFunction ScalarFunction::clipped_poly(std::vector<double> coefficients, double clip) {
    if (!(clip > 0.0)) throw DomainError("clipped polynomial: clip must be positive");
    ScalarFunction f;
    f.kind = Kind::ClippedPoly;
    f.coefficients = std::move(coefficients);
    f.clip = clip;
    return f;
}

double ScalarFunction::operator()(double u) const {
    switch (kind) {
        case Kind::Zero:
            return 0.0;
        case Kind::Constant:
            return a;
        case Kind::Affine:
            return a + b * u;
        case Kind::Sine:
            return amplitude * std::sin(frequency * u);
        case Kind::ClippedPoly: {
            const double v = std::clamp(u, -clip, clip);
            double acc = 0.0;
            for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * v + *it;
            return acc;
        }
    }
    return 0.0;
}

Eigen::VectorXd ScalarFunction::operator()(const Eigen::VectorXd& u) const {
    switch (kind) {
        case Kind::Zero:
            return Eigen::VectorXd::Zero(u.size());
        case Kind::Constant:
            return Eigen::VectorXd::Constant(u.size(), a);
        case Kind::Affine:
            return (a + b * u.array()).matrix();
        default:
            return u.unaryExpr([this](double v) { return (*this)(v); });
    }
}

double ScalarFunction::lipschitz() const {
    switch (kind) {
        case Kind::Zero:
        case Kind::Constant:
            return 0.0;
        case Kind::Affine:
            return std::abs(b);
        case Kind::Sine:
            return std::abs(amplitude * frequency);
        case Kind::ClippedPoly: {
            // sup of |p'| on [-clip, clip] by the triangle inequality.
            double acc = 0.0;
            for (std::size_t j = 1; j < coefficients.size(); ++j) {
                acc += static_cast<double>(j) * std::abs(coefficients[j]) * std::pow(clip, static_cast<double>(j - 1));
            }
            return acc;
        }
    }
    return 0.0;
}

bool ScalarFunction::is_zero() const {
    switch (kind) {
        case Kind::Zero:
            return true;
        case Kind::Constant:
            return a == 0.0;
        case Kind::Affine:
            return a == 0.0 && b == 0.0;
        case Kind::Sine:
            return amplitude == 0.0;
        case Kind::ClippedPoly:
            return std::all_of(coefficients.begin(), coefficients.end(), [](double c) { return c == 0.0; });
    }
    return false;
}

bool ScalarFunction::is_constant() const {
    return kind == Kind::Zero || kind == Kind::Constant || (kind == Kind::Affine && b == 0.0) || is_zero();
}

bool ScalarFunction::is_affine() const { return kind == Kind::Zero || kind == Kind::Constant || kind == Kind::Affine; }

double ScalarFunction::gamma() const {
    switch (kind) {
        case Kind::Zero:
        case Kind::Constant:
        case Kind::Affine:
        case Kind::Sine:
            return 1.0;
        case Kind::ClippedPoly:
            // p'(u) jumps to 0 at |u| = clip unless p is constant.
            return coefficients.size() > 1 ? 0.0 : 1.0;
    }
    return 1.0;
}

bool ScalarFunction::verify_lipschitz(double lo, double hi, std::size_t n) const {
    const double declared = lipschitz();
    const double step = (hi - lo) / static_cast<double>(n - 1);
    double prev = (*this)(lo);
    for (std::size_t j = 1; j < n; ++j) {
        const double cur = (*this)(lo + static_cast<double>(j) * step);
        if (std::abs(cur - prev) > declared * step * (1.0 + 1e-9) + 1e-12) return false;
        prev = cur;
    }
    return true;
}

std::string ScalarFunction::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
        case Kind::Zero:
            os << "zero";
            break;
        case Kind::Constant:
            os << "constant(" << a << ")";
            break;
        case Kind::Affine:
            os << "affine(" << a << ", " << b << ")";
            break;
        case Kind::Sine:
            os << "sine(" << amplitude << ", " << frequency << ")";
            break;
        case Kind::ClippedPoly:
            os << "clipped_poly(deg " << (coefficients.empty() ? 0 : coefficients.size() - 1) << ", clip " << clip
               << ")";
            break;
    }
    return os.str();
}

InitialCondition InitialCondition::cosine_series(SpatialGridPtr space, const std::vector<double>& coefficients) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space->size()));
    for (std::size_t m = 0; m < coefficients.size(); ++m) {
        v += coefficients[m] * (static_cast<double>(m) * M_PI * space->x.array()).cos().matrix();
    }
    return {GridFunction{std::move(space), std::move(v)}, true};
}

InitialCondition InitialCondition::constant(SpatialGridPtr space, double value) {
    const auto n = static_cast<Eigen::Index>(space->size());
    return {GridFunction{std::move(space), Eigen::VectorXd::Constant(n, value)}, true};
}

std::string to_string(Provenance p) { return p == Provenance::MildPicard ? "mild-picard" : "galerkin"; }

void Problem::validate() const {
    if (!kernel || !noise) throw DomainError("problem: kernel and noise are required");
    if (!kernel->has_basis()) throw DomainError("problem: kernel has no spatial basis");
    const auto& space = kernel->basis().grid();
    const auto& noise_space = noise->basis().grid();
    if (space->size() != noise_space->size() || space->x != noise_space->x) {
        throw DomainError("problem: kernel and noise use different spatial grids");
    }
    if (!initial.phi.grid || initial.phi.grid->size() != space->size()) {
        throw DomainError("problem: initial condition lives on another grid");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("problem: alpha must lie in (0, 1)");
    if (!(tol > 0.0) || max_iter == 0) throw DomainError("problem: invalid stopping rule");
}

namespace {

Eigen::VectorXd project(const SpectralBasis& basis, const Eigen::VectorXd& v) { return basis.project(v).col(0); }

void check_states(const SpectralKernel& kernel, const Eigen::MatrixXd& u, const TimeGrid& grid) {
    if (static_cast<std::size_t>(u.cols()) != grid.size() ||
        static_cast<std::size_t>(u.rows()) != kernel.basis().grid()->size()) {
        throw DomainError("solver: state matrix does not match the grids");
    }
}

}  // namespace

Eigen::MatrixXd eval_A(const SpectralKernel& kernel, const GridFunction& phi, const TimeGrid& grid) {
    const auto& basis = kernel.basis();
    const Eigen::VectorXd coeff = project(basis, phi.values);
    Eigen::MatrixXd out(phi.values.size(), static_cast<Eigen::Index>(grid.size()));
    out.col(0) = phi.values;
    Eigen::MatrixXd modes(coeff.size(), static_cast<Eigen::Index>(grid.size() - 1));
    for (std::size_t k = 1; k < grid.size(); ++k) {
        modes.col(static_cast<Eigen::Index>(k - 1)) = kernel.decay(grid.t(k), 0.0).cwiseProduct(coeff);
    }
    out.rightCols(modes.cols()) = basis.synthesize(modes);
    return out;
}

Eigen::MatrixXd eval_B(const SpectralKernel& kernel, const Eigen::MatrixXd& u, const TimeGrid& grid,
                       const ScalarFunction& g) {
    check_states(kernel, u, grid);
    if (g.is_zero()) return Eigen::MatrixXd::Zero(u.rows(), u.cols());
    const auto& basis = kernel.basis();
    const double dt = grid.dt();
    Eigen::MatrixXd modes = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(basis.n_modes()), u.cols());
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        const Eigen::VectorXd src = project(basis, g(Eigen::VectorXd(u.col(kk))));
        modes.col(kk + 1) = kernel.decay(grid.t(k + 1), grid.t(k)).cwiseProduct(modes.col(kk) + dt * src);
    }
    return basis.synthesize(modes);
}

Eigen::MatrixXd eval_C(const SpectralKernel& kernel, const Eigen::MatrixXd& u, const ScalarFunction& h,
                       const NoiseField& noise) {
    const TimeGrid& grid = noise.grid();
    check_states(kernel, u, grid);
    if (h.is_zero()) return Eigen::MatrixXd::Zero(u.rows(), u.cols());
    const auto& basis = kernel.basis();
    const Eigen::MatrixXd dW = noise.increments();
    Eigen::MatrixXd modes = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(basis.n_modes()), u.cols());
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        const Eigen::VectorXd src = project(basis, h(Eigen::VectorXd(u.col(kk))).cwiseProduct(dW.col(kk)));
        modes.col(kk + 1) = kernel.decay(grid.t(k + 1), grid.t(k)).cwiseProduct(modes.col(kk) + src);
    }
    return basis.synthesize(modes);
}

SolutionPath solve_mild_picard(const Problem& problem) {
    problem.validate();
    const TimeGrid& grid = problem.grid();
    const auto& kernel = *problem.kernel;
    const auto& space = kernel.basis().grid();
    const auto& nl = problem.nonlinearity;

    const Eigen::MatrixXd A = eval_A(kernel, problem.initial.phi, grid);
    Eigen::MatrixXd u = A;
    SolutionPath out{grid, space, {}, Provenance::MildPicard, {}, 0, {}};
    for (std::size_t it = 1; it <= problem.max_iter; ++it) {
        Eigen::MatrixXd next = A + eval_B(kernel, u, grid, nl.g) + eval_C(kernel, u, nl.h, *problem.noise);
        if (!next.allFinite()) throw NumericalError("picard: non-finite iterate at iteration " + std::to_string(it));
        const double dist = norm_alpha_2_T(grid.points(), next - u, space->weights, problem.alpha);
        out.history.push_back(dist);
        u = std::move(next);
        if (dist < problem.tol) {
            out.iterations = it;
            out.states = std::move(u);
            out.norms = alpha_norms(grid, *space, out.states, problem.alpha);
            return out;
        }
    }
    throw ConvergenceError("picard: no convergence within " + std::to_string(problem.max_iter) + " iterations",
                           out.history);
}

double mild_residual(const Problem& problem, const SolutionPath& u) {
    problem.validate();
    const TimeGrid& grid = problem.grid();
    const auto& kernel = *problem.kernel;
    const Eigen::MatrixXd image = eval_A(kernel, problem.initial.phi, grid) +
                                  eval_B(kernel, u.states, grid, problem.nonlinearity.g) +
                                  eval_C(kernel, u.states, problem.nonlinearity.h, *problem.noise);
    return norm_alpha_2_T(grid.points(), u.states - image, u.space->weights, problem.alpha);
}

SolutionPath solve_galerkin(const Problem& problem) {
    problem.validate();
    const TimeGrid& grid = problem.grid();
    const auto& kernel = *problem.kernel;
    const auto& basis = kernel.basis();
    const auto& space = basis.grid();
    const auto& nl = problem.nonlinearity;
    const Eigen::VectorXd& mu = kernel.eigenvalues();
    const Eigen::MatrixXd dW = nl.h.is_zero() ? Eigen::MatrixXd() : problem.noise->increments();
    const double dt = grid.dt();

    SolutionPath out{grid, space, {}, Provenance::Galerkin, {}, grid.n_steps(), {}};
    out.states.resize(static_cast<Eigen::Index>(space->size()), static_cast<Eigen::Index>(grid.size()));
    Eigen::VectorXd c = project(basis, problem.initial.phi.values);
    out.states.col(0) = basis.synthesize(c);
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        const Eigen::VectorXd u = out.states.col(kk);
        Eigen::VectorXd rhs = c;
        if (!nl.g.is_zero()) rhs += dt * project(basis, nl.g(u));
        if (!nl.h.is_zero()) rhs += project(basis, nl.h(u).cwiseProduct(dW.col(kk)));
        const double dK = kernel.cumulative(grid.t(k + 1)) - kernel.cumulative(grid.t(k));
        c = rhs.cwiseQuotient((1.0 + mu.array() * dK).matrix());
        out.states.col(kk + 1) = basis.synthesize(c);
        const double n = space->norm(out.states.col(kk + 1));
        if (!std::isfinite(n) || n > problem.overflow_guard) {
            throw NumericalError("galerkin: L2 norm exceeded the overflow guard at step " + std::to_string(k + 1));
        }
    }
    out.norms = alpha_norms(grid, *space, out.states, problem.alpha);
    return out;
}

ComparisonReport compare_solutions(const SolutionPath& a, const SolutionPath& b) {
    if (!(a.grid == b.grid)) throw DomainError("compare_solutions: time grids differ");
    if (!a.space || !b.space || a.space->size() != b.space->size() || a.space->x != b.space->x) {
        throw DomainError("compare_solutions: spatial grids differ");
    }
    ComparisonReport rep;
    const auto& w = a.space->weights;
    const Eigen::VectorXd dist = column_norms(a.states - b.states, w);
    rep.distances.assign(dist.data(), dist.data() + dist.size());
    rep.sup_distance = dist.maxCoeff();
    rep.sup_norm_reference = column_norms(a.states, w).maxCoeff();
    rep.relative = rep.sup_norm_reference > 0.0 ? rep.sup_distance / rep.sup_norm_reference : rep.sup_distance;
    return rep;
}

}  // namespace fspde
