#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "fspde/analysis.hpp"

using namespace fspde;

TEST(HolderBound, Formulas) {
    const auto b = theoretical_holder_bound(0.3, 1.0, 0.75, 1.0, 1, HFlags{});
    EXPECT_DOUBLE_EQ(b.main, 0.2);
    EXPECT_DOUBLE_EQ(b.constant_h, 0.5);
    EXPECT_DOUBLE_EQ(b.factorization, 0.5);
    EXPECT_DOUBLE_EQ(b.applicable, 0.2);
    EXPECT_DOUBLE_EQ(theoretical_holder_bound(0.3, 0.2, 0.75, 1.0, 1, HFlags{}).main, 0.1);
    EXPECT_DOUBLE_EQ(theoretical_holder_bound(0.3, 1.0, 0.75, 1.0, 1, HFlags{true, true}).applicable, 0.5);
    EXPECT_NEAR(theoretical_holder_bound(0.3, 1.0, 0.75, 1.0, 3, HFlags{}).factorization, 0.4, 1e-15);
    EXPECT_THROW(theoretical_holder_bound(0.5, 1.0, 0.75, 1.0, 1, HFlags{}), DomainError);
    EXPECT_THROW(theoretical_holder_bound(0.3, 1.5, 0.75, 1.0, 1, HFlags{}), DomainError);
    EXPECT_THROW(theoretical_holder_bound(0.3, 1.0, 0.75, 1.0, 0, HFlags{}), DomainError);
}

TEST(HolderEstimate, RecoversFbmExponent) {
    const auto space = SpatialGrid::uniform(9);
    const TimeGrid grid(1.0, 4096);
    for (double h : {0.6, 0.8}) {
        std::vector<double> thetas;
        for (std::uint64_t s = 0; s < 5; ++s) {
            const auto p = sample_fbm_circulant(grid, h, 100 + s);
            const Eigen::MatrixXd states = Eigen::VectorXd::Ones(9) * p.values.transpose();
            thetas.push_back(estimate_holder(grid, *space, states).theta);
        }
        std::sort(thetas.begin(), thetas.end());
        EXPECT_NEAR(thetas[2], h, 0.1) << h;
    }
}

TEST(HolderEstimate, SmoothAndConstantPaths) {
    const auto space = SpatialGrid::uniform(9);
    const TimeGrid grid(1.0, 256);
    Eigen::MatrixXd states = Eigen::VectorXd::Ones(9) * grid.points().transpose();
    const auto lin = estimate_holder(grid, *space, states);
    EXPECT_NEAR(lin.theta, 1.0, 1e-10);
    EXPECT_NEAR(lin.prefactor, 1.0, 1e-10);
    states.setConstant(2.0);
    const auto flat = estimate_holder(grid, *space, states);
    EXPECT_TRUE(flat.undefined_slope);
    EXPECT_TRUE(std::isnan(flat.theta));
    EXPECT_THROW(estimate_holder(TimeGrid(1.0, 32), *space, Eigen::MatrixXd::Zero(9, 33)), DomainError);
}

// Reference nodes and weights from numpy.polynomial.legendre.leggauss(5).
TEST(GaussLegendre, FivePointRule) {
    Eigen::VectorXd x, w;
    gauss_legendre(5, x, w);
    EXPECT_NEAR(x[0], -0.9061798459386640, 1e-14);
    EXPECT_NEAR(x[1], -0.5384693101056831, 1e-14);
    EXPECT_NEAR(x[2], 0.0, 1e-14);
    EXPECT_NEAR(w[0], 0.2369268850561891, 1e-14);
    EXPECT_NEAR(w[1], 0.4786286704993665, 1e-14);
    EXPECT_NEAR(w[2], 0.5688888888888889, 1e-14);
    gauss_legendre(16, x, w);
    EXPECT_NEAR(w.sum(), 2.0, 1e-14);
    EXPECT_NEAR((w.array() * x.array().pow(30)).sum(), 2.0 / 31.0, 1e-14);
}

TEST(Factorization, PrefactorAndDomain) {
    EXPECT_NEAR(factorization_prefactor(0.25), std::sqrt(0.5) / M_PI, 1e-15);
    const auto space = SpatialGrid::uniform(33);
    const TimeGrid grid(1.0, 64);
    const SpectralKernel k(DiffusivitySpec::constant(0.1), space, 16);
    const auto noise = build_noise(CovarianceSpec::power_law(1.0, 3.0, 4), space, grid, 0.75, 1);
    const Eigen::MatrixXd u = Eigen::MatrixXd::Zero(33, 65);
    EXPECT_THROW(factorization_reconstruct(k, u, ScalarFunction::constant(1.0), noise, 0.5), DomainError);
    EXPECT_THROW(factorization_reconstruct(k, u, ScalarFunction::constant(1.0), noise, 0.0), DomainError);
}

TEST(Factorization, ErrorShrinksUnderRefinement) {
    const auto space = SpatialGrid::uniform(65);
    const SpectralKernel k(DiffusivitySpec::constant(0.1), space, 32);
    const auto fine = build_noise(CovarianceSpec::power_law(1.0, 3.0, 8), space, TimeGrid(1.0, 512), 0.75, 4);
    const auto h = ScalarFunction::constant(0.5);
    double previous = 1e300;
    for (std::size_t n : {64, 128, 256}) {
        const auto noise = fine.restricted(TimeGrid(1.0, n), space, 8);
        const Eigen::MatrixXd u = Eigen::MatrixXd::Zero(65, static_cast<Eigen::Index>(n + 1));
        const auto r = factorization_reconstruct(k, u, h, noise, 0.25);
        EXPECT_LT(r.relative, previous) << n;
        previous = r.relative;
    }
    EXPECT_LT(previous, 0.1);
}
