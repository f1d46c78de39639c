#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fspde/fbm.hpp"
#include "fspde/stats.hpp"

using namespace fspde;

TEST(FbmCovariance, ClosedForm) {
    EXPECT_DOUBLE_EQ(fbm_covariance(1.0, 1.0, 0.75), 1.0);
    EXPECT_DOUBLE_EQ(fbm_covariance(0.0, 0.7, 0.6), 0.0);
    // H = 1/2 is Brownian motion: min(s, t).
    EXPECT_NEAR(fbm_covariance(0.3, 0.8, 0.5), 0.3, 1e-15);
    EXPECT_NEAR(fbm_covariance(0.3f, 0.8f, 0.5f), 0.3f, 1e-6f);
    EXPECT_THROW(fbm_covariance(-0.1, 0.5, 0.7), DomainError);
    EXPECT_THROW(fbm_covariance(0.1, 0.5, 1.0), DomainError);
}

TEST(FbmCovariance, FgnLagZeroIsOne) {
    EXPECT_DOUBLE_EQ(fgn_autocovariance(0.0, 0.8), 1.0);
    EXPECT_NEAR(fgn_autocovariance(3.0, 0.5), 0.0, 1e-15);
    EXPECT_GT(fgn_autocovariance(1.0, 0.9), 0.0);
}

TEST(FbmSampler, PathsStartAtZeroAndAreSeedDeterministic) {
    TimeGrid g(1.0, 128);
    const auto a = sample_fbm_circulant(g, 0.7, 11);
    const auto b = sample_fbm_circulant(g, 0.7, 11);
    const auto c = sample_fbm_circulant(g, 0.7, 12);
    EXPECT_EQ(a.values[0], 0.0);
    EXPECT_EQ(a.values, b.values);
    EXPECT_NE(a.values, c.values);
    const auto d = sample_fbm_dense(g, 0.7, 11);
    EXPECT_EQ(d.values[0], 0.0);
    EXPECT_EQ(d.values, sample_fbm_dense(g, 0.7, 11).values);
}

TEST(FbmSampler, CirculantEmbeddingValidForHurstAboveHalf) {
    for (double h : {0.55, 0.75, 0.95}) {
        CirculantFbmSampler s(TimeGrid(1.0, 256), h);
        EXPECT_TRUE(s.valid()) << h;
        EXPECT_GE(s.min_eigenvalue(), 0.0);
    }
}

TEST(FbmSampler, InterpolationIsLinear) {
    const auto p = sample_fbm_dense(TimeGrid(1.0, 4), 0.6, 3);
    EXPECT_NEAR(p(0.125), 0.5 * (p.values[0] + p.values[1]), 1e-15);
    EXPECT_EQ(p(1.0), p.values[4]);
}

TEST(FbmSampler, VarianceAtHorizonMatchesSelfSimilarity) {
    // Var B(T) = T^{2H}; 4000 dense paths, 4 standard errors.
    const TimeGrid g(2.0, 32);
    DenseFbmSampler s(g, 0.8);
    Rng rng(5);
    std::vector<double> end;
    for (int i = 0; i < 4000; ++i) end.push_back(s.sample_values(rng)[32]);
    const double v = stats::variance(end);
    const double target = std::pow(2.0, 1.6);
    EXPECT_NEAR(v, target, 4.0 * target * std::sqrt(2.0 / 4000.0));
}

TEST(Weyl, LinearPathClosedForm) {
    // g(y) = y: D = -(t-s)^alpha / Gamma(alpha+1).
    auto line = [](double y) { return y; };
    for (double alpha : {0.25, 0.5, 0.75}) {
        const double exact = -std::pow(0.6, alpha) / std::tgamma(alpha + 1.0);
        EXPECT_NEAR(weyl_right_derivative(line, WeylParams{alpha}, 0.2, 0.8), exact, 1e-8) << alpha;
        TimeGrid g(1.0, 10);
        EXPECT_NEAR(weyl_right_derivative(g, g.points(), alpha, 0.2, 0.8), exact, 1e-12) << alpha;
    }
}

TEST(Weyl, RoutesAgreeOnSmoothPath) {
    auto f = [](double y) { return std::sin(3.0 * y) + y * y; };
    TimeGrid g(1.0, 4096);
    Eigen::VectorXd v = g.points().unaryExpr(f);
    const double a = weyl_right_derivative(f, WeylParams{0.4, 8192}, 0.1, 0.9);
    const double b = weyl_right_derivative(g, v, 0.4, 0.1, 0.9);
    EXPECT_NEAR(a, b, 1e-5 * std::abs(a));
}

TEST(Weyl, DomainErrors) {
    TimeGrid g(1.0, 8);
    EXPECT_THROW(weyl_right_derivative(g, g.points(), 0.0, 0.1, 0.5), DomainError);
    EXPECT_THROW(weyl_right_derivative(g, g.points(), 0.5, 0.5, 0.5), DomainError);
}

// Lambda for the identity path on [0,1] is sin(pi alpha) / (pi alpha).
TEST(LambdaAlpha, LinearPathClosedForm) {
    TimeGrid g(1.0, 64);
    for (double alpha : {0.25, 0.5, 0.75}) {
        const double exact = std::sin(M_PI * alpha) / (M_PI * alpha);
        EXPECT_NEAR(lambda_alpha(g, g.points(), alpha), exact, 1e-10) << alpha;
    }
    EXPECT_NEAR(lambda_alpha(g, g.points(), 0.5), 2.0 / M_PI, 1e-12);
}

TEST(LambdaAlpha, ConstantPathIsZeroAndScalesLinearly) {
    TimeGrid g(1.0, 32);
    EXPECT_EQ(lambda_alpha(g, Eigen::VectorXd::Constant(33, 3.0), 0.4), 0.0);
    const auto p = sample_fbm_dense(g, 0.8, 9);
    EXPECT_NEAR(lambda_alpha(g, 2.5 * p.values, 0.4), 2.5 * lambda_alpha(p, 0.4), 1e-12);
}

TEST(LambdaAlpha, StableUnderRefinementForSmoothRegime) {
    // Rate h^{H + alpha - 1}: H = 0.9, alpha = 0.4 converges quickly.
    const TimeGrid fine(1.0, 1024);
    const auto p = sample_fbm_circulant(fine, 0.9, 21);
    const double l_fine = lambda_alpha(p, 0.4, 1024);
    Eigen::VectorXd coarse(513);
    for (int k = 0; k <= 512; ++k) coarse[k] = p.values[2 * k];
    const double l_coarse = lambda_alpha(TimeGrid(1.0, 512), coarse, 0.4, 1024);
    EXPECT_NEAR(l_coarse, l_fine, 0.05 * l_fine);
}
