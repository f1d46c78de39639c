#include <gtest/gtest.h>

#include <cmath>

#include "fspde/fracint.hpp"

using namespace fspde;

TEST(Young, SmoothIntegralConverges) {
    const TimeGrid g(1.0, 1024);
    const Eigen::VectorXd t = g.points();
    const auto r = young_integral_scalar({g, t}, {g, t.array().square().matrix()});
    EXPECT_NEAR(r.value, 2.0 / 3.0, 1e-3);
    EXPECT_NEAR(r.observed_rate, 1.0, 0.05);
    EXPECT_LT(std::abs(r.value - 2.0 / 3.0), 2.0 * r.error_estimate + 1e-12);
    EXPECT_EQ(r.level_sums.size(), 5u);
    EXPECT_THROW(young_integral_scalar({g, t}, {TimeGrid(1.0, 512), Eigen::VectorXd::Zero(513)}), DomainError);
}

TEST(Young, VectorIntegralOfIdentityIsNoise) {
    const auto space = SpatialGrid::uniform(33);
    const TimeGrid grid(1.0, 64);
    const auto noise = build_noise(CovarianceSpec::power_law(1.0, 3.0, 5), space, grid, 0.7, 17);
    OperatorPath id{grid, space, 5, [&](std::size_t, std::size_t i) {
                        return Eigen::VectorXd(noise.basis().function(i));
                    }};
    const auto w = vector_young_integral(id, noise, grid.t(40));
    EXPECT_LT((w.values - noise.field(40)).cwiseAbs().maxCoeff(), 1e-12);
}

// ||s v||_{alpha,1} = (1 + 1/(1-alpha)) / (2-alpha) and
// ||t v||_{alpha,2,T}^2 = 1 + 1/((3-2 alpha)(1-alpha)^2) for a unit vector v and T = 1.
TEST(AlphaNorms, LinearPathClosedForms) {
    const auto space = SpatialGrid::uniform(9);
    const Eigen::VectorXd v = Eigen::VectorXd::Ones(9);
    auto f = [&](double s) { return Eigen::VectorXd(s * v); };
    EXPECT_NEAR(norm_alpha_1(f, *space, 1.0, 0.25), 4.0 / 3.0, 1e-4);
    EXPECT_NEAR(norm_alpha_2_T(f, *space, 1.0, 0.25), 1.308094458023239, 1e-4);
    for (double a : {0.1, 0.4}) {
        EXPECT_NEAR(norm_alpha_1(f, *space, 1.0, a), (1.0 + 1.0 / (1.0 - a)) / (2.0 - a), 1e-4) << a;
        EXPECT_NEAR(norm_alpha_2_T(f, *space, 1.0, a),
                    std::sqrt(1.0 + 1.0 / ((3.0 - 2.0 * a) * (1.0 - a) * (1.0 - a))), 1e-4)
            << a;
    }
}

TEST(AlphaNorms, ConstantPathHasNoIncrementPart) {
    const TimeGrid g(2.0, 64);
    const auto space = SpatialGrid::uniform(17);
    const Eigen::MatrixXd states = Eigen::MatrixXd::Constant(17, 65, 3.0);
    const auto n = alpha_norms(g, *space, states, 0.3);
    EXPECT_NEAR(n.norm_alpha_2_T, 3.0, 1e-12);
    EXPECT_NEAR(n.sup_norm, 3.0, 1e-12);
    // int_0^2 3 s^{-0.3} ds, exact for the constant norm.
    EXPECT_NEAR(n.norm_alpha_1, 3.0 * std::pow(2.0, 0.7) / 0.7, 1e-10);
    EXPECT_LT(increment_integrals(g.points(), pairwise_distances(states, space->weights), 0.3).cwiseAbs().maxCoeff(),
              1e-12);
}

TEST(AlphaNorms, EmbeddingConstantDominates) {
    const auto space = SpatialGrid::uniform(9);
    auto f = [&](double s) { return Eigen::VectorXd::Constant(9, std::sin(5.0 * s) + s); };
    for (double a : {0.2, 0.45}) {
        EXPECT_LE(norm_alpha_1(f, *space, 1.0, a),
                  alpha_norm_embedding_constant(1.0, a) * norm_alpha_2_T(f, *space, 1.0, a));
    }
}

TEST(AlphaNorms, GridAndFunctionRoutesAgree) {
    const auto space = SpatialGrid::uniform(9);
    const TimeGrid g(1.0, 2048);
    auto f = [&](double s) { return Eigen::VectorXd::Constant(9, std::cos(3.0 * s)); };
    Eigen::MatrixXd states(9, 2049);
    for (std::size_t k = 0; k <= 2048; ++k) states.col(static_cast<Eigen::Index>(k)) = f(g.t(k));
    const auto n = alpha_norms(g, *space, states, 0.3);
    EXPECT_NEAR(n.norm_alpha_1, norm_alpha_1(f, *space, 1.0, 0.3, 4096), 1e-4);
    EXPECT_NEAR(n.norm_alpha_2_T, norm_alpha_2_T(f, *space, 1.0, 0.3, 4096), 1e-4);
}

TEST(BoundI, HoldsForRandomSmoothIntegrands) {
    const auto space = SpatialGrid::uniform(65);
    const TimeGrid grid(1.0, 256);
    const auto noise = build_noise(CovarianceSpec::power_law(1.0, 3.0, 8), space, grid, 0.75, 3);
    const double r = r_alpha_H(noise, 0.3);
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto F = random_smooth_operator(grid, space, 8, s);
        const auto rep = check_bound_i(F, noise, r, operator_norm_alpha_1(F, 0.3));
        EXPECT_TRUE(rep.pass) << rep.lhs << " > " << rep.rhs;
        EXPECT_GT(rep.lhs, 0.0);
    }
}
