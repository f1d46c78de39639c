#include <gtest/gtest.h>

#include <cmath>

#include "fspde/greens.hpp"

using namespace fspde;

namespace {

SpectralKernel pointwise(double k0 = 1.0, std::size_t m = 256) {
    return SpectralKernel(DiffusivitySpec::constant(k0), nullptr, m);
}

}  // namespace

// Reference values from a 60-digit theta-function evaluation (mpmath).
TEST(Green, MatchesHighPrecisionReference) {
    const auto k = pointwise();
    EXPECT_NEAR(k.green_tau(0.3, 0.7, 0.01), 0.05166746346358450548, 1e-15);
    EXPECT_NEAR(k.green_tau(0.0, 0.0, 1e-3), 17.84124116152771096, 1e-12);
    EXPECT_NEAR(k.green_tau(0.25, 0.9, 0.2), 0.81316495534157677926, 1e-14);
    EXPECT_NEAR(k.green_tau(0.2, 0.6, 0.05), 0.6192278328531334506, 1e-14);
    // True value is about 1e-783.
    EXPECT_EQ(k.green_tau(0.1, 0.95, 1e-4), 0.0);
}

TEST(Green, RepresentationsAgreeNearSwitch) {
    const auto k = pointwise(1.0, 128);
    for (double f : {1.0, 2.0, 4.0}) {
        const double tau = f * k.tau_switch();
        for (double x : {0.0, 0.3, 0.8}) {
            for (double y : {0.1, 0.5, 1.0}) {
                const double peak = 1.0 / std::sqrt(4.0 * M_PI * tau);
                EXPECT_NEAR(k.green_spectral(x, y, tau), k.green_images(x, y, tau), 1e-10 * peak);
            }
        }
    }
}

TEST(Green, DiffusionTimeUsesCumulativeDiffusivity) {
    const SpectralKernel k(DiffusivitySpec::constant(0.1), nullptr, 128);
    EXPECT_NEAR(k.green(0.3, 0.6, 0.7, 0.1), k.green_tau(0.3, 0.7, 0.05), 1e-15);
    EXPECT_THROW(k.green(0.3, 0.5, 0.7, 0.5), DomainError);
}

TEST(Diffusivity, CumulativeAgainstQuadrature) {
    const auto s = DiffusivitySpec::sinusoidal(0.5, 0.4, 3.0);
    double q = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) q += s.k((i + 0.5) * 0.7 / n) * 0.7 / n;
    EXPECT_NEAR(s.cumulative(0.7), q, 1e-10);
    EXPECT_NEAR(s.lower_bound(1.0), 0.3, 1e-6);
    EXPECT_NEAR(s.upper_bound(1.0), 0.7, 1e-6);

    const auto t = DiffusivitySpec::tabulated(2.0, {0.0, 0.5, 1.0}, {1.0, 3.0, 1.0});
    EXPECT_NEAR(t.cumulative(0.5), 2.0 * 1.0, 1e-14);
    EXPECT_NEAR(t.cumulative(1.0), 2.0 * 2.0, 1e-14);
    EXPECT_THROW(DiffusivitySpec::constant(0.0).validate(), ConfigError);
}

TEST(Green, ApplyUDampsCosineModes) {
    const auto space = SpatialGrid::uniform(129);
    const SpectralKernel k(DiffusivitySpec::constant(0.2), space, 64);
    const Eigen::VectorXd e3 = k.basis().function(3);
    const auto out = k.apply_U({space, e3}, 0.5, 0.25);
    const double factor = std::exp(-9.0 * M_PI * M_PI * 0.2 * 0.25);
    EXPECT_LT((out.values - factor * e3).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Green, IdentitiesHold) {
    for (double k0 : {0.1, 1.0}) {
        const auto space = SpatialGrid::uniform(257);
        const SpectralKernel k(DiffusivitySpec::constant(k0), space, 128);
        const auto r = check_kernel_identities(k, 7);
        EXPECT_TRUE(r.pass) << "k0=" << k0 << " sym=" << r.symmetry << " semi=" << r.semigroup
                            << " adj=" << r.self_adjoint << " mass=" << r.mass << " overlap=" << r.overlap;
    }
}

TEST(Green, GaussianBoundStableUnderRefinement) {
    const SpectralKernel k(DiffusivitySpec::constant(1.0), nullptr, 128);
    SampleSpec spec;
    spec.n_samples = 3000;
    const auto r = check_gaussian_bound(k, spec);
    EXPECT_TRUE(r.pass) << r.fitted_c << " " << r.fitted_c_refined;
    EXPECT_LE(r.violations_loose, r.violations);
}

TEST(Green, SmallTimeInequalitiesAtHalf) {
    const SpectralKernel k(DiffusivitySpec::constant(0.1), nullptr, 128);
    const auto r = check_lemma1(k, 0.5, SampleSpec{});
    for (const auto& w : r.inequalities) {
        EXPECT_TRUE(w.pass) << w.name << " ratio " << w.max_ratio << " drift " << w.drift << " slope " << w.slope;
    }
    EXPECT_TRUE(r.pass);
    EXPECT_THROW(check_lemma1(k, 0.3, SampleSpec{}), DomainError);
    EXPECT_THROW(check_lemma1(k, 1.0, SampleSpec{}), DomainError);
}

TEST(Green, SecondDifferenceOrdering) {
    const auto k = pointwise();
    EXPECT_THROW(green_second_difference(k, 0.2, 0.4, 0.5, 0.6, 0.1, 0.05), DomainError);
    const double d = green_second_difference(k, 0.2, 0.4, 0.6, 0.5, 0.1, 0.05);
    const double direct = k.green(0.2, 0.6, 0.4, 0.1) - k.green(0.2, 0.5, 0.4, 0.1) - k.green(0.2, 0.6, 0.4, 0.05) +
                          k.green(0.2, 0.5, 0.4, 0.05);
    EXPECT_NEAR(d, std::abs(direct), 1e-14);
}
