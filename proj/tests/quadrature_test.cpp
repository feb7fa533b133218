#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lhv/closed_form.hpp"
#include "lhv/quadrature.hpp"

namespace lhv::quad {
namespace {

const auto kFull1000 = QuadratureGrid::make(GridMode::FullPeriod, 1000);
const auto kPaper = QuadratureGrid::make(GridMode::PaperHalfInterval, 50);

TEST(Grid, Layout) {
    EXPECT_EQ(kPaper.nodes.size(), 50u);
    EXPECT_EQ(kPaper.nodes.front(), 0.0);
    EXPECT_NEAR(kPaper.nodes.back(), 49 * kPi / 50, 1e-15);
    EXPECT_NEAR(kPaper.weight, kPi / 50, 1e-16);
    EXPECT_EQ(kPaper.multiplicity, 2.0);
    EXPECT_NEAR(kFull1000.weight, kTwoPi / 1000, 1e-16);
    EXPECT_THROW(QuadratureGrid::make(GridMode::FullPeriod, 1), std::invalid_argument);
}

TEST(QuadC, ProjectionExamples) {
    auto d = DetectionDensity::projection();
    // integral of cos^2 over a period is pi
    EXPECT_NEAR(quad_c(d, Angle(0.0), kFull1000), kPi, 1e-12);
    EXPECT_NEAR(quad_c(d, Angle(kPi / 2), kFull1000), 0.0, 1e-12);
}

TEST(QuadC, AlignedEqualsRate) {
    for (const auto& d : {DetectionDensity::projection(), DetectionDensity::signed_power_cosine(),
                          DetectionDensity::naive(), DetectionDensity::custom_power(3.0)})
        EXPECT_EQ(quad_c(d, Angle(0.0), kFull1000), quad_t(d, Angle(0.0), kFull1000));
}

TEST(QuadT, ProjectionExamples) {
    auto d = DetectionDensity::projection();
    EXPECT_NEAR(quad_t(d, Angle(0.0), kFull1000), kPi, 1e-12);
    // integral of |cos th sin th| over a period is 2
    EXPECT_NEAR(quad_t(d, Angle(kPi / 2), kFull1000), 2.0, 1e-4);
}

TEST(QuadT, TheoryIIPaperGridMean) {
    auto d = DetectionDensity::signed_power_cosine();
    double s = 0;
    for (Angle phi : phi_grid(50, GridMode::PaperHalfInterval)) s += quad_t(d, phi, kPaper);
    EXPECT_NEAR(s / 50 / 2, 2.07, 0.03);
}

TEST(QuadExpectation, Examples) {
    auto proj = DetectionDensity::projection();
    auto p = quad_expectation(proj, Angle(kPi / 3), CorrelationMode::Anticorrelated, kPaper);
    EXPECT_NEAR(p.e_hv, closed::theory1_curves(Angle(kPi / 3)).e_hv1, 1e-3);
    EXPECT_NEAR(p.e_hv, -0.6964, 1e-3);
    EXPECT_NEAR(p.e_hv, p.c / p.t, 1e-15);

    auto pow = DetectionDensity::signed_power_cosine();
    EXPECT_EQ(quad_expectation(pow, Angle(0.0), CorrelationMode::Correlated, kPaper).e_hv, 1.0);
    auto mid = quad_expectation(pow, Angle(kPi / 2), CorrelationMode::Correlated, kPaper);
    EXPECT_LE(std::abs(mid.e_hv - 0.0), 0.012);
}

TEST(QuadExpectation, DegenerateRate) {
    auto zero = DetectionDensity::custom([](double) { return 0.0; }, "zero");
    EXPECT_THROW(quad_expectation(zero, Angle(0.3), CorrelationMode::Correlated, kFull1000), DegenerateRateError);
}

TEST(Sweep, TheoryIMonotone) {
    TheoryConfig cfg;
    auto curve = sweep_curve(cfg);
    ASSERT_EQ(curve.size(), 50u);
    EXPECT_EQ(curve.front().phi.radians, 0.0);
    EXPECT_EQ(curve.back().phi.radians, kPi);
    for (std::size_t i = 1; i < curve.size(); ++i) EXPECT_GT(curve[i].e_hv, curve[i - 1].e_hv);
}

TEST(Sweep, TheoryIITracksCosine) {
    TheoryConfig cfg;
    cfg.density = DetectionDensity::signed_power_cosine();
    cfg.mode = CorrelationMode::Correlated;
    cfg.grid = GridMode::PaperHalfInterval;
    for (const auto& p : sweep_curve(cfg)) {
        EXPECT_NEAR(p.e_ref, std::cos(p.phi.radians), 1e-15);
        // largest deviation on this grid is 1.228%
        EXPECT_LE(std::abs(p.e_hv - p.e_ref), 0.0125);
    }
}

TEST(Sweep, NaiveIsStraightLine) {
    TheoryConfig cfg;
    cfg.density = DetectionDensity::naive();
    cfg.theta_points = 4000;
    for (const auto& p : sweep_curve(cfg)) EXPECT_NEAR(p.e_hv, 2 * p.phi.radians / kPi - 1, 1e-3);
}

TEST(Properties, RefinementConvergence) {
    auto d = DetectionDensity::projection();
    auto phis = phi_grid(50, GridMode::FullPeriod);
    double prev = 1e9;
    for (int n : {50, 200, 1000, 10'000}) {
        auto g = QuadratureGrid::make(GridMode::FullPeriod, n);
        double err_t = 0, err_c = 0;
        for (Angle phi : phis) {
            err_t = std::max(err_t, std::abs(quad_t(d, phi, g) - closed::theory1_curves(phi).t1));
            err_c = std::max(err_c, std::abs(quad_c(d, phi, g) - kPi * std::cos(phi.radians)));
        }
        EXPECT_LT(err_t, prev) << n;
        prev = err_t;
        if (n == 10'000) {
            EXPECT_LE(err_t, 1e-3);
            EXPECT_LE(err_c, 1e-3);
        }
    }
}

TEST(Properties, RateDominatesCorrelationExactly) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, kTwoPi), p(0.05, 4.0);
    for (int i = 0; i < 200; ++i) {
        auto d = DetectionDensity::custom_power(p(rng));
        Angle phi(u(rng));
        for (const auto& g : {kPaper, kFull1000}) EXPECT_GE(quad_t(d, phi, g), std::abs(quad_c(d, phi, g)));
    }
    for (const auto& d : {DetectionDensity::projection(), DetectionDensity::signed_power_cosine(), DetectionDensity::naive()})
        for (int k = 0; k < 100; ++k) {
            Angle phi(u(rng));
            EXPECT_GE(quad_t(d, phi, kFull1000), std::abs(quad_c(d, phi, kFull1000)));
        }
}

TEST(Properties, PaperGridReplicatesClosedForm) {
    auto d = DetectionDensity::projection();
    for (Angle phi : phi_grid(50, GridMode::FullPeriod)) {
        auto q = quad_expectation(d, phi, CorrelationMode::Anticorrelated, kPaper);
        auto c = closed::theory1_curves(phi);
        EXPECT_LE(std::abs(q.t / c.t1 - 1), 0.01);
        EXPECT_LE(std::abs(q.e_hv - c.e_hv1), 0.01);
    }
}

TEST(Properties, ReflectionSymmetry) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, kPi);
    for (const auto& d : {DetectionDensity::projection(), DetectionDensity::signed_power_cosine()})
        for (int i = 0; i < 100; ++i) {
            double phi = u(rng);
            // |cos|^(1/e) magnifies rounding in theta - phi near the zeros of cos
            EXPECT_NEAR(quad_c(d, Angle(phi), kFull1000), quad_c(d, Angle(kTwoPi - phi), kFull1000), 1e-6);
        }
}

}  // namespace
}  // namespace lhv::quad
