#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lhv/analysis.hpp"
#include "lhv/closed_form.hpp"

namespace lhv::analysis {
namespace {

constexpr auto kAnti = CorrelationMode::Anticorrelated;
constexpr auto kCorr = CorrelationMode::Correlated;

double theory1(Angle phi) { return closed::closed_point(DetectionDensity::projection(), phi, kAnti).e_hv; }
double naive(Angle phi) { return closed::naive_expectation(fold_to_half_period(phi)); }
double qm_anti(Angle phi) { return qm_expectation(phi, kAnti); }
double qm_corr(Angle phi) { return qm_expectation(phi, kCorr); }

TheoryConfig theory_ii_paper() {
    TheoryConfig cfg;
    cfg.density = DetectionDensity::signed_power_cosine();
    cfg.mode = kCorr;
    cfg.grid = GridMode::PaperHalfInterval;
    return cfg;
}

TEST(DeviationReport, TheoryIClosedForm) {
    TheoryConfig cfg;
    auto r = deviation_report(closed::closed_curve(cfg));
    EXPECT_EQ(r.sample_points, 50);
    EXPECT_NEAR(r.mean_half_t, 1.2853, 0.001);
    EXPECT_NEAR(r.max_rel_dev_t, 0.223, 0.003);
    EXPECT_NEAR(r.std_rel_dev_t, 0.157, 0.005);
    EXPECT_NEAR(r.max_abs_dev_e, 0.198, 0.003);
    EXPECT_NEAR(r.std_abs_dev_e, 0.127, 0.005);
    EXPECT_LE(r.std_rel_dev_t, r.max_rel_dev_t);
    EXPECT_LE(r.std_abs_dev_e, r.max_abs_dev_e);
}

TEST(DeviationReport, TheoryIIPaperGrid) {
    auto r = deviation_report(quad::sweep_curve(theory_ii_paper()));
    EXPECT_NEAR(r.mean_half_t, 2.07, 0.02);
    EXPECT_NEAR(r.max_abs_dev_e, 0.012, 0.003);
    EXPECT_NEAR(r.std_abs_dev_e, 0.0080, 0.002);
    EXPECT_NEAR(r.max_rel_dev_t, 0.057, 0.007);
    EXPECT_NEAR(r.std_rel_dev_t, 0.037, 0.005);
}

TEST(DeviationReport, ConstantCurveIsExactlyZero) {
    Curve flat(37, CurvePoint{Angle(0.1), 0.3, 2.1, 0.1, 0.1});
    auto r = deviation_report(flat);
    EXPECT_EQ(r.max_rel_dev_t, 0.0);
    EXPECT_EQ(r.std_rel_dev_t, 0.0);
    EXPECT_EQ(r.max_abs_dev_e, 0.0);
    EXPECT_EQ(r.std_abs_dev_e, 0.0);
    EXPECT_EQ(r.mean_half_t, 1.05);
}

TEST(DeviationReport, EmptyCurve) { EXPECT_THROW(deviation_report({}), std::invalid_argument); }

TEST(BellEvaluate, TheoryINumbers) {
    auto t = bell_evaluate(theory1, Angle(0.0), Angle(kPi / 3), Angle(2 * kPi / 3));
    EXPECT_NEAR(t.lhs, 1.39277, 1e-5);
    EXPECT_NEAR(t.rhs, 0.30362, 1e-5);
    EXPECT_TRUE(t.violated);
}

TEST(BellEvaluate, NaiveAndZero) {
    auto t = bell_evaluate(naive, Angle(0.0), Angle(kPi / 3), Angle(2 * kPi / 3));
    EXPECT_NEAR(t.lhs, 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(t.rhs, 2.0 / 3.0, 1e-12);
    EXPECT_FALSE(t.violated);
    auto z = bell_evaluate([](Angle) { return 0.0; }, Angle(0.2), Angle(1.0), Angle(2.5));
    EXPECT_EQ(z.lhs, 0.0);
    EXPECT_EQ(z.rhs, 1.0);
    EXPECT_FALSE(z.violated);
}

TEST(BellEvaluate, RotationInvariance) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, kPi), shift(-3.0, 3.0);
    for (auto fn : {ExpectationFn(theory1), ExpectationFn(qm_anti), ExpectationFn(naive)}) {
        for (int i = 0; i < 200; ++i) {
            Angle a(u(rng)), b(u(rng)), c(u(rng)), d(shift(rng));
            auto t0 = bell_evaluate(fn, a, b, c);
            auto t1 = bell_evaluate(fn, a + d, b + d, c + d);
            EXPECT_NEAR(t0.lhs, t1.lhs, 1e-12);
            EXPECT_NEAR(t0.rhs, t1.rhs, 1e-12);
        }
    }
}

TEST(BellScan, QmExtremum) {
    auto triples = bell_scan(qm_anti, Angle::from_degrees(2));
    EXPECT_EQ(triples.size(), 90u * 89u * 88u);
    EXPECT_NEAR(triples.front().margin(), 0.5, 1e-12);
    // 60 degree spacing between consecutive analyzers
    const auto& top = triples.front();
    EXPECT_NEAR(std::abs(fold_to_half_period(top.b - top.a).degrees()), 60.0, 1e-9);
    EXPECT_NEAR(std::abs(fold_to_half_period(top.c - top.b).degrees()), 60.0, 1e-9);
    for (std::size_t i = 1; i < triples.size(); ++i) ASSERT_GE(triples[i - 1].margin(), triples[i].margin());
}

TEST(BellScan, NaiveNeverViolates) {
    auto triples = bell_scan(naive, Angle::from_degrees(10));
    EXPECT_EQ(count_violations(triples), 0u);
    EXPECT_LE(triples.front().margin(), 1e-12);
}

TEST(BellScan, TheoryIIMatchesQmPattern) {
    auto e2 = quadrature_expectation(DetectionDensity::signed_power_cosine(), kCorr,
                                     quad::QuadratureGrid::make(GridMode::FullPeriod, 2000));
    auto qm = bell_scan(qm_corr, Angle::from_degrees(10));
    auto hv = bell_scan(e2, Angle::from_degrees(10));
    const long diff = static_cast<long>(count_violations(hv)) - static_cast<long>(count_violations(qm));
    EXPECT_LE(std::abs(diff), 2);
    EXPECT_GT(count_violations(qm), 0u);
    EXPECT_NEAR(hv.front().margin(), qm.front().margin(), 0.05);
}

TEST(BellScan, StepMustDividePi) {
    EXPECT_THROW(bell_scan(qm_anti, Angle::from_degrees(7)), std::invalid_argument);
    EXPECT_THROW(bell_scan(qm_anti, Angle(0.0)), std::invalid_argument);
    auto top = bell_scan(qm_anti, Angle::from_degrees(10), 5);
    EXPECT_EQ(top.size(), 5u);
}

TEST(Tradeoff, ReproducesBothTheories) {
    auto cfg = theory_ii_paper();
    auto rows = tradeoff_scan({1.0, kInvE}, cfg);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_NEAR(rows[0].max_abs_dev_e, 0.198, 0.003);
    EXPECT_NEAR(rows[0].max_rel_dev_t, 0.223, 0.003);
    EXPECT_NEAR(rows[1].max_abs_dev_e, 0.012, 0.003);
    EXPECT_NEAR(rows[1].max_rel_dev_t, 0.057, 0.007);
    EXPECT_THROW(tradeoff_scan({0.0}, cfg), std::invalid_argument);
}

TEST(Tradeoff, NeighbourhoodOfInverseE) {
    // No single exponent near 1/e improves both channels at once.
    auto rows = tradeoff_scan({kInvE - 0.05, kInvE, kInvE + 0.05}, theory_ii_paper());
    for (int side : {0, 2}) {
        bool both_better = rows[side].max_abs_dev_e < rows[1].max_abs_dev_e &&
                           rows[side].max_rel_dev_t < rows[1].max_rel_dev_t;
        EXPECT_FALSE(both_better) << rows[side].exponent;
    }
}

}  // namespace
}  // namespace lhv::analysis
