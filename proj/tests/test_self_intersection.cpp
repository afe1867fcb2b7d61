#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gaussint/self_intersection.hpp"

using namespace gaussint;

// Oracles below come from mpmath quadrature of the defining integrals at 30 digits.

TEST(ConditionTriangle, GapAndArea) {
    const ConditionTriangle t = make_condition_triangle(10.0, 2.0);
    EXPECT_DOUBLE_EQ(t.gap(), 0.01);
    EXPECT_NEAR(t.area(), 0.5 * 0.99 * 0.99, 1e-15);
    EXPECT_THROW(make_condition_triangle(1.0, 1.0), std::invalid_argument);
    EXPECT_THROW(make_condition_triangle(0.5, 2.0), std::invalid_argument);
    EXPECT_THROW(make_condition_triangle(0.0, 2.0), std::invalid_argument);
    EXPECT_THROW(make_condition_triangle(3.0, 0.0), std::invalid_argument);
}

TEST(Et2OneDim, Oracles) {
    EXPECT_NEAR(et2_1d_exact(0.0).value, 0.6266570686577501, 1e-12);
    EXPECT_NEAR(et2_1d_exact(0.5).value, 0.5786366711701346, 1e-12);
    EXPECT_NEAR(et2_1d_exact(2.0).value, 0.3679461560679183, 1e-12);
    EXPECT_NEAR(et2_1d_exact(10.0).value, 0.09808447464926989, 1e-12);
    EXPECT_NEAR(et2_1d_exact(100.0).value, 0.009998000899400524, 1e-13);
    EXPECT_NEAR(et2_1d_exact(1000.0).value, 0.0009999980000089999, 1e-14);
    // a = 0 is the Beta integral pi / (2 sqrt(2 pi)).
    EXPECT_NEAR(et2_1d_exact(0.0).value, std::numbers::pi / (2 * std::sqrt(2 * std::numbers::pi)), 1e-12);
}

TEST(Et2OneDim, SymmetricAndRefinementErrorSmall) {
    for (double a : {0.3, 2.0, 40.0}) {
        EXPECT_EQ(et2_1d_exact(a).value, et2_1d_exact(-a).value);
        const QuadResult r = et2_1d_exact(a, 0);
        EXPECT_LT(r.error, 1e-6 * r.value);
    }
    EXPECT_THROW(et2_1d_exact(1.0, -1), std::invalid_argument);
}

TEST(Et2OneDim, LogLogSlopeNearMinusOne) {
    const double lo = et2_1d_exact(10.0).value;
    const double hi = et2_1d_exact(1000.0).value;
    const double slope = std::log(hi / lo) / std::log(100.0);
    EXPECT_GE(slope, -1.05);
    EXPECT_LE(slope, -0.9);
}

TEST(Et2OneDim, Regularized) {
    EXPECT_NEAR(et2_1d_regularized(2.0, 1e-3), 0.3446010891573898, 1e-9);
    EXPECT_LT(et2_1d_regularized(2.0, 1e-3), et2_1d_exact(2.0).value);
}

TEST(Et2Planar, Oracles) {
    struct Case {
        double a, alpha, value;
    };
    const Case cases[] = {{2, 1.5, 0.01627672353004055},  {10, 1.5, 0.01250438647187137},
                          {100, 1.5, 0.0001814735366525328}, {1000, 1.5, 1.289921026427728e-9},
                          {3, 2, 0.06277341167457137},    {10, 2, 0.08625752709205201},
                          {1000, 2, 0.08909044502453925}, {2, 3, 0.1109744250478884},
                          {100, 3, 0.7521496295294702},   {1000, 3, 1.117933721312571}};
    for (const auto& c : cases) {
        const QuadResult r = et2_planar_exact(c.a, c.alpha);
        EXPECT_NEAR(r.value, c.value, 1e-10 * c.value) << c.a << " " << c.alpha;
        EXPECT_LT(r.error, 1e-8 * c.value + 1e-300);
    }
    // Case alpha = 2: limit (1/2 pi) E1(1/2).
    EXPECT_NEAR(et2_planar_exact(1000, 2).value, 0.08914, 0.01 * 0.08914);
    EXPECT_THROW(et2_planar_exact(1.0, 2.0), std::invalid_argument);
}

TEST(Et2Planar, DirectQuadratureAgrees) {
    for (double alpha : {1.5, 2.0, 3.0}) {
        for (double a : {2.0, 5.0, 20.0, 100.0}) {
            const double reduced = et2_planar_exact(a, alpha).value;
            const double direct = et2_planar_direct(a, alpha).value;
            EXPECT_NEAR(direct, reduced, 0.005 * reduced) << a << " " << alpha;
        }
    }
}

TEST(Et2Planar, MonotoneTails) {
    // alpha = 1.5 decays to zero; alpha = 2 increases to its finite limit.
    double prev15 = et2_planar_exact(10.0, 1.5).value;
    double prev2 = et2_planar_exact(10.0, 2.0).value;
    for (double a : {20.0, 50.0, 100.0, 300.0, 1000.0}) {
        const double v15 = et2_planar_exact(a, 1.5).value;
        const double v2 = et2_planar_exact(a, 2.0).value;
        EXPECT_LT(v15, prev15) << a;
        EXPECT_GT(v2, prev2) << a;
        EXPECT_LT(v2, 0.08909044502453925 * (1 + 1e-12)) << a;
        prev15 = v15;
        prev2 = v2;
    }
}

TEST(Et2Planar, Regularized) {
    EXPECT_NEAR(et2_planar_regularized(3.0, 2.0, 5e-4), 0.062768019536537, 1e-9);
}

TEST(Classify, SyntheticRules) {
    EXPECT_EQ(classify_values(2, {{10, 1.0}, {100, 1.2}, {1000, 1.201}}).classified_limit, LimitClass::finite);
    EXPECT_EQ(classify_values(2, {{10, 1e-2}, {100, 1e-4}, {1000, 1e-8}}).classified_limit, LimitClass::zero);
    const AsymptoticVerdict d = classify_values(3, {{10, 1.0}, {100, 2.0}, {1000, 3.0}});
    EXPECT_EQ(d.classified_limit, LimitClass::divergent);
    EXPECT_NEAR(d.slope, 1.0 / std::log(10.0), 1e-12);
    EXPECT_NEAR(d.r_squared, 1.0, 1e-12);
    // Too few decades, too few points, non-monotone.
    EXPECT_EQ(classify_values(2, {{10, 1.0}, {20, 1.0}, {50, 1.0}}).classified_limit, LimitClass::inconclusive);
    EXPECT_EQ(classify_values(2, {{10, 1.0}, {1000, 1.0}}).classified_limit, LimitClass::inconclusive);
    EXPECT_EQ(classify_values(2, {{10, 1.0}, {100, 3.0}, {1000, 2.0}}).classified_limit,
              LimitClass::inconclusive);
    // Decreasing but not below 1e-6 and still moving: inconclusive.
    EXPECT_EQ(classify_values(2, {{10, 1.0}, {100, 0.5}, {1000, 0.25}}).classified_limit,
              LimitClass::inconclusive);
}

TEST(Classify, PlanarTrichotomy) {
    const double a[] = {10, 100, 1000};
    const AsymptoticVerdict two = classify_limit(2.0, a);
    EXPECT_EQ(two.classified_limit, LimitClass::finite);
    EXPECT_NEAR(two.limit_value, 0.08909044502453925, 1e-10);
    EXPECT_EQ(classify_limit(1.5, a).classified_limit, LimitClass::zero);
    const AsymptoticVerdict three = classify_limit(3.0, a);
    EXPECT_EQ(three.classified_limit, LimitClass::divergent);
    EXPECT_GE(three.r_squared, 0.99);
    EXPECT_EQ(std::string(to_string(three.classified_limit)), "divergent");
}

TEST(T2MonteCarlo, MinGap) {
    T2Options o;
    o.n_cells = 100;
    EXPECT_EQ(t2_min_gap(5.0, o), 1);
    o.alpha = 2.0;
    EXPECT_EQ(t2_min_gap(5.0, o), 4);
    EXPECT_EQ(t2_min_gap(3.0, o), 12);
    EXPECT_EQ(t2_min_gap(100.0, o), 1);
    EXPECT_THROW(t2_min_gap(1.0, o), std::invalid_argument);
}

TEST(T2MonteCarlo, OneDimAgreesWithExact) {
    T2Options o;
    o.n_cells = 512;
    o.eps = 1e-3;
    o.reps = 800;
    o.seed = 42;
    const double a[] = {2.0};
    const T2Estimate e = mc_t2_conditional(a, 1, o);
    const double exact = et2_1d_exact(2.0).value;
    EXPECT_NEAR(e.eps_bias, 0.3446010891573898 - exact, 1e-8);
    EXPECT_NEAR(e.mc.mean, exact, 3 * e.mc.se + std::abs(e.eps_bias) + e.grid_bias);
}

TEST(T2MonteCarlo, PlanarAgreesWithExact) {
    T2Options o;
    o.n_cells = 512;
    o.eps = 1e-3;
    o.reps = 800;
    o.seed = 42;
    o.alpha = 2.0;
    const double a[] = {3.0, 0.0};
    const T2Estimate e = mc_t2_conditional(a, 1, o);
    EXPECT_EQ(e.min_gap, 57);
    EXPECT_NEAR(e.mc.mean, et2_planar_exact(3.0, 2.0).value, 3 * e.mc.se + std::abs(e.eps_bias) + e.grid_bias);
}

TEST(T2MonteCarlo, RegionMatchesUnrestrictedBelowGridScale) {
    T2Options plain;
    plain.n_cells = 256;
    plain.eps = 1e-3;
    plain.reps = 16;
    plain.seed = 5;
    T2Options restricted = plain;
    restricted.alpha = 2.0;  // 100^-2 = 1e-4 < h
    const double a[] = {100.0};
    EXPECT_EQ(t2_samples(a, plain), t2_samples(a, restricted));
}

TEST(T2MonteCarlo, PlanarRotationInvariance) {
    T2Options o;
    o.n_cells = 256;
    o.eps = 2e-3;
    o.reps = 600;
    o.seed = 3;
    o.alpha = 2.0;
    const double a0[] = {4.0, 0.0};
    const double a1[] = {4.0 * std::cos(1.1), 4.0 * std::sin(1.1)};
    const T2Estimate e0 = mc_t2_conditional(a0, 1, o);
    const T2Estimate e1 = mc_t2_conditional(a1, 1, o);
    EXPECT_NEAR(e0.mc.mean, e1.mc.mean, 4 * std::hypot(e0.mc.se, e1.mc.se));
    EXPECT_NEAR(e0.eps_bias, e1.eps_bias, 1e-12);
}

TEST(T2MonteCarlo, Preconditions) {
    T2Options o;
    o.n_cells = 64;
    o.eps = 1e-2;
    o.reps = 4;
    const double a2[] = {1.0, 0.0};
    EXPECT_THROW(t2_samples(a2, o), std::invalid_argument);  // dim 2 needs alpha
    o.alpha = 1.0;
    EXPECT_THROW(t2_samples(a2, o), std::invalid_argument);  // empty region
    o.eps = 1e-4;
    const double a1[] = {1.0};
    EXPECT_THROW(t2_samples(a1, o), std::invalid_argument);  // eps < 4 h^2
    o.eps = 1e-2;
    o.alpha.reset();
    EXPECT_THROW(mc_t2_conditional(a1, 0, o), std::invalid_argument);
    const T2Estimate sq = mc_t2_conditional(a1, 2, o);
    EXPECT_TRUE(std::isnan(sq.eps_bias));
}

TEST(DecayCertificate, ExactTrend) {
    const double a[] = {10, 20, 50, 100, 200, 500, 1000};
    CertificateOptions opt;
    opt.ingredient_trials = 50;
    const VerifyReport pass = theorem10_bound_certificate(1, a, 0.9, opt);
    EXPECT_EQ(pass.outcome, Outcome::pass) << summary(pass);
    const VerifyReport fail = theorem10_bound_certificate(1, a, 1.2, opt);
    EXPECT_EQ(fail.outcome, Outcome::fail) << summary(fail);
    EXPECT_THROW(theorem10_bound_certificate(3, a, 0.5, opt), std::invalid_argument);
}

TEST(DecayCertificate, MonteCarloTrend) {
    const double a[] = {5, 10, 20, 50};
    CertificateOptions opt;
    opt.reps = 1000;
    opt.ingredient_trials = 50;
    const VerifyReport r = theorem10_bound_certificate(2, a, 0.5, opt);
    EXPECT_EQ(r.outcome, Outcome::pass) << summary(r);
}
