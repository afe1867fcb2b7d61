#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gaussint/gauss_sim.hpp"
#include "gaussint/indicator_geometry.hpp"
#include "gaussint/local_time.hpp"
#include "gaussint/moments.hpp"
#include "gaussint/operator_config.hpp"
#include "gaussint/random.hpp"

using namespace gaussint;

namespace {

constexpr double kPi = std::numbers::pi;

// ||A1 1_[0,t] - A2 1_[0,s]||^2 with t, s on a grid R times finer, built
// explicitly: cell averages go through the matrix, the rest through the
// complement scale.
double reference_norm(const L2Operator& a1, const L2Operator& a2, int t_fine, int s_fine, int r) {
    const int n = a1.grid().n_cells();
    const int big = n * r;
    auto image = [&](const L2Operator& a, int end) {
        Eigen::VectorXd f = Eigen::VectorXd::Zero(big);
        f.head(end).setOnes();
        Eigen::VectorXd p(n);
        for (int k = 0; k < n; ++k) p[k] = f.segment(k * r, r).mean();
        const Eigen::VectorXd mp = a.matrix() * p;
        Eigen::VectorXd out(big);
        for (int j = 0; j < big; ++j) {
            const int k = j / r;
            out[j] = mp[k] + a.complement_scale()[k] * (f[j] - p[k]);
        }
        return out;
    };
    return (image(a1, t_fine) - image(a2, s_fine)).squaredNorm() / big;
}

L2Operator random_dense(const GridSpec& g, std::uint64_t seed) {
    Rng rng(seed, 0);
    const int n = g.n_cells();
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m(i, j) += 0.2 * rng.normal();
    }
    Eigen::VectorXd alpha(n);
    for (int i = 0; i < n; ++i) alpha[i] = 0.5 + rng.uniform();
    return L2Operator(g, m, alpha, "random");
}

}  // namespace

TEST(GaussSim, IdentityCovarianceIsMin) {
    const GridSpec g(16);
    EXPECT_NEAR(covariance(builtin::identity(g), 0.25, 0.75), 0.25, 1e-15);
    const double times[] = {0.125, 0.5, 1.0};
    const Eigen::MatrixXd c = covariance_matrix(builtin::identity(g), times);
    EXPECT_NEAR(c(2, 1), 0.5, 1e-15);
    EXPECT_NEAR(c(0, 0), 0.125, 1e-15);
}

TEST(GaussSim, PathValuesArePairingsWithIndicatorImages) {
    const GridSpec g(32);
    const L2Operator a = builtin::perturbation(0.7, reference_volterra(g));
    const NoiseSample noise = sample_noise(g, 5, 2);
    const GaussPath x = integrator_path(a, noise);
    ASSERT_EQ(x.values[0].size(), 33);
    EXPECT_EQ(x.values[0][0], 0.0);
    for (int k : {1, 7, 20, 32}) {
        EXPECT_NEAR(x.values[0][k], pairing(apply(a, cell_indicator(g, 0, k)), noise), 1e-12);
    }
}

TEST(GaussSim, SameSeedSamePath) {
    const GridSpec g(64);
    const GaussPath a = integrator_path(builtin::identity(g), sample_noise(g, 3, 9));
    const GaussPath b = integrator_path(builtin::identity(g), sample_noise(g, 3, 9));
    EXPECT_EQ(a.values[0], b.values[0]);
}

TEST(GaussSim, VarianceMatchesCovariance) {
    const GridSpec g(32);
    const L2Operator a = builtin::perturbation(1.0, reference_volterra(g));
    constexpr int reps = 20000;
    double s2 = 0.0;
    for (int r = 0; r < reps; ++r) {
        const double v = integrator_path(a, sample_noise(g, 17, static_cast<std::uint64_t>(r))).values[0][16];
        s2 += v * v;
    }
    const double var = covariance(a, 0.5, 0.5);
    // Relative SE of a variance estimate is sqrt(2 / reps) ~ 1%.
    EXPECT_NEAR(s2 / reps, var, 0.04 * var);
}

TEST(GaussSim, BridgeHitsEndpoint) {
    const GridSpec g(64);
    const NoiseSample n[] = {sample_noise(g, 1, 0), sample_noise(g, 1, 1)};
    const double a[] = {2.5, -1.0};
    const GaussPath y = bridge_path(a, n);
    ASSERT_EQ(y.dim(), 2);
    EXPECT_NEAR(y.values[0][64], 2.5, 1e-12);
    EXPECT_NEAR(y.values[1][64], -1.0, 1e-12);
    EXPECT_EQ(y.values[0][0], 0.0);
}

TEST(IndicatorGeometry, MatchesFineGridReference) {
    const GridSpec g(6);
    constexpr int r = 8;
    const L2Operator a1 = random_dense(g, 1);
    const L2Operator a2 = random_dense(g, 2);
    const L2Operator id = builtin::identity(g);
    Eigen::VectorXd m(6);
    m << 1, 2, 0.5, 3, 1.5, 0.7;
    const L2Operator diag = builtin::multiplication(L2Vec(g, m));
    const std::pair<const L2Operator*, const L2Operator*> pairs[] = {{&a1, &a2}, {&a1, &a1}, {&id, &diag},
                                                                      {&diag, &diag}, {&a2, &id}};
    for (const auto& [p, q] : pairs) {
        const IndicatorImageNorm norm(*p, *q);
        for (int t = 0; t <= 6 * r; t += 5) {
            for (int s = 0; s <= 6 * r; s += 3) {
                const double ref = reference_norm(*p, *q, t, s, r);
                EXPECT_NEAR(norm(static_cast<double>(t) / (6 * r), static_cast<double>(s) / (6 * r)), ref,
                            1e-12 * (1.0 + ref))
                    << p->label() << " " << q->label() << " t=" << t << " s=" << s;
            }
        }
    }
}

TEST(Moments, IdentitySecondMoment) {
    // (2/sqrt(2 pi)) int_{s<t} (t - s)^{-1/2} = 8 / (3 sqrt(2 pi)).
    const MomentQuadrature m = second_moment_exact(builtin::identity(GridSpec(64)), 2);
    EXPECT_NEAR(m.value, 1.063846081070487, 1e-9);
    EXPECT_LT(m.error_estimate, 1e-6);
    // Grid independence for the identity.
    EXPECT_NEAR(second_moment_exact(builtin::identity(GridSpec(7)), 2).value, m.value, 1e-9);
}

TEST(Moments, RegularizedIdentity) {
    const MomentQuadrature m = second_moment_regularized(builtin::identity(GridSpec(32)), 1e-3, 2);
    EXPECT_NEAR(m.value, 1.014945956860544, 1e-8);
}

TEST(Moments, CrossMomentOfEqualOperatorsIsSecondMoment) {
    const GridSpec g(12);
    const L2Operator a = builtin::perturbation(0.5, reference_volterra(g));
    const double m = second_moment_exact(a, 1).value;
    EXPECT_NEAR(cross_moment_exact(a, a, 1).value, m, 1e-6 * m);
    const L2Operator b = builtin::perturbation(0.2, reference_volterra(g));
    EXPECT_NEAR(cross_moment_exact(a, b, 1).value, cross_moment_exact(b, a, 1).value, 1e-7);
}

TEST(Moments, ScaledIdentityConvergenceOracle) {
    // A_n = (1 + 1/n) I against A = I; values from an independent mpmath computation.
    const GridSpec g(16);
    const L2Operator id = builtin::identity(g);
    const int ns[] = {1, 2, 4, 8, 16, 32, 64};
    const double oracle[] = {0.7092307207, 0.5319230405, 0.3546153604, 0.2127692162,
                             0.1182051201, 0.06257918124, 0.03223776003};
    const auto pts = lt_convergence_experiment([&](int n) { return scaled(1.0 + 1.0 / n, id); }, id, ns, 2);
    ASSERT_EQ(pts.size(), 7u);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        EXPECT_EQ(pts[i].n, ns[i]);
        // The reported refinement error must cover the true error.
        EXPECT_NEAR(pts[i].value, oracle[i], pts[i].error_estimate) << ns[i];
        EXPECT_LT(pts[i].error_estimate, 1e-5 * oracle[i]) << ns[i];
        EXPECT_NEAR(pts[i].inverse_norm, 1.0 / (1.0 + 1.0 / ns[i]), 1e-12);
    }
}

TEST(Moments, SingularOperatorRejected) {
    const GridSpec g(8);
    Eigen::VectorXd m = Eigen::VectorXd::Ones(8);
    m[5] = 0.0;
    EXPECT_THROW(second_moment_exact(builtin::multiplication(L2Vec(g, m)), 1), SingularOperatorError);
    EXPECT_THROW(second_moment_exact(reference_volterra(g), 1), SingularOperatorError);
}

TEST(LocalTime, KernelAndBandwidth) {
    EXPECT_NEAR(gaussian_kernel(0.0, 0.5), 1.0 / std::sqrt(kPi), 1e-15);
    const GridSpec g(100);
    EXPECT_DOUBLE_EQ(bandwidth_floor(g), 4e-4);
    EXPECT_THROW(require_bandwidth(g, 1e-4), std::invalid_argument);
    EXPECT_NO_THROW(require_bandwidth(g, 4e-4));
}

TEST(LocalTime, ZeroPathKernelEstimate) {
    const GridSpec g(64);
    const GaussPath z = GaussPath::zero(g);
    EXPECT_NEAR(local_time_kernel(z, 0.1, 0.5, 0.01), 0.5 * gaussian_kernel(0.1, 0.01), 1e-14);
}

TEST(LocalTime, OccupationFormula) {
    const GridSpec g(4096);
    const GaussPath x = integrator_path(builtin::identity(g), sample_noise(g, 8));
    const LocalTimeEstimate est = occupation_density(x);
    double total = 0.0;
    for (double v : est.values) total += v * est.bandwidth;
    EXPECT_NEAR(total, 1.0, 1e-12);
    auto phi = [](double u) { return std::exp(-u * u) * std::cos(u); };
    EXPECT_NEAR(occupation_integral(x, phi), occupation_pairing(est, phi), 5e-3);
}

TEST(LocalTime, KernelEstimatorIsUnbiasedForItsExpectation) {
    // E h sum_{k<n} f_eps(w(t_k)) = h sum_k (2 pi (t_k + eps))^{-1/2}.
    const GridSpec g(512);
    const double eps = 1e-2;
    double expect = 0.0;
    for (int k = 0; k < 512; ++k) expect += g.h() / std::sqrt(2 * kPi * (g.node(k) + eps));
    const MCEstimate e = mc_local_time(builtin::identity(g), 0.0, 1.0, eps, 4000, 42);
    EXPECT_NEAR(e.mean, expect, 4 * e.se);
}

TEST(LocalTime, SelfOverlapAgreesWithExactMoment) {
    const GridSpec g(512);
    const L2Operator id = builtin::identity(g);
    const MCEstimate e = mc_selfoverlap(id, 1e-3, 600, 42);
    const double exact = second_moment_exact(id, 2).value;
    EXPECT_NEAR(e.mean, exact, 3 * e.se + selfoverlap_bias_bound(id, 1e-3, 2));
}

TEST(LocalTime, ConvergenceGapVanishesForEqualOperators) {
    const GridSpec g(128);
    const L2Operator a = builtin::perturbation(0.5, reference_volterra(g));
    const MCEstimate same = mc_convergence_gap(a, a, 1e-2, 20, 4);
    EXPECT_NEAR(same.mean, 0.0, 1e-10);
    const MCEstimate diff = mc_convergence_gap(builtin::identity(g), a, 1e-2, 50, 4);
    EXPECT_GT(diff.mean, 0.0);
}
