#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <set>

#include "gaussint/grid.hpp"
#include "gaussint/l2operator.hpp"
#include "gaussint/l2vec.hpp"
#include "gaussint/operator_config.hpp"
#include "gaussint/param_table.hpp"
#include "gaussint/parallel.hpp"
#include "gaussint/quadrature.hpp"
#include "gaussint/random.hpp"
#include "gaussint/stats.hpp"
#include "gaussint/verify.hpp"

using namespace gaussint;

TEST(Grid, NodesAndAlignment) {
    const GridSpec g(8);
    EXPECT_DOUBLE_EQ(g.h(), 0.125);
    EXPECT_EQ(g.node(8), 1.0);
    EXPECT_EQ(g.nearest_node(0.26), 2);
    EXPECT_EQ(g.aligned_node(0.375), 3);
    EXPECT_THROW(g.aligned_node(0.3), std::invalid_argument);
    EXPECT_THROW(GridSpec(1), std::invalid_argument);
}

TEST(L2Vec, InnerProductCarriesCellWidth) {
    const GridSpec g(4);
    const L2Vec one = cell_indicator(g, 0, 4);
    EXPECT_DOUBLE_EQ(norm_squared(one), 1.0);
    const L2Vec half = indicator(g, 0.0, 0.5);
    EXPECT_DOUBLE_EQ(inner(one, half), 0.5);
    EXPECT_THROW(indicator(g, 0.6, 0.5), std::invalid_argument);
    EXPECT_THROW(L2Vec(g, Eigen::VectorXd::Zero(3)), std::invalid_argument);
    EXPECT_THROW(inner(one, cell_indicator(GridSpec(8), 0, 1)), std::invalid_argument);
}

TEST(L2Operator, IdentityAndInverse) {
    const GridSpec g(16);
    const L2Operator id = builtin::identity(g);
    EXPECT_DOUBLE_EQ(id.sigma_min(), 1.0);
    EXPECT_DOUBLE_EQ(id.sigma_max(), 1.0);
    EXPECT_FALSE(id.is_singular());

    const L2Operator k = reference_volterra(g);
    EXPECT_LT(k.sigma_max(), 0.5);
    const L2Operator a = builtin::perturbation(1.0, k);
    const L2Operator ai = invert(a);
    const Eigen::MatrixXd prod = compose(a, ai).matrix();
    EXPECT_LT((prod - Eigen::MatrixXd::Identity(16, 16)).norm(), 1e-12);
    // Volterra has zero complement scale, so I + K keeps scale 1.
    EXPECT_DOUBLE_EQ(a.complement_scale().minCoeff(), 1.0);
    EXPECT_DOUBLE_EQ(k.complement_scale().maxCoeff(), 0.0);
}

TEST(L2Operator, SingularInvertThrows) {
    const GridSpec g(4);
    Eigen::VectorXd m(4);
    m << 1, 2, 0, 3;
    const L2Operator op = builtin::multiplication(L2Vec(g, m));
    EXPECT_TRUE(op.is_singular());
    EXPECT_THROW(invert(op), SingularOperatorError);
}

TEST(L2Operator, ComplementProjectionIsIdempotent) {
    const GridSpec g(8);
    Eigen::VectorXd c(8);
    c << 1, -2, 0.5, 3, 1, 1, -1, 2;
    const L2Vec v(g, c);
    const L2Operator q = builtin::complement_projection(v);
    EXPECT_LT(norm(apply(q, v)), 1e-14);
    const Eigen::MatrixXd m = q.matrix();
    EXPECT_LT((m * m - m).norm(), 1e-13);
    EXPECT_LT((m - m.transpose()).norm(), 1e-13);
}

TEST(L2Operator, AdjointMatchesInnerProduct) {
    const GridSpec g(6);
    const L2Operator k = reference_volterra(g);
    const L2Vec f(g, Eigen::VectorXd::LinSpaced(6, -1, 2));
    const L2Vec h(g, Eigen::VectorXd::LinSpaced(6, 3, 0.5));
    EXPECT_NEAR(inner(apply(k, f), h), inner(f, apply(adjoint(k), h)), 1e-15);
}

TEST(ParamTable, ParsesAndRejectsUnknownKeys) {
    const ParamTable t = ParamTable::parse("# comment\n grid = 64 \neps=1e-3\nnames = a, b\n\n");
    EXPECT_EQ(t.require_int("grid"), 64);
    EXPECT_DOUBLE_EQ(t.require_double("eps"), 1e-3);
    EXPECT_THROW(t.require_all_consumed(), ConfigError);
    t.get("names");
    EXPECT_NO_THROW(t.require_all_consumed());
}

TEST(ParamTable, Errors) {
    EXPECT_THROW(ParamTable::parse("a = 1\na = 2\n"), ConfigError);
    EXPECT_THROW(ParamTable::parse("no equals sign\n"), ConfigError);
    const ParamTable t = ParamTable::parse("x = 1.5\ny = abc\n");
    EXPECT_THROW(t.require_int("x"), ConfigError);
    EXPECT_THROW(t.require_double("y"), ConfigError);
    EXPECT_THROW(t.require("z"), ConfigError);
    EXPECT_THROW(ParamTable::load("/nonexistent/file.cfg"), ConfigError);
}

TEST(ParamTable, SectionsAndSerialization) {
    const ParamTable t = ParamTable::parse("op.kind = identity\nop.scale = 2\nseed = 1\n");
    const ParamTable op = t.section("op");
    EXPECT_EQ(op.require("kind"), "identity");
    EXPECT_THROW(op.require_all_consumed(), ConfigError);
    EXPECT_EQ(t.serialize(), "op.kind = identity\nop.scale = 2\nseed = 1\n");
    EXPECT_EQ(parse_double_list("1, 2,3.5", "l"), (std::vector<double>{1, 2, 3.5}));
}

TEST(ParamTable, Fnv1a64KnownValues) {
    EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(OperatorConfig, BuildsFamilies) {
    const GridSpec g(8);
    EXPECT_EQ(make_operator(ParamTable::parse("kind = identity"), g).matrix(), Eigen::MatrixXd::Identity(8, 8));

    const ParamTable pert = ParamTable::parse(
        "kind = perturbation\nepsilon = 0.5\nkernel = constant\nkernel_value = 1\n");
    const L2Operator p = make_operator(pert, g);
    EXPECT_NO_THROW(pert.require_all_consumed());
    EXPECT_DOUBLE_EQ(p.matrix()(3, 1), 0.5 * g.h());
    EXPECT_DOUBLE_EQ(p.matrix()(1, 3), 0.0);
    EXPECT_DOUBLE_EQ(p.matrix()(2, 2), 1.0 + 0.5 * g.h() / 2);

    const L2Operator m = make_operator(ParamTable::parse("kind = multiplication\nvalues = 1, 2"), g);
    EXPECT_DOUBLE_EQ(m.matrix()(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(m.matrix()(7, 7), 2.0);
    EXPECT_DOUBLE_EQ(m.complement_scale()[7], 2.0);

    EXPECT_THROW(make_operator(ParamTable::parse("kind = multiplication\nvalues = 1, 2, 3"), g),
                 ConfigError);
    EXPECT_THROW(make_operator(ParamTable::parse("kind = nonsense"), g), ConfigError);
}

TEST(OperatorConfig, KernelTableFromCsv) {
    const std::string path = ::testing::TempDir() + "kernel_table.csv";
    {
        std::ofstream f(path);
        f << "row,col,value\n# lower entry\n2,0,4.0\n";
    }
    const GridSpec g(4);
    const ParamTable t = ParamTable::parse("kind = volterra\nkernel = table\nkernel_table = " + path + "\n");
    const L2Operator k = make_operator(t, g);
    EXPECT_DOUBLE_EQ(k.matrix()(2, 0), 4.0 * g.h());
    EXPECT_DOUBLE_EQ(k.matrix().cwiseAbs().sum(), 4.0 * g.h());
}

TEST(Rng, DeterministicPerStream) {
    Rng a(7, 3), b(7, 3), c(7, 4);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const double x = a.normal();
        EXPECT_EQ(x, b.normal());
        differs = differs || x != c.normal();
    }
    EXPECT_TRUE(differs);
}

TEST(Rng, UniformAndNormalMoments) {
    Rng r(42, 0);
    constexpr int n = 200000;
    double s = 0, s2 = 0, u = 0;
    std::set<int> ints;
    for (int i = 0; i < n; ++i) {
        const double z = r.normal();
        s += z;
        s2 += z * z;
        const double x = r.uniform();
        ASSERT_GE(x, 0.0);
        ASSERT_LT(x, 1.0);
        u += x;
        const int k = r.uniform_int(-2, 2);
        ASSERT_GE(k, -2);
        ASSERT_LE(k, 2);
        ints.insert(k);
    }
    EXPECT_NEAR(s / n, 0.0, 0.01);
    EXPECT_NEAR(s2 / n, 1.0, 0.01);
    EXPECT_NEAR(u / n, 0.5, 0.005);
    EXPECT_EQ(ints.size(), 5u);
}

TEST(Parallel, ResultsIndependentOfThreadCount) {
    auto work = [](int threads) {
        set_thread_count(threads);
        std::vector<double> v(1000);
        parallel_for(v.size(), [&](std::size_t i) { v[i] = Rng(1, i).normal(); });
        return pairwise_sum(v);
    };
    const double one = work(1);
    EXPECT_EQ(one, work(8));
    EXPECT_EQ(one, work(3));
    set_thread_count(1);
    EXPECT_THROW(set_thread_count(0), std::invalid_argument);
}

TEST(Parallel, PropagatesExceptions) {
    set_thread_count(4);
    EXPECT_THROW(parallel_for(100,
                              [](std::size_t i) {
                                  if (i == 37) throw std::runtime_error("boom");
                              }),
                 std::runtime_error);
    set_thread_count(1);
}

TEST(Stats, MeanAndStandardError) {
    const std::vector<double> x{1, 2, 3, 4};
    const MCEstimate e = mean_se(x);
    EXPECT_DOUBLE_EQ(e.mean, 2.5);
    EXPECT_NEAR(e.se, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
    EXPECT_EQ(e.reps, 4);
    std::vector<double> many(1 << 16, 0.1);
    EXPECT_NEAR(pairwise_sum(many), 0.1 * (1 << 16), 1e-10);
}

TEST(Quadrature, GaussLegendreExactForPolynomials) {
    for (int order : {7, 10, 15, 20, 25, 30}) {
        const GaussRule& r = gauss_legendre(order);
        ASSERT_EQ(static_cast<int>(r.nodes.size()), order);
        double s = 0.0;
        for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], 2 * order - 2);
        EXPECT_NEAR(s, 2.0 / (2 * order - 1), 1e-13) << order;
    }
    EXPECT_EQ(gauss_legendre(8).nodes.size(), 10u);
}

TEST(Quadrature, AdaptiveHandlesEndpointSingularity) {
    // Unsubstituted 1/sqrt(x) does not reach the tolerance, but the error estimate says so.
    const QuadResult r = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-10);
    EXPECT_NEAR(r.value, 2.0, 1e-3);
    EXPECT_LE(std::abs(r.value - 2.0), r.error);
    const double breaks[] = {0.0, 0.5, 1.0};
    EXPECT_NEAR(integrate_pieces([](double x) { return std::exp(x); }, breaks, 1e-12).value, std::exp(1.0) - 1.0,
                1e-13);
}

TEST(Verify, ObserveAndMerge) {
    VerifyReport a = make_report("a", 1e-9, 5);
    a.observe(0.5);
    a.observe(-1e-10, [] { return std::string("w1"); });
    EXPECT_TRUE(a.passed());
    EXPECT_EQ(a.witness, "w1");
    VerifyReport b = make_report("b", 1e-9, 5);
    b.observe(-1.0, [] { return std::string("w2"); });
    EXPECT_EQ(b.outcome, Outcome::fail);
    VerifyReport c = make_report("c", 1e-9, 5);
    c.outcome = Outcome::inconclusive;
    const VerifyReport ac[] = {a, c};
    EXPECT_EQ(merge(ac, "m").outcome, Outcome::inconclusive);
    const VerifyReport abc[] = {a, b, c};
    const VerifyReport m = merge(abc, "m");
    EXPECT_EQ(m.outcome, Outcome::fail);
    EXPECT_EQ(m.trials, 3);
    EXPECT_EQ(m.worst_margin, -1.0);
    EXPECT_EQ(m.witness, "w2");
    EXPECT_EQ(csv_row(m), "m,3,-1,1e-09,5,fail");
}

TEST(Verify, FormatDoubleRoundTrips) {
    for (double x : {0.1, 1.0 / 3.0, 1e-300, 123456789.125, -2.5}) {
        EXPECT_EQ(std::strtod(format_double(x).c_str(), nullptr), x);
    }
    EXPECT_EQ(format_double(0.5), "0.5");
    EXPECT_EQ(format_double(std::nan("")), "nan");
}
