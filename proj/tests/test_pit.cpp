#include <gtest/gtest.h>

#include <cmath>

#include "gei/errors.hpp"
#include "gei/pit.hpp"
#include "support.hpp"

using namespace gei;
using namespace gei::testing;

namespace {

const DiscreteLaw kBernoulliHalf{{0.0, 1.0}, {0.5, 0.5}};

LocationScaleMixture mixed_law() {
    LocationScaleMixture m;
    m.zero_mass = 0.25;
    m.weights = {0.75};
    m.locations = {0.3};
    m.scales = {1.0};
    return m;
}

}  // namespace

TEST(Pit, BernoulliChainExample) {
    // X_{t-1} = 0, p = 0.6: G_t(0) = 0.6, X_t = 0 and V = 0.5 give U = 0.3.
    const ConditionalLaw g = DiscreteLaw{{0.0, 1.0}, {0.6, 0.4}};
    EXPECT_NEAR(generalized_error(g, 0.0, 0.5), 0.30, 1e-15);
    EXPECT_NEAR(generalized_error(g, 1.0, 0.5), 0.80, 1e-15);
}

TEST(Pit, ContinuousLawIgnoresTheRandomization) {
    const ConditionalLaw g = normal_law(0.0, 1.0);
    for (double v : {0.0, 0.3, 0.99}) EXPECT_EQ(generalized_error(g, 0.7, v), cdf(g, 0.7));
}

TEST(Pit, PoissonWithZeroVariate) {
    EXPECT_NEAR(generalized_error(poisson_law(1.0), 1.0, 0.0), std::exp(-1.0), 1e-15);
}

TEST(Pit, JTransformCases) {
    const ConditionalLaw normal = normal_law(0.0, 1.0);
    const double x = quantile(normal, 0.4);
    EXPECT_EQ(j_transform(normal, x, 0.7), 1.0);
    EXPECT_EQ(j_transform(normal, x, 0.3), 0.0);
    EXPECT_NEAR(j_transform(kBernoulliHalf, 0.0, 0.25), 0.5, 1e-15);
    for (const ConditionalLaw& g : {normal, ConditionalLaw(kBernoulliHalf), ConditionalLaw(poisson_law(2.0))})
        for (double xx : {0.0, 1.0, 3.0}) EXPECT_EQ(j_transform(g, xx, 1.0), 1.0);
}

TEST(Pit, Chi0Cases) {
    EXPECT_EQ(chi0(normal_law(0.0, 1.0), 0.2, 0.4), 0.0);
    EXPECT_NEAR(chi0(kBernoulliHalf, 0.2, 0.4), 0.04, 1e-15);
    // Atom spanning [0.3, 0.8].
    const DiscreteLaw g{{-1.0, 0.0, 1.0}, {0.3, 0.5, 0.2}};
    EXPECT_NEAR(chi0(g, 0.5, 0.5), 0.12, 1e-15);
    // u and v on different atoms.
    EXPECT_EQ(chi0(g, 0.1, 0.5), 0.0);
}

TEST(Pit, RandomizedPitFormulaAndDeterminism) {
    Rng rng(3);
    const auto chain = simulate_bernoulli_chain(200, 0.7, rng);
    std::vector<double> normal_col;
    std::vector<ConditionalLaw> normal_laws;
    for (std::size_t t = 0; t < 200; ++t) {
        normal_col.push_back(rng.normal());
        normal_laws.push_back(normal_law(0.0, 1.0));
    }
    const SeriesPanel series(Matrix::from_columns({chain.values, normal_col}));
    const ConditionalTrace trace({chain.laws, normal_laws});
    const RandomizationPlan plan{4, 99};
    const auto panel = randomized_pit(series, trace, plan);
    ASSERT_EQ(panel.m(), 4u);
    EXPECT_EQ(panel.source_seed, 99u);
    for (std::size_t k = 0; k < 4; ++k) {
        for (std::size_t t = 0; t < 200; ++t) {
            const double x = chain.values[t];
            const double expected =
                cdf_left(chain.laws[t], x) + randomization_variate(plan, k, 0, t) * atom(chain.laws[t], x);
            EXPECT_NEAR(panel.replicates[k](t, 0), expected, 1e-15);
            // Continuous column: identical across replicates.
            EXPECT_EQ(panel.replicates[k](t, 1), cdf(normal_laws[t], normal_col[t]));
            EXPECT_GE(panel.replicates[k](t, 0), 0.0);
            EXPECT_LE(panel.replicates[k](t, 0), 1.0);
        }
    }
    EXPECT_EQ(randomized_pit(series, trace, plan).replicates, panel.replicates);
    EXPECT_NE(randomized_pit(series, trace, {4, 100}).replicates[0], panel.replicates[0]);
    // A smaller plan reproduces the leading replicates.
    EXPECT_EQ(randomized_pit(series, trace, {2, 99}).replicates[1], panel.replicates[1]);
}

TEST(Pit, ErrorsIdentifyTheFailingEntry) {
    const SeriesPanel series(Matrix(5, 2, 0.1));
    std::vector<ConditionalLaw> ok(5, normal_law(0.0, 1.0));
    auto bad = ok;
    bad[3] = normal_law(NAN, 1.0);
    try {
        randomized_pit(series, ConditionalTrace({ok, bad}), {1, 0});
        FAIL();
    } catch (const ModelEvaluationError& e) {
        EXPECT_EQ(e.time_index(), 3u);
        EXPECT_EQ(e.series_index(), 1u);
    }
    EXPECT_THROW(randomized_pit(series, ConditionalTrace({ok, ok}), {0, 0}), InvalidArgument);
    EXPECT_THROW(randomized_pit(series, ConditionalTrace({ok}), {1, 0}), InvalidArgument);
}

TEST(Pit, BernoulliChainErrorsAreUniform) {
    Rng rng(11);
    const auto chain = simulate_bernoulli_chain(100000, 0.6, rng);
    const RandomizationPlan plan{1, 5};
    std::vector<double> u;
    for (std::size_t t = 0; t < chain.values.size(); ++t)
        u.push_back(generalized_error(chain.laws[t], chain.values[t], randomization_variate(plan, 0, 0, t)));
    for (double level = 0.1; level < 0.95; level += 0.1) {
        const double frac =
            std::count_if(u.begin(), u.end(), [&](double x) { return x <= level; }) / static_cast<double>(u.size());
        EXPECT_LT(std::fabs(frac - level), 0.01) << level;
    }
    EXPECT_GT(ks_uniform_p(u), 0.001);
}

TEST(Pit, JTransformIsUnbiasedAndMatchesTheCovarianceIdentity) {
    const std::vector<ConditionalLaw> laws = {normal_law(1.0, 2.0), poisson_law(1.5), ConditionalLaw(mixed_law()),
                                              ConditionalLaw(kBernoulliHalf)};
    Rng rng(21);
    const std::size_t n = 40000;
    for (const auto& g : laws) {
        std::vector<double> xs(n);
        for (auto& x : xs) x = quantile(g, rng.uniform());
        for (auto [u, v] : {std::pair{0.2, 0.4}, std::pair{0.5, 0.5}, std::pair{0.35, 0.9}}) {
            std::vector<double> ju(n), jv(n), prod(n);
            for (std::size_t i = 0; i < n; ++i) {
                ju[i] = j_transform(g, xs[i], u);
                jv[i] = j_transform(g, xs[i], v);
            }
            const double mu = mean_of(ju), mv = mean_of(jv);
            EXPECT_LT(std::fabs(mu - u), 3.0 * std::sqrt(variance_of(ju) / n) + 1e-12);
            for (std::size_t i = 0; i < n; ++i) prod[i] = (ju[i] - u) * (jv[i] - v);
            const double cov = mean_of(prod);
            const double expected = std::min(u, v) - u * v - chi0(g, u, v);
            EXPECT_LT(std::fabs(cov - expected), 4.0 * std::sqrt(variance_of(prod) / n) + 1e-12)
                << "u=" << u << " v=" << v;
        }
    }
}

TEST(Pit, RelabelingTheSupportLeavesErrorsUnchanged) {
    const DiscreteLaw g{{0.0, 1.0, 2.0}, {0.2, 0.5, 0.3}};
    const DiscreteLaw h{{-5.0, std::exp(1.0), 40.0}, {0.2, 0.5, 0.3}};  // increasing map of the support
    for (std::size_t i = 0; i < 3; ++i)
        for (double v : {0.0, 0.37, 1.0}) EXPECT_EQ(generalized_error(g, g.support[i], v), generalized_error(h, h.support[i], v));
}

TEST(Pit, AveragingOverRandomizations) {
    auto identity = [](const Matrix& m) { return std::vector<double>{m(0, 0), m(1, 1)}; };
    GeneralizedErrorPanel panel;
    EXPECT_THROW(average_over_randomizations(identity, panel), InvalidArgument);
    panel.replicates = {Matrix::from_columns({{0.1, 0.2}, {0.3, 0.4}})};
    auto one = average_over_randomizations(identity, panel);
    EXPECT_TRUE(one.distribution_free);
    EXPECT_EQ(one.mean, (std::vector<double>{0.1, 0.4}));
    panel.replicates.push_back(Matrix::from_columns({{0.5, 0.2}, {0.3, 0.8}}));
    auto two = average_over_randomizations(identity, panel);
    EXPECT_FALSE(two.distribution_free);
    EXPECT_NEAR(two.mean[0], 0.3, 1e-15);
    EXPECT_NEAR(two.mean[1], 0.6, 1e-15);
}
