#include <gtest/gtest.h>

#include <cmath>

#include "gei/depmeasures.hpp"
#include "gei/errors.hpp"
#include "gei/pit.hpp"
#include "support.hpp"

using namespace gei;
using namespace gei::testing;

namespace {

const std::vector<ScoreKind> kKinds = {ScoreKind::spearman, ScoreKind::vdw, ScoreKind::savage,
                                       ScoreKind::savage_classical};

Matrix tent_sample(std::size_t n, Rng& rng) {
    Matrix m(n, 2);
    for (std::size_t t = 0; t < n; ++t) {
        const double u = rng.uniform();
        m(t, 0) = u;
        m(t, 1) = 1.0 - std::fabs(2.0 * u - 1.0);
    }
    return m;
}

}  // namespace

TEST(Scores, FamilyConstants) {
    for (auto k : kKinds) {
        const ScoreFamily f{k};
        EXPECT_NEAR(f.integral(1.0) - f.integral(0.0), f.mean(), 1e-15) << to_string(k);
        EXPECT_EQ(score_kind_from_string(to_string(k)), k);
    }
    EXPECT_THROW(score_kind_from_string("kendall"), InvalidArgument);
    const ScoreFamily vdw{ScoreKind::vdw};
    EXPECT_NEAR(vdw.integral(0.3), -std::exp(-0.5 * std::pow(vdw.quantile(0.3), 2)) / std::sqrt(2 * M_PI), 1e-14);
    EXPECT_NEAR(vdw.quantile(0.975), 1.959963984540054, 1e-12);
    const ScoreFamily savage{ScoreKind::savage};
    EXPECT_NEAR(savage.integral(0.4), 0.4 * std::log(0.4) - 0.4, 1e-15);
    EXPECT_EQ(savage.integral(0.0), 0.0);
    EXPECT_EQ(ScoreFamily{ScoreKind::spearman}.reference_variance(), 1.0 / 12.0);
}

TEST(Scores, SpearmanScoresAreMidGridRanks) {
    const std::vector<double> x{0.5, 0.1, 0.9, 0.3};
    const auto s = empirical_scores(x, ScoreFamily{ScoreKind::spearman});
    const std::vector<int> ranks{3, 1, 4, 2};
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(s[i], (ranks[i] - 0.5) / 4.0, 1e-15);
}

TEST(Scores, TiesShareTheQuotientScore) {
    const std::vector<double> x{1.0, 0.0, 1.0, 0.0, 1.0};
    for (auto k : kKinds) {
        const ScoreFamily f{k};
        const auto s = empirical_scores(x, f);
        EXPECT_EQ(s[1], s[3]);
        EXPECT_EQ(s[0], s[2]);
        EXPECT_NEAR(s[1], (f.integral(0.4) - f.integral(0.0)) / 0.4, 1e-14);
        EXPECT_NEAR(s[0], (f.integral(1.0) - f.integral(0.4)) / 0.6, 1e-14);
    }
}

TEST(Scores, ScoresAreCentered) {
    Rng rng(1);
    const Matrix m = uniform_matrix(997, 1, rng);
    for (auto k : kKinds) {
        const ScoreFamily f{k};
        const auto s = empirical_scores(m.col(0), f);
        double centered = 0.0;
        for (double v : s) centered += v - f.mean();
        EXPECT_LT(std::fabs(centered), 1e-9) << to_string(k);
    }
}

TEST(CrossCorrelation, IdenticalSeriesGiveOne) {
    Rng rng(2);
    Matrix m = uniform_matrix(300, 2, rng);
    for (std::size_t t = 0; t < 300; ++t) m(t, 1) = m(t, 0);
    EXPECT_NEAR(generalized_cross_correlation(m, {0, 1}, {0, 0}), 1.0, 1e-12);
    for (auto k : kKinds) EXPECT_NEAR(dependence_coefficient(m, {0, 1}, {0, 0}, ScoreFamily{k}), 1.0, 1e-12);
}

TEST(CrossCorrelation, ZeroVarianceColumnIsADataError) {
    Matrix m(10, 2, 0.5);
    m(3, 1) = 0.2;
    EXPECT_THROW(generalized_cross_correlation(m, {0, 1}, {0, 0}), DataError);
    EXPECT_THROW(dependence_coefficient(m, {0, 1}, {0, 0}, ScoreFamily{}), DataError);
}

TEST(CrossCorrelation, IndependentPermutationsAreStandardNormal) {
    Rng rng(3);
    std::mt19937_64 engine(3);
    const std::size_t n = 10000;
    const Matrix base = uniform_matrix(n, 2, rng);
    int inside = 0;
    const int reps = 300;
    for (int r = 0; r < reps; ++r) {
        const Matrix m = permute_columns(base, engine);
        inside += std::fabs(std::sqrt(double(n)) * generalized_cross_correlation(m, {0, 1}, {0, 0})) < 3.0;
    }
    EXPECT_GE(inside, static_cast<int>(0.99 * reps));
}

TEST(CrossCorrelation, TentMapIsUncorrelated) {
    Rng rng(4);
    const Matrix m = tent_sample(10000, rng);
    EXPECT_LT(std::fabs(generalized_cross_correlation(m, {0, 1}, {0, 0})), 0.03);
}

TEST(DependenceCoefficient, SavageOnTentMap) {
    Rng rng(5);
    const Matrix m = tent_sample(10000, rng);
    EXPECT_NEAR(dependence_coefficient(m, {0, 1}, {0, 0}, ScoreFamily{ScoreKind::savage}), 0.41776, 0.02);
    EXPECT_NEAR(dependence_coefficient(m, {0, 1}, {0, 0}, ScoreFamily{ScoreKind::savage_classical}),
                1.0 - M_PI * M_PI / 8.0, 0.02);
    // Closed forms of the two limits.
    EXPECT_NEAR(1.0 - M_PI * M_PI / 12.0 + 0.5 * std::log(2.0) * std::log(2.0), 0.41776, 5e-6);
}

TEST(DependenceCoefficient, BernoulliMarginAgainstTheTentMapFormula) {
    for (double p : {0.25, 0.5}) {
        Rng rng(6);
        const std::size_t n = 20000;
        Matrix raw = tent_sample(n, rng);
        for (std::size_t t = 0; t < n; ++t) raw(t, 0) = raw(t, 0) > p ? 1.0 : 0.0;
        const double expected = 6.0 * p * (0.5 - p);
        const ScoreFamily spearman{ScoreKind::spearman};
        EXPECT_NEAR(reference_dependence_coefficient(raw, {0, 1}, {0, 0}, spearman), expected, 0.02) << p;

        // Same limit through the randomized transform of the Bernoulli margin.
        Matrix randomized = raw;
        const ConditionalLaw f1 = DiscreteLaw{{0.0, 1.0}, {p, 1.0 - p}};
        for (std::size_t t = 0; t < n; ++t) randomized(t, 0) = generalized_error(f1, raw(t, 0), rng.uniform());
        EXPECT_NEAR(dependence_coefficient(randomized, {0, 1}, {0, 0}, spearman), expected, 0.02) << p;
    }
}

TEST(DependenceCoefficient, InvariantUnderIncreasingTransforms) {
    Rng rng(7);
    const Matrix e = tent_sample(500, rng);
    Matrix f = e;
    for (std::size_t t = 0; t < 500; ++t) {
        f(t, 0) = std::log(e(t, 0));
        f(t, 1) = 3.0 * e(t, 1) + 1.0;
    }
    for (auto k : kKinds)
        EXPECT_EQ(dependence_coefficient(e, {0, 1}, {0, 1}, ScoreFamily{k}),
                  dependence_coefficient(f, {0, 1}, {0, 1}, ScoreFamily{k}));
}

TEST(DependenceCoefficient, PermutationVarianceIsNearOne) {
    Rng rng(8);
    std::mt19937_64 engine(8);
    const std::size_t n = 300;
    const Matrix base = uniform_matrix(n, 3, rng);
    for (auto k : kKinds) {
        std::vector<double> pair, triple;
        for (int r = 0; r < 2000; ++r) {
            const auto z = standardized_scores(permute_columns(base, engine), ScoreFamily{k});
            pair.push_back(std::sqrt(double(n)) * z.product_moment({0, 1}, {0, 0, 0}));
            triple.push_back(std::sqrt(double(n)) * z.product_moment({0, 1, 2}, {0, 1, 0}));
        }
        for (const auto* v : {&pair, &triple}) {
            const double var = variance_of(*v);
            EXPECT_GT(var, 0.8) << to_string(k);
            EXPECT_LT(var, 1.2) << to_string(k);
        }
    }
}

TEST(DependenceCoefficient, ProductMomentIsCircular) {
    const Matrix m = Matrix::from_columns({{1, 2, 3, 4}, {4, 1, 2, 3}});
    const StandardizedColumns z(m);
    EXPECT_NEAR(z.product_moment({0, 1}, {0, 1}), 1.0, 1e-12);
    EXPECT_NEAR(z.product_moment({0, 1}, {-1, 0}), 1.0, 1e-12);
    EXPECT_NEAR(z.product_moment({0, 1}, {3, 4}), 1.0, 1e-12);
}
