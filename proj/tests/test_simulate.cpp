#include <gtest/gtest.h>

#include <cmath>

#include "gei/copula.hpp"
#include "gei/dgp.hpp"
#include "gei/errors.hpp"
#include "gei/inference.hpp"
#include "gei/pit.hpp"
#include "gei/study.hpp"
#include "support.hpp"

using namespace gei;
using namespace gei::testing;

namespace {

// O(n^2) sample Kendall tau; continuous draws have no ties.
double kendall_tau(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) s += ((x[i] - x[j]) * (y[i] - y[j]) > 0.0) ? 1.0 : -1.0;
    return 2.0 * s / (static_cast<double>(n) * (n - 1));
}

// Sample correlation of uniforms, equal to Spearman's rho in the limit.
double uniform_correlation(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - 0.5) * (y[i] - 0.5);
    return 12.0 * s / x.size();
}

std::vector<double> to_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

}  // namespace

TEST(Copula, ParameterConversions) {
    EXPECT_NEAR(gaussian_rho_from_tau(1.0 / 3.0), 0.5, 1e-14);
    EXPECT_NEAR(clayton_theta_from_tau(1.0 / 3.0), 1.0, 1e-14);
    for (double tau : {-0.7, -0.2, 0.05, 0.1282, 1.0 / 3.0, 0.8}) {
        EXPECT_NEAR(frank_tau_from_theta(frank_theta_from_tau(tau)), tau, 1e-9) << tau;
    }
    // tabulated: tau = 1/3 at theta ~ 3.306
    EXPECT_NEAR(frank_theta_from_tau(1.0 / 3.0), 3.306, 2e-3);
}

TEST(Copula, NamesRoundTrip) {
    for (auto f : {CopulaFamily::independence, CopulaFamily::gaussian, CopulaFamily::frank, CopulaFamily::clayton,
                   CopulaFamily::tentmap, CopulaFamily::romano_siegel}) {
        EXPECT_EQ(copula_family_from_string(to_string(f)), f);
    }
    EXPECT_THROW(copula_family_from_string("gumbel"), InvalidArgument);
}

TEST(Copula, ValidationRejectsBadParameters) {
    EXPECT_THROW(validate(CopulaSpec{CopulaFamily::gaussian, 1.0, 2}), InvalidArgument);
    EXPECT_THROW(validate(CopulaSpec{CopulaFamily::clayton, -0.1, 2}), InvalidArgument);
    EXPECT_THROW(validate(CopulaSpec{CopulaFamily::frank, -0.2, 3}), InvalidArgument);
    EXPECT_THROW(validate(CopulaSpec{CopulaFamily::tentmap, 0.0, 3}), InvalidArgument);
    EXPECT_THROW(validate(CopulaSpec{CopulaFamily::romano_siegel, 0.0, 2}), InvalidArgument);
    EXPECT_THROW(validate(CopulaSpec{CopulaFamily::independence, 0.0, 4}), InvalidArgument);
    EXPECT_NO_THROW(validate(CopulaSpec{CopulaFamily::frank, -0.2, 2}));
    EXPECT_NO_THROW(validate(CopulaSpec{CopulaFamily::gaussian, 1.0 / 3.0, 3}));
}

class CopulaFamilies : public ::testing::TestWithParam<std::tuple<CopulaFamily, double, int>> {};

TEST_P(CopulaFamilies, UniformMarginsAndKendallTau) {
    const auto [family, tau, dim] = GetParam();
    Rng rng(derive_seed(11, {static_cast<std::uint64_t>(family), static_cast<std::uint64_t>(tau * 1e4),
                             static_cast<std::uint64_t>(dim)}));
    const Matrix m = sample_copula({family, tau, dim}, 10000, rng);
    ASSERT_EQ(m.rows(), 10000u);
    ASSERT_EQ(m.cols(), static_cast<std::size_t>(dim));
    for (int j = 0; j < dim; ++j) {
        EXPECT_GT(ks_uniform_p(to_vector(m.col(j))), 1e-4) << "margin " << j;
    }
    const Matrix small = sample_copula({family, tau, dim}, 3000, rng);
    for (int a = 0; a < dim; ++a)
        for (int b = a + 1; b < dim; ++b) {
            EXPECT_NEAR(kendall_tau(small.col(a), small.col(b)), tau, 0.02) << a << "," << b;
        }
}

INSTANTIATE_TEST_SUITE_P(
    Exchangeable, CopulaFamilies,
    ::testing::Values(std::make_tuple(CopulaFamily::gaussian, 0.1282, 2),
                      std::make_tuple(CopulaFamily::gaussian, 1.0 / 3.0, 2),
                      std::make_tuple(CopulaFamily::gaussian, 1.0 / 3.0, 3),
                      std::make_tuple(CopulaFamily::clayton, 0.1282, 2),
                      std::make_tuple(CopulaFamily::clayton, 1.0 / 3.0, 2),
                      std::make_tuple(CopulaFamily::clayton, 1.0 / 3.0, 3),
                      std::make_tuple(CopulaFamily::frank, 0.1282, 2),
                      std::make_tuple(CopulaFamily::frank, 1.0 / 3.0, 2),
                      std::make_tuple(CopulaFamily::frank, 1.0 / 3.0, 3),
                      std::make_tuple(CopulaFamily::frank, -0.25, 2),
                      std::make_tuple(CopulaFamily::independence, 0.0, 3)));

TEST(Copula, TentMapIsAFunctionOfTheFirstCoordinate) {
    Rng rng(5);
    const Matrix m = sample_copula({CopulaFamily::tentmap, 0.0, 2}, 5000, rng);
    for (std::size_t t = 0; t < m.rows(); ++t) EXPECT_DOUBLE_EQ(m(t, 1), 1.0 - std::fabs(2.0 * m(t, 0) - 1.0));
    EXPECT_GT(ks_uniform_p(to_vector(m.col(1))), 1e-4);
    // V is a non-monotone function of U: linear correlation vanishes.
    EXPECT_LT(std::fabs(uniform_correlation(m.col(0), m.col(1))), 0.05);
}

TEST(Copula, RomanoSiegelIsPairwiseButNotJointlyIndependent) {
    Rng rng(17);
    const Matrix m = sample_copula({CopulaFamily::romano_siegel, 0.0, 3}, 20000, rng);
    for (int a = 0; a < 3; ++a) {
        EXPECT_GT(ks_uniform_p(to_vector(m.col(a))), 1e-4);
        for (int b = a + 1; b < 3; ++b) EXPECT_LT(std::fabs(uniform_correlation(m.col(a), m.col(b))), 0.05);
    }
    // Sign of the centred triple product is never negative.
    for (std::size_t t = 0; t < m.rows(); ++t) EXPECT_GE((m(t, 0) - 0.5) * (m(t, 1) - 0.5) * (m(t, 2) - 0.5), 0.0);

    Rng rng2(18);
    const Matrix x = sample_copula({CopulaFamily::romano_siegel, 0.0, 3}, 300, rng2);
    TestOptions opt;
    opt.statistics = {StatisticFamily::cvm};
    const StatisticReport r = evaluate(uniform_panel(x), opt);
    const TermResult* triple = nullptr;
    for (const auto& term : r.per_term) {
        if (term.kind == "S" && term.subset.size() == 3 && term.lag == LagVector{0, 0, 0}) triple = &term;
    }
    ASSERT_NE(triple, nullptr);
    EXPECT_LT(triple->p_value, 1e-6);
    EXPECT_LT(r.find("W")->p_value, 0.05);
}

TEST(Dgp, NamesAndDimensions) {
    for (auto d : {Dgp::dgp1, Dgp::dgp2, Dgp::dgp3, Dgp::iid_uniform}) EXPECT_EQ(dgp_from_string(to_string(d)), d);
    EXPECT_THROW(dgp_from_string("dgp9"), InvalidArgument);
    McStudySpec s;
    s.dgp = Dgp::dgp3;
    EXPECT_EQ(dgp_dimension(s), 3);
    EXPECT_THROW(validate(s), InvalidArgument);  // copula still 2-dimensional
    s.copula.dimension = 3;
    EXPECT_NO_THROW(validate(s));
    s.lag_shift = 300;
    EXPECT_THROW(validate(s), InvalidArgument);
}

TEST(Dgp, ValidationNamesTheField) {
    McStudySpec s;
    s.randomizations = 2;
    s.averaging_sizes = {1, 3};
    try {
        validate(s);
        FAIL();
    } catch (const InvalidArgument& e) {
        EXPECT_NE(std::string(e.what()).find("averaging_sizes"), std::string::npos);
    }
    s.averaging_sizes = {1, 2};
    s.level = 1.0;
    EXPECT_THROW(validate(s), InvalidArgument);
}

TEST(Dgp, DeterministicInSeedAndReplicate) {
    McStudySpec s;
    s.dgp = Dgp::dgp1;
    s.copula = {CopulaFamily::gaussian, 1.0 / 3.0, 2};
    s.n = 200;
    s.seed = 99;
    const auto a = generate_dgp(s, 3);
    const auto b = generate_dgp(s, 3);
    const auto c = generate_dgp(s, 4);
    EXPECT_EQ(a.series.values(), b.series.values());
    EXPECT_NE(a.series.values(), c.series.values());
}

TEST(Dgp, TrueTraceRecoversTheCopulaDraws) {
    // Continuous margins: the PIT with the true laws returns u exactly, so the errors carry
    // the copula's dependence at lag 0.
    McStudySpec s;
    s.dgp = Dgp::dgp1;
    s.copula = {CopulaFamily::gaussian, 1.0 / 3.0, 2};
    s.n = 3000;
    const auto sample = generate_dgp(s, 0);
    const auto errors = randomized_pit(sample.series, sample.trace, {1, 1});
    const Matrix& u = errors.replicates[0];
    EXPECT_GT(ks_uniform_p(to_vector(u.col(0))), 1e-4);
    EXPECT_GT(ks_uniform_p(to_vector(u.col(1))), 1e-4);
    EXPECT_NEAR(kendall_tau(u.col(0), u.col(1)), 1.0 / 3.0, 0.03);
}

TEST(Dgp, PoissonFeedbackAndAutoregressionStructure) {
    McStudySpec s;
    s.dgp = Dgp::dgp2;
    s.n = 2000;
    const auto sample = generate_dgp(s, 0);
    const auto x = sample.series.series(0);
    const auto y = sample.series.series(1);
    EXPECT_NO_THROW(sample.series.require_counts(0));
    for (std::size_t t = 1; t < s.n; ++t) {
        const auto& pl = std::get<PoissonMixture>(sample.trace.at(0, t));
        ASSERT_EQ(pl.means.size(), 1u);
        EXPECT_NEAR(pl.means[0], 1.0 + 0.1 * x[t - 1], 1e-12);
        const auto& gl = std::get<LocationScaleMixture>(sample.trace.at(1, t));
        EXPECT_NEAR(gl.locations[0], 0.5 * y[t - 1], 1e-12);
        EXPECT_NEAR(gl.scales[0], 1.0, 1e-12);
    }
    // Stationary mean of the count series is 1 / (1 - 0.1).
    EXPECT_NEAR(mean_of(to_vector(x)), 1.0 / 0.9, 0.08);
}

TEST(Dgp, CountPitBracketsTheUniformDraw) {
    McStudySpec s;
    s.dgp = Dgp::dgp2;
    s.copula = {CopulaFamily::clayton, 1.0 / 3.0, 2};
    s.n = 500;
    const auto sample = generate_dgp(s, 2);
    for (std::size_t t = 0; t < s.n; ++t) {
        const auto& law = sample.trace.at(0, t);
        const double xv = sample.series.series(0)[t];
        EXPECT_EQ(quantile(law, cdf(law, xv)), xv);
        EXPECT_GT(atom(law, xv), 0.0);
    }
}

TEST(Dgp, LagShiftMovesTheDependence) {
    McStudySpec s;
    s.dgp = Dgp::iid_uniform;
    s.copula = {CopulaFamily::gaussian, 0.5, 2};
    s.n = 2000;
    s.lag_shift = 2;
    const auto sample = generate_dgp(s, 0);
    const auto u = sample.series.series(0);
    const auto v = sample.series.series(1);
    std::vector<double> a, b;
    for (std::size_t t = 0; t + 2 < s.n; ++t) {
        a.push_back(u[t]);
        b.push_back(v[t + 2]);
    }
    EXPECT_NEAR(kendall_tau(std::span<const double>(a).first(1500), std::span<const double>(b).first(1500)), 0.5,
                0.04);
    EXPECT_LT(std::fabs(uniform_correlation(u, v)), 0.08);
}

TEST(Dgp, HeavyTailedMarginsStayInSupport) {
    McStudySpec s;
    s.dgp = Dgp::dgp1;
    s.margin = BaseFamily::centered_pareto6;
    s.n = 1000;
    const auto sample = generate_dgp(s, 0);
    for (std::size_t t = 0; t < s.n; ++t) {
        const auto& law = std::get<LocationScaleMixture>(sample.trace.at(1, t));
        EXPECT_EQ(law.base, BaseFamily::centered_pareto6);
        const double c = cdf(sample.trace.at(1, t), sample.series.series(1)[t]);
        EXPECT_GT(c, 0.0);
        EXPECT_LT(c, 1.0);
    }
}

TEST(Study, Type7Quantile) {
    EXPECT_DOUBLE_EQ(type7_quantile({4, 1, 3, 2}, 0.5), 2.5);
    EXPECT_NEAR(type7_quantile({1, 2, 3, 4}, 0.95), 3.85, 1e-12);
    EXPECT_DOUBLE_EQ(type7_quantile({7}, 0.99), 7.0);
    EXPECT_DOUBLE_EQ(type7_quantile({1, 2, 3}, 1.0), 3.0);
}

TEST(Study, ResultsDoNotDependOnThreadCount) {
    McStudySpec s;
    s.dgp = Dgp::dgp2;
    s.n = 60;
    s.replicates = 12;
    s.randomizations = 2;
    s.pair_max_lag = 2;
    s.triple_max_lag = 1;
    s.seed = 4;
    const auto a = run_study(s, 1);
    const auto b = run_study(s, 3);
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(a.rejection, b.rejection);
    EXPECT_EQ(a.completed, 12u);
    EXPECT_EQ(a.failed, 0u);
}

TEST(Study, SingleReplicateGivesZeroOrHundred) {
    McStudySpec s;
    s.n = 50;
    s.replicates = 1;
    s.pair_max_lag = 1;
    const auto r = run_study(s, 1);
    ASSERT_FALSE(r.rejection.empty());
    for (const auto& row : r.rejection) {
        EXPECT_TRUE(row.percent == 0.0 || row.percent == 100.0) << row.statistic;
        EXPECT_EQ(row.standard_error, 0.0);
    }
}

TEST(Study, StrongDependenceIsAlwaysRejected) {
    McStudySpec s;
    s.copula = {CopulaFamily::gaussian, 0.6, 2};
    s.n = 200;
    s.replicates = 10;
    s.statistics = {StatisticFamily::cvm, StatisticFamily::pearson};
    const auto r = run_study(s, 1);
    for (const auto& row : r.rejection) EXPECT_EQ(row.percent, 100.0) << row.statistic;
}

TEST(Study, QuantileModeReportsEveryAveragingSize) {
    McStudySpec s;
    s.dgp = Dgp::dgp2;
    s.n = 40;
    s.replicates = 30;
    s.randomizations = 3;
    s.averaging_sizes = {1, 3};
    s.mode = StudyMode::quantile;
    s.statistics = {StatisticFamily::cvm};
    s.pair_max_lag = 1;
    s.include_triples = false;
    const auto r = run_study(s, 1);
    EXPECT_TRUE(r.rejection.empty());
    std::size_t found = 0;
    for (const auto& q : r.quantiles) {
        if (q.statistic != "W") continue;
        ++found;
        EXPECT_TRUE(q.averaging == 1 || q.averaging == 3);
        EXPECT_TRUE(q.level == 0.95 || q.level == 0.99);
        EXPECT_GT(q.value, 0.0);
    }
    EXPECT_EQ(found, 4u);
    ASSERT_EQ(r.values.size(), 30u);
    // Values hold the M = 3 averages; their type-7 quantile matches the reported one.
    const std::size_t w = std::find(r.statistics.begin(), r.statistics.end(), "W") - r.statistics.begin();
    ASSERT_LT(w, r.statistics.size());
    std::vector<double> col;
    for (const auto& row : r.values) col.push_back(row[w]);
    for (const auto& q : r.quantiles)
        if (q.statistic == "W" && q.averaging == 3 && q.level == 0.95) EXPECT_DOUBLE_EQ(q.value, type7_quantile(col, 0.95));
}
