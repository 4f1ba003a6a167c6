#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "gei/errors.hpp"
#include "gei/lags.hpp"
#include "gei/laws.hpp"
#include "gei/panel.hpp"
#include "gei/rng.hpp"

using namespace gei;

TEST(Rng, DerivedSeedsDependOnEveryPathElement) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t a = 0; a < 20; ++a)
        for (std::uint64_t b = 0; b < 20; ++b) seen.insert(derive_seed(42, {a, b}));
    EXPECT_EQ(seen.size(), 400u);
    EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(1, {3, 2}));
    EXPECT_NE(derive_seed(1, {}), derive_seed(2, {}));
    EXPECT_EQ(derive_seed(9, {1, 2, 3}), derive_seed(9, {1, 2, 3}));
}

TEST(Rng, OpenUnitNeverHitsTheEndpoints) {
    EXPECT_GT(bits_to_open_unit(0), 0.0);
    EXPECT_LT(bits_to_open_unit(~0ULL), 1.0);
    Rng a(5), b(5);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.uniform(), b.uniform());
}

TEST(Panel, RejectsDegenerateShapesAndNonFiniteValues) {
    EXPECT_THROW(SeriesPanel(Matrix(1, 2)), InvalidArgument);
    EXPECT_THROW(SeriesPanel(Matrix(5, 1)), InvalidArgument);
    Matrix m(3, 2, 0.5);
    m(1, 1) = NAN;
    EXPECT_THROW(SeriesPanel{m}, InvalidArgument);
    m(1, 1) = INFINITY;
    EXPECT_THROW(SeriesPanel{m}, InvalidArgument);
    EXPECT_NO_THROW(SeriesPanel(Matrix(2, 2)));
}

TEST(Panel, CountValidationNamesTheOffendingEntry) {
    SeriesPanel p(Matrix::from_columns({{0, 1, 2.5}, {1, 1, 1}}), {"a", "b"});
    EXPECT_NO_THROW(p.require_counts(1));
    try {
        p.require_counts(0);
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("'a'"), std::string::npos);
    }
    EXPECT_THROW(Matrix::from_columns({{1, 2}, {1}}), InvalidArgument);
}

TEST(Laws, PoissonCdfArithmetic) {
    const ConditionalLaw g = poisson_law(1.0);
    EXPECT_NEAR(atom(g, 0.0), std::exp(-1.0), 1e-15);
    EXPECT_NEAR(cdf(g, 0.0), std::exp(-1.0), 1e-15);
    EXPECT_NEAR(cdf(g, 1.0), 2.0 * std::exp(-1.0), 1e-15);
    EXPECT_EQ(cdf_left(g, 0.0), 0.0);
    EXPECT_NEAR(cdf(g, 0.7), std::exp(-1.0), 1e-15);
    EXPECT_EQ(atom(g, 0.5), 0.0);
    EXPECT_EQ(quantile(g, 0.3), 0.0);
    EXPECT_EQ(quantile(g, 0.5), 1.0);
}

namespace {

std::vector<ConditionalLaw> sample_laws() {
    LocationScaleMixture zero_inflated;
    zero_inflated.zero_mass = 0.3;
    zero_inflated.weights = {0.4, 0.3};
    zero_inflated.locations = {-1.0, 2.0};
    zero_inflated.scales = {1.0, 0.5};
    LocationScaleMixture expo;
    expo.base = BaseFamily::centered_exponential;
    expo.weights = {1.0};
    expo.locations = {0.5};
    expo.scales = {2.0};
    LocationScaleMixture pareto;
    pareto.base = BaseFamily::centered_pareto6;
    pareto.weights = {0.5, 0.5};
    pareto.locations = {0.0, 1.0};
    pareto.scales = {1.0, 3.0};
    return {UniformLaw{},         normal_law(1.0, 2.0), zero_inflated, expo, pareto,
            PoissonMixture{{0.2, 0.8}, {0.5, 4.0}},   DiscreteLaw{{-1.0, 0.0, 2.5}, {0.2, 0.5, 0.3}}};
}

}  // namespace

TEST(Laws, CdfInvariantsHoldOnAGrid) {
    for (const auto& g : sample_laws()) {
        double previous = 0.0;
        for (int i = -6 * 64; i <= 12 * 64; ++i) {
            const double y = i / 64.0;
            const double c = cdf(g, y), cl = cdf_left(g, y);
            EXPECT_LE(0.0, cl);
            EXPECT_LE(cl, c + 1e-15);
            EXPECT_LE(c, 1.0);
            EXPECT_NEAR(atom(g, y), c - cl, 1e-15);
            EXPECT_GE(c, previous - 1e-15);
            previous = c;
            // Right-continuity: cdf(y) is the limit from above.
            EXPECT_NEAR(cdf(g, y + 1e-10), c, 1e-6);
        }
    }
}

TEST(Laws, QuantileIsTheGeneralizedInverse) {
    for (const auto& g : sample_laws()) {
        for (double u = 0.005; u < 1.0; u += 0.005) {
            const double y = quantile(g, u);
            EXPECT_GE(cdf(g, y), u - 1e-9);
            // Nothing smaller reaches u.
            EXPECT_LT(cdf_left(g, y), u + 1e-9);
        }
        for (double y = -3.0; y <= 8.0; y += 0.25) {
            const double c = cdf(g, y);
            if (c <= 0.0 || c + 1e-12 >= 1.0) continue;
            EXPECT_GE(quantile(g, c + 1e-12), y - 1e-7);
        }
    }
}

TEST(Laws, ZeroInflatedMixtureHasAtomAtZero) {
    const auto laws = sample_laws();
    EXPECT_NEAR(atom(laws[2], 0.0), 0.3, 1e-15);
    EXPECT_EQ(atom(laws[1], 0.0), 0.0);
    EXPECT_EQ(quantile(laws[2], cdf_left(laws[2], 0.0) + 0.1), 0.0);
}

TEST(Laws, ShiftedParetoMatchesItsClosedForm) {
    LocationScaleMixture p;
    p.base = BaseFamily::centered_pareto6;
    p.weights = {1.0};
    p.locations = {0.0};
    p.scales = {1.0};
    for (double x : {-0.1, 0.0, 0.3, 2.0}) EXPECT_NEAR(cdf(p, x), 1.0 - std::pow(x + 1.2, -6.0), 1e-14);
    EXPECT_EQ(cdf(p, -0.25), 0.0);
}

TEST(Lags, FamilySizesMatchDegreesOfFreedom) {
    const auto f2 = build_subset_lag_family(2, 5, 2);
    ASSERT_EQ(f2.entries().size(), 1u);
    EXPECT_EQ(f2.term_count(), 11u);
    const auto f0 = build_subset_lag_family(2, 0, 0);
    ASSERT_EQ(f0.entries().size(), 1u);
    EXPECT_EQ(f0.entries()[0].lags, std::vector<LagVector>{LagVector({0, 0})});
    const auto f3 = build_subset_lag_family(3, 5, 2, true);
    EXPECT_EQ(f3.term_count(), 58u);
    EXPECT_EQ(f3.pair_term_count(), 33u);
    EXPECT_EQ(build_subset_lag_family(3, 5, 2, false).term_count(), 33u);
    EXPECT_EQ(build_subset_lag_family(3, 1, 3, true).term_count(), 3u * 3u + 49u);
}

TEST(Lags, RejectsUnsupportedInputs) {
    EXPECT_THROW(build_subset_lag_family(1, 1, 1), InvalidArgument);
    EXPECT_THROW(build_subset_lag_family(4, 1, 1), InvalidArgument);
    EXPECT_THROW(build_subset_lag_family(2, -1, 0), InvalidArgument);
}

TEST(Lags, RepresentativesAreAnchoredAndDistinct) {
    for (int d : {2, 3}) {
        const auto f = build_subset_lag_family(d, 3, 2);
        for (const auto& e : f.entries()) {
            for (const auto& l : e.lags) {
                EXPECT_EQ(l[e.subset.front()], 0);
                for (int j = 0; j < d; ++j)
                    if (std::find(e.subset.begin(), e.subset.end(), j) == e.subset.end()) EXPECT_EQ(l[j], 0);
            }
            for (std::size_t a = 0; a < e.lags.size(); ++a)
                for (std::size_t b = a + 1; b < e.lags.size(); ++b)
                    EXPECT_FALSE(lag_equivalent(e.subset, e.lags[a], e.lags[b]));
        }
    }
}

TEST(Lags, EveryBoundedLagHasExactlyOneRepresentative) {
    const int m = 2;
    const auto f = build_subset_lag_family(3, m, m);
    for (const auto& e : f.entries()) {
        for (int a = -m; a <= m; ++a)
            for (int b = -m; b <= m; ++b)
                for (int c = -m; c <= m; ++c) {
                    const LagVector l{a, b, c};
                    // Only lags whose anchored form stays in range are admissible.
                    const LagVector canon = canonical_lag(e.subset, l);
                    if (std::any_of(canon.begin(), canon.end(), [&](int x) { return std::abs(x) > m; })) continue;
                    int hits = 0;
                    for (const auto& r : e.lags) hits += lag_equivalent(e.subset, l, r);
                    EXPECT_EQ(hits, 1);
                }
    }
}

TEST(Lags, CanonicalizationIsIdempotent) {
    for (int d : {2, 3}) {
        const auto f = build_subset_lag_family(d, 4, 1);
        EXPECT_EQ(canonicalize(f), f);
        EXPECT_EQ(canonicalize(canonicalize(f)), canonicalize(f));
    }
    // Equivalent duplicates collapse to one representative.
    SubsetLagFamily messy(2, 1, 0, {SubsetLags{{0, 1}, {{3, 4}, {0, 1}, {-1, -1}}}});
    const auto c = canonicalize(messy);
    EXPECT_EQ(c.entries()[0].lags, (std::vector<LagVector>{{0, 0}, {0, 1}}));
}
