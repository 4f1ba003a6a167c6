#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "gei/asymptotics.hpp"
#include "gei/errors.hpp"
#include "gei/mobius.hpp"
#include "support.hpp"

using namespace gei;
using namespace gei::testing;

namespace {

CircularRankMatrix random_ranks(std::size_t n, std::size_t d, std::mt19937_64& engine) {
    std::vector<int> r(n * d);
    for (std::size_t j = 0; j < d; ++j) {
        std::iota(r.begin() + j * n, r.begin() + (j + 1) * n, 1);
        std::shuffle(r.begin() + j * n, r.begin() + (j + 1) * n, engine);
    }
    return CircularRankMatrix(n, d, r);
}

LagVector random_lag(std::size_t d, int span, std::mt19937_64& engine) {
    std::uniform_int_distribution<int> pick(-span, span);
    LagVector l(d);
    for (auto& x : l) x = pick(engine);
    return l;
}

}  // namespace

TEST(Ranks, SortingAndTies) {
    EXPECT_EQ(ranks_with_time_ties(std::vector<double>{0.2, 0.9, 0.5}), (std::vector<int>{1, 3, 2}));
    EXPECT_EQ(ranks_with_time_ties(std::vector<double>{0.4, 0.4}), (std::vector<int>{1, 2}));
    EXPECT_EQ(ranks_with_time_ties(std::vector<double>{0.7, 0.1, 0.7, 0.1}), (std::vector<int>{3, 1, 4, 2}));
}

TEST(Ranks, CircularExtension) {
    const auto r = circular_ranks(Matrix::from_columns({{0.2, 0.9, 0.5}, {0.3, 0.1, 0.2}}));
    for (long t = -6; t < 9; ++t) {
        const long base = ((t % 3) + 3) % 3;
        EXPECT_EQ(r.rank(0, t), r.rank(0, base));
        EXPECT_EQ(r.rank(1, t), r.rank(1, base));
    }
    EXPECT_EQ(r.rank(0, 3), 1);
    EXPECT_THROW(CircularRankMatrix(2, 1, {1, 1}), InvalidArgument);
    EXPECT_THROW(CircularRankMatrix(2, 1, {1, 3}), InvalidArgument);
}

TEST(Cvm, SingleObservationIsZero) {
    const CircularRankMatrix r(1, 2, {1, 1});
    EXPECT_EQ(cvm_statistic(r, {0, 1}, {0, 0}), 0.0);
}

TEST(Cvm, InvalidTermsAreRejected) {
    std::mt19937_64 engine(1);
    const auto r = random_ranks(10, 3, engine);
    EXPECT_THROW(cvm_statistic(r, {0}, {0, 0, 0}), InvalidArgument);
    EXPECT_THROW(cvm_statistic(r, {0, 3}, {0, 0, 0}), InvalidArgument);
    EXPECT_THROW(cvm_statistic(r, {1, 0}, {0, 0, 0}), InvalidArgument);
    EXPECT_THROW(cvm_statistic(r, {0, 1}, {0, 0}), InvalidArgument);
    const auto big = random_ranks(kMaxCvmSampleSize + 1, 2, engine);
    EXPECT_THROW(cvm_statistic(big, {0, 1}, {0, 0}), SizeGuardError);
    const auto mid = random_ranks(kMaxOracleSampleSize + 1, 2, engine);
    EXPECT_THROW(cvm_oracle(mid, {0, 1}, {0, 0}), SizeGuardError);
}

TEST(Cvm, ClosedFormEqualsExactIntegral) {
    std::mt19937_64 engine(2024);
    std::uniform_int_distribution<int> size(3, 30);
    for (int rep = 0; rep < 60; ++rep) {
        const std::size_t n = static_cast<std::size_t>(size(engine));
        const bool triple = rep % 2 == 1;
        const auto r = random_ranks(n, 3, engine);
        const Subset a = triple ? Subset{0, 1, 2} : Subset{0, 2};
        const LagVector l = random_lag(3, 7, engine);
        const double s = cvm_statistic(r, a, l);
        EXPECT_NEAR(s, cvm_oracle(r, a, l), 1e-10) << "n=" << n;
        EXPECT_GE(s, -1e-12);
    }
}

TEST(Cvm, GridOracleConvergesToTheClosedForm) {
    std::mt19937_64 engine(7);
    const auto r = random_ranks(6, 2, engine);
    const double exact = cvm_statistic(r, {0, 1}, {0, 1});
    // Midpoint rule on a grid that does not align with the rank cells.
    EXPECT_NEAR(cvm_oracle(r, {0, 1}, {0, 1}, {997}), exact, 2e-3);
}

TEST(Cvm, InvariantUnderCommonCircularShift) {
    std::mt19937_64 engine(3);
    const std::size_t n = 25;
    const auto r = random_ranks(n, 3, engine);
    for (int shift : {1, 7, 24}) {
        std::vector<int> shifted(n * 3);
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t t = 0; t < n; ++t) shifted[j * n + t] = r.rank(j, static_cast<long>(t) + shift);
        const CircularRankMatrix rs(n, 3, shifted);
        for (const LagVector& l : {LagVector{0, 0, 0}, LagVector{0, 2, -1}})
            EXPECT_NEAR(cvm_statistic(rs, {0, 1, 2}, l), cvm_statistic(r, {0, 1, 2}, l), 1e-14);
    }
}

TEST(Cvm, EquivalentLagsGiveIdenticalValues) {
    std::mt19937_64 engine(4);
    const auto r = random_ranks(40, 3, engine);
    for (int rep = 0; rep < 20; ++rep) {
        const LagVector l = random_lag(3, 5, engine);
        LagVector m = l;
        const int c = static_cast<int>(engine() % 11) - 5;
        for (int j : {0, 1}) m[j] += c;
        m[2] += 3;  // outside A = {0, 1}
        EXPECT_NEAR(cvm_statistic(r, {0, 1}, l), cvm_statistic(r, {0, 1}, m), 1e-14);
        EXPECT_NEAR(cvm_statistic(r, {0, 1}, l), cvm_statistic(r, {0, 1}, canonical_lag({0, 1}, l)), 1e-14);
    }
}

TEST(Cvm, DependsOnlyOnRanks) {
    Rng rng(8);
    Matrix e = uniform_matrix(50, 2, rng);
    Matrix f = e;
    for (std::size_t t = 0; t < 50; ++t) {
        f(t, 0) = std::exp(5.0 * e(t, 0));
        f(t, 1) = std::pow(e(t, 1), 3.0) - 10.0;
    }
    EXPECT_EQ(cvm_statistic(circular_ranks(e), {0, 1}, {0, 2}), cvm_statistic(circular_ranks(f), {0, 1}, {0, 2}));
}

TEST(Cvm, PermutationMeanMatchesTheBiasFormula) {
    std::mt19937_64 engine(12);
    for (std::size_t n : {20u, 60u}) {
        for (std::size_t k : {2u, 3u}) {
            std::vector<double> s;
            for (int rep = 0; rep < 5000; ++rep) {
                const auto r = random_ranks(n, k, engine);
                const Subset a = k == 2 ? Subset{0, 1} : Subset{0, 1, 2};
                s.push_back(cvm_statistic(r, a, LagVector(k, 0)));
            }
            const double target = bias_term(n, static_cast<int>(k)) + std::pow(6.0, -static_cast<double>(k));
            const double se = std::sqrt(variance_of(s) / s.size());
            EXPECT_LT(std::fabs(mean_of(s) - target), 4.0 * se) << "n=" << n << " |A|=" << k;
        }
    }
}

TEST(Cvm, OraclePermutationMeanAtTwenty) {
    std::mt19937_64 engine(13);
    std::vector<double> s;
    for (int rep = 0; rep < 1000; ++rep) s.push_back(cvm_oracle(random_ranks(20, 2, engine), {0, 1}, {0, 0}));
    const double se = std::sqrt(variance_of(s) / s.size());
    EXPECT_LT(std::fabs(mean_of(s) - (bias_term(20, 2) + 1.0 / 36.0)), 4.0 * se);
}
