#pragma once

// Generalized cross-correlations and score-based copula dependence coefficients.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gei/lags.hpp"
#include "gei/panel.hpp"

namespace gei {

enum class ScoreKind { spearman, vdw, savage, savage_classical };

std::string_view to_string(ScoreKind kind) noexcept;
/// Accepts the names printed by to_string; throws InvalidArgument otherwise.
ScoreKind score_kind_from_string(std::string_view name);

/// Score generator K^{-1}, its primitive L(u) = int_0^u K^{-1} and mean mu = L(1) - L(0).
///   spearman          K^{-1}(u) = u,           mu = 1/2
///   vdw               K^{-1}(u) = Phi^{-1}(u), mu = 0
///   savage            K^{-1}(u) = log u,       mu = -1
///   savage_classical  K^{-1}(u) = log(1 - u),  mu = -1
struct ScoreFamily {
    ScoreKind kind = ScoreKind::spearman;

    double quantile(double u) const;
    double integral(double u) const;
    double mean() const noexcept;
    /// Variance of K^{-1}(U) for uniform U: 1/12 for spearman, 1 otherwise.
    double reference_variance() const noexcept;
};

/// Scores of one column under its empirical margin F_n. Each observation gets
/// [L(F_n(e)) - L(F_n(e-))] / (F_n(e) - F_n(e-)), the average of K^{-1} over the
/// mass F_n puts at e; tied values share one score. F_n(min-) = 0.
std::vector<double> empirical_scores(std::span<const double> column, const ScoreFamily& family);

/// Columns centered at `center` and divided by the root mean square deviation.
/// Throws DataError if a column has zero spread.
class StandardizedColumns {
public:
    StandardizedColumns() = default;
    /// Centering at each column's sample mean.
    explicit StandardizedColumns(const Matrix& values);
    /// Centering at a fixed value per column (score means).
    StandardizedColumns(const Matrix& values, const std::vector<double>& centers);
    /// Fixed centers and fixed scales; no spread check.
    StandardizedColumns(const Matrix& values, const std::vector<double>& centers, const std::vector<double>& scales);

    std::size_t n() const noexcept { return z_.rows(); }
    std::size_t d() const noexcept { return z_.cols(); }

    /// n^{-1} sum_t prod_{j in A} z_{j, t + l_j}, circular in t.
    double product_moment(const Subset& subset, const LagVector& lag) const;

private:
    Matrix z_;
};

/// r_{A,l} = n^{-1} sum_t prod_{j in A}(e_{j,t+l_j} - mean_j) / prod_j s_j; equals 1 for
/// identical pairs. Under independence sqrt(n) r is asymptotically N(0,1).
double generalized_cross_correlation(const Matrix& errors, const Subset& subset, const LagVector& lag);

/// gamma_{K,A,l} = n^{-1} sum_t prod_{j in A}(score_{j,t+l_j} - mu) / prod_j s_{K,j},
/// with s_{K,j}^2 = n^{-1} sum_t (score_{jt} - mu)^2.
double dependence_coefficient(const Matrix& errors, const Subset& subset, const LagVector& lag,
                              const ScoreFamily& family);

/// Same numerator as dependence_coefficient, divided by the reference score deviations
/// sqrt(reference_variance()) instead of the empirical ones. With tied data this estimates
/// cor{K^{-1}(U*_1), K^{-1}(U*_2)} of the randomized transforms U*_j.
double reference_dependence_coefficient(const Matrix& errors, const Subset& subset, const LagVector& lag,
                                        const ScoreFamily& family);

/// Score matrix of `errors` under `family`, ready for repeated coefficient evaluation.
StandardizedColumns standardized_scores(const Matrix& errors, const ScoreFamily& family);

}  // namespace gei
