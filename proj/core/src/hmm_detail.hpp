#pragma once

// Internals shared by the model adapters.

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "gei/laws.hpp"
#include "gei/panel.hpp"

namespace gei::detail {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log of the base density at standardized z, divided by scale.
double log_location_scale_density(BaseFamily base, double x, double location, double scale);

double log_poisson_pmf(double x, double mean);

/// Regressor row for time t: lags X_{t-1..t-p} (pre-sample filled with `presample`)
/// followed by covariates of row t.
void regressors(std::span<const double> series, const Matrix& covariates, int order, double presample,
                std::size_t t, std::vector<double>& out);

/// Scaled forward-backward pass on log emission densities log_e[t][j].
struct ForwardBackward {
    std::vector<std::vector<double>> gamma;  ///< posterior regime probabilities
    std::vector<std::vector<double>> xi_sum; ///< sum over t of joint (t-1, t) regime probabilities
    double log_likelihood = 0.0;
};
ForwardBackward forward_backward(const std::vector<std::vector<double>>& log_e, const std::vector<double>& initial,
                                 const std::vector<std::vector<double>>& q);

double sample_mean(std::span<const double> x);

/// Covariates, or an intercept column when empty; throws when the row count differs from n.
Matrix covariates_or_intercept(const Matrix& covariates, std::size_t n);

}  // namespace gei::detail
