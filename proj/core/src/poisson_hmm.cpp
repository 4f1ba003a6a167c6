#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gei/errors.hpp"
#include "gei/models.hpp"
#include "hmm_detail.hpp"

namespace gei {
namespace {

constexpr int kInnerSteps = 25;
constexpr double kStartCoefficient = 0.05;

}  // namespace

FitResult fit_poisson_hmm(std::span<const double> series, const Matrix& covariates, int regimes, int order,
                          const EmOptions& options) {
    const std::size_t n = series.size();
    if (regimes < 1 || order < 0) throw InvalidArgument("regimes must be >= 1 and the AR order >= 0");
    if (n <= static_cast<std::size_t>(regimes * (order + 2))) {
        throw InvalidArgument("series too short: need n > J (p + 2)");
    }
    for (std::size_t t = 0; t < n; ++t) {
        if (!(series[t] >= 0.0) || series[t] != std::floor(series[t])) {
            throw DataError("value at t = " + std::to_string(t + 1) + " is not a non-negative integer");
        }
    }
    const Matrix cov = detail::covariates_or_intercept(covariates, n);
    for (std::size_t t = 0; t < n; ++t) {
        if (cov(t, 0) != 1.0) throw InvalidArgument("the first covariate column must be the constant 1");
        for (std::size_t k = 0; k < cov.cols(); ++k) {
            if (!(cov(t, k) >= 0.0)) throw InvalidArgument("Poisson HMM covariates must be non-negative");
        }
    }
    const double mean = detail::sample_mean(series);
    if (!(mean > 0.0)) throw DataError("a Poisson model needs at least one positive count");

    const int J = regimes;
    const std::size_t width = static_cast<std::size_t>(order) + cov.cols();
    std::vector<std::vector<double>> design(n);
    for (std::size_t t = 0; t < n; ++t) detail::regressors(series, cov, order, mean, t, design[t]);

    // Regime intercepts from quantile groups of the counts; other coefficients start small
    // and positive so multiplicative updates can move them.
    std::vector<double> sorted(series.begin(), series.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::vector<double>> beta(J, std::vector<double>(width, kStartCoefficient));
    for (int j = 0; j < J; ++j) {
        const std::size_t lo = n * j / J;
        const std::size_t hi = std::max(n * (j + 1) / J, lo + 1);
        const double gm = std::accumulate(sorted.begin() + lo, sorted.begin() + hi, 0.0) / static_cast<double>(hi - lo);
        double rest = 0.0;
        for (std::size_t c = 0; c < width; ++c) {
            if (c != static_cast<std::size_t>(order)) rest += kStartCoefficient * mean;
        }
        beta[j][order] = std::max(gm - rest, 0.1 * mean);
    }

    PoissonHmmSpec spec;
    spec.regimes = J;
    spec.order = order;
    spec.q.assign(J, std::vector<double>(J, 1.0 / J));
    spec.initial.assign(J, 1.0 / J);
    auto unpack = [&] {
        spec.phi.assign(J, {});
        spec.theta.assign(J, {});
        for (int j = 0; j < J; ++j) {
            spec.phi[j].assign(beta[j].begin(), beta[j].begin() + order);
            spec.theta[j].assign(beta[j].begin() + order, beta[j].end());
        }
    };
    auto means = [&](int j, std::size_t t) {
        double s = 0.0;
        for (std::size_t c = 0; c < width; ++c) s += beta[j][c] * design[t][c];
        return s;
    };
    auto log_emissions = [&] {
        std::vector<std::vector<double>> le(n, std::vector<double>(J));
        for (std::size_t t = 0; t < n; ++t)
            for (int j = 0; j < J; ++j) le[t][j] = detail::log_poisson_pmf(series[t], means(j, t));
        return le;
    };

    FitResult fit;
    auto fb = detail::forward_backward(log_emissions(), spec.initial, spec.q);
    fit.log_likelihood_trace.push_back(fb.log_likelihood);
    for (int it = 1; it <= options.max_iterations; ++it) {
        spec.initial = fb.gamma.front();
        for (int j = 0; j < J; ++j) {
            const double row = std::accumulate(fb.xi_sum[j].begin(), fb.xi_sum[j].end(), 0.0);
            if (row > 0.0)
                for (int k = 0; k < J; ++k) spec.q[j][k] = fb.xi_sum[j][k] / row;
        }
        for (int j = 0; j < J; ++j) {
            double mass = 0.0;
            for (std::size_t t = 0; t < n; ++t) mass += fb.gamma[t][j];
            if (mass < 1e-6) throw SingularFitError("regime " + std::to_string(j + 1) + " has posterior mass below 1e-6");
            std::vector<double> denom(width, 0.0);
            for (std::size_t t = 0; t < n; ++t)
                for (std::size_t c = 0; c < width; ++c) denom[c] += fb.gamma[t][j] * design[t][c];
            for (int inner = 0; inner < kInnerSteps; ++inner) {
                std::vector<double> numer(width, 0.0);
                for (std::size_t t = 0; t < n; ++t) {
                    if (series[t] == 0.0) continue;
                    const double r = fb.gamma[t][j] * series[t] / means(j, t);
                    for (std::size_t c = 0; c < width; ++c) numer[c] += r * design[t][c];
                }
                for (std::size_t c = 0; c < width; ++c) {
                    if (denom[c] > 0.0) beta[j][c] *= numer[c] / denom[c];
                }
                beta[j][order] = std::max(beta[j][order], 1e-10);
            }
        }
        const double previous = fb.log_likelihood;
        fb = detail::forward_backward(log_emissions(), spec.initial, spec.q);
        fit.log_likelihood_trace.push_back(fb.log_likelihood);
        fit.iterations = it;
        if (std::abs(fb.log_likelihood - previous) < options.tolerance * std::abs(previous)) {
            fit.converged = true;
            break;
        }
    }
    unpack();
    fit.spec = spec;
    return fit;
}

}  // namespace gei
