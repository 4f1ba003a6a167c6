#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <ceres/ceres.h>

#include "gei/errors.hpp"
#include "gei/models.hpp"

namespace gei {
namespace {

constexpr double kPersistenceCap = 1.0 - 1e-6;
constexpr double kBoundaryMargin = 1e-4;

// Unconstrained parameters x = (log omega, b_1..b_m) with m = q + p. Coefficients are
// cap * exp(b_k) / (1 + sum exp(b)), so their sum stays below the cap.
struct Natural {
    double omega;
    std::vector<double> coef;                 // alpha then beta
    std::vector<std::vector<double>> dcoef;   // d coef_k / d b_m
};

Natural to_natural(const double* x, std::size_t m) {
    Natural nat{std::exp(x[0]), std::vector<double>(m), std::vector<std::vector<double>>(m, std::vector<double>(m))};
    const double top = m == 0 ? 0.0 : std::max(0.0, *std::max_element(x + 1, x + 1 + m));
    double denom = std::exp(-top);
    std::vector<double> e(m);
    for (std::size_t k = 0; k < m; ++k) {
        e[k] = std::exp(x[1 + k] - top);
        denom += e[k];
    }
    for (std::size_t k = 0; k < m; ++k) nat.coef[k] = kPersistenceCap * e[k] / denom;
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t j = 0; j < m; ++j)
            nat.dcoef[k][j] = nat.coef[k] * ((k == j ? 1.0 : 0.0) - e[j] / denom);
    return nat;
}

class NegLogLikelihood final : public ceres::FirstOrderFunction {
public:
    NegLogLikelihood(std::span<const double> x, int p, int q) : x_(x.begin(), x.end()), p_(p), q_(q) {}

    int NumParameters() const override { return 1 + p_ + q_; }

    bool Evaluate(const double* params, double* cost, double* gradient) const override {
        const std::size_t m = static_cast<std::size_t>(p_ + q_);
        const Natural nat = to_natural(params, m);
        double ll = 0.0;
        std::vector<double> grad_nat(1 + m, 0.0);  // d ll / d(omega, coef)
        if (!loglik(nat.omega, nat.coef, &ll, gradient ? &grad_nat : nullptr)) return false;
        *cost = -ll;
        if (gradient) {
            gradient[0] = -grad_nat[0] * nat.omega;
            for (std::size_t j = 0; j < m; ++j) {
                double g = 0.0;
                for (std::size_t k = 0; k < m; ++k) g += grad_nat[1 + k] * nat.dcoef[k][j];
                gradient[1 + j] = -g;
            }
        }
        return true;
    }

    // Poisson log-likelihood (without log x!) and its gradient in (omega, alpha, beta).
    bool loglik(double omega, const std::vector<double>& coef, double* ll, std::vector<double>* grad) const {
        const std::size_t q = static_cast<std::size_t>(q_);
        const std::size_t p = static_cast<std::size_t>(p_);
        const std::size_t dim = 1 + q + p;
        const double persistence = std::accumulate(coef.begin(), coef.end(), 0.0);
        const double mu = omega / (1.0 - persistence);
        // d mu / d(omega, coef)
        std::vector<double> dmu(dim, mu / (1.0 - persistence));
        dmu[0] = 1.0 / (1.0 - persistence);

        const std::size_t n = x_.size();
        std::vector<double> lambda(n);
        std::vector<std::vector<double>> dl(grad ? n : 0, std::vector<double>(dim, 0.0));
        *ll = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            double lam = omega;
            std::vector<double> g(grad ? dim : 0, 0.0);
            if (grad) g[0] = 1.0;
            for (std::size_t i = 1; i <= q; ++i) {
                const double a = coef[i - 1];
                if (t >= i) {
                    lam += a * x_[t - i];
                    if (grad) g[i] += x_[t - i];
                } else {
                    lam += a * mu;
                    if (grad) {
                        g[i] += mu;
                        for (std::size_t c = 0; c < dim; ++c) g[c] += a * dmu[c];
                    }
                }
            }
            for (std::size_t k = 1; k <= p; ++k) {
                const double b = coef[q + k - 1];
                if (t >= k) {
                    lam += b * lambda[t - k];
                    if (grad) {
                        g[q + k] += lambda[t - k];
                        for (std::size_t c = 0; c < dim; ++c) g[c] += b * dl[t - k][c];
                    }
                } else {
                    lam += b * mu;
                    if (grad) {
                        g[q + k] += mu;
                        for (std::size_t c = 0; c < dim; ++c) g[c] += b * dmu[c];
                    }
                }
            }
            if (!(lam > 0.0) || !std::isfinite(lam)) return false;
            lambda[t] = lam;
            *ll += x_[t] * std::log(lam) - lam;
            if (grad) {
                const double w = x_[t] / lam - 1.0;
                for (std::size_t c = 0; c < dim; ++c) (*grad)[c] += w * g[c];
                dl[t] = std::move(g);
            }
        }
        return true;
    }

private:
    std::vector<double> x_;
    int p_;
    int q_;
};

}  // namespace

FitResult fit_ingarch(std::span<const double> series, int p, int q) {
    if (p < 0 || q < 0) throw InvalidArgument("INGARCH orders must be non-negative");
    const std::size_t n = series.size();
    if (n <= 20) throw DataError("INGARCH fitting needs more than 20 observations");
    for (std::size_t t = 0; t < n; ++t) {
        if (!(series[t] >= 0.0) || series[t] != std::floor(series[t])) {
            throw DataError("value at t = " + std::to_string(t + 1) + " is not a non-negative integer");
        }
    }
    const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
    if (!(mean > 0.0)) throw DataError("an all-zero series leaves the INGARCH intensity unidentified");

    const std::size_t m = static_cast<std::size_t>(p + q);
    // Start from alpha = 0.1 each and beta sharing 0.7.
    std::vector<double> coef(m);
    for (std::size_t i = 0; i < static_cast<std::size_t>(q); ++i) coef[i] = 0.1 / q;
    for (std::size_t k = 0; k < static_cast<std::size_t>(p); ++k) coef[q + k] = 0.7 / p;
    const double persistence = std::accumulate(coef.begin(), coef.end(), 0.0);
    std::vector<double> x(1 + m);
    x[0] = std::log(mean * (1.0 - persistence));
    const double slack = 1.0 - persistence / kPersistenceCap;
    for (std::size_t k = 0; k < m; ++k) x[1 + k] = std::log(coef[k] / kPersistenceCap / slack);

    auto* cost = new NegLogLikelihood(series, p, q);
    ceres::GradientProblem problem(cost);
    ceres::GradientProblemSolver::Options options;
    options.line_search_direction_type = ceres::BFGS;
    options.max_num_iterations = 1000;
    options.function_tolerance = 1e-12;
    options.gradient_tolerance = 1e-9;
    options.parameter_tolerance = 1e-12;
    options.logging_type = ceres::SILENT;
    options.update_state_every_iteration = false;
    ceres::GradientProblemSolver::Summary summary;
    ceres::Solve(options, problem, x.data(), &summary);

    const Natural nat = to_natural(x.data(), m);
    IngarchSpec spec;
    spec.omega = nat.omega;
    spec.alpha.assign(nat.coef.begin(), nat.coef.begin() + q);
    spec.beta.assign(nat.coef.begin() + q, nat.coef.end());

    double log_factorials = 0.0;
    for (double v : series) log_factorials += std::lgamma(v + 1.0);
    FitResult fit;
    for (const auto& it : summary.iterations) fit.log_likelihood_trace.push_back(-it.cost - log_factorials);
    fit.iterations = static_cast<int>(summary.iterations.size());
    fit.converged = summary.termination_type == ceres::CONVERGENCE;
    const double total = std::accumulate(nat.coef.begin(), nat.coef.end(), 0.0);
    if (m > 0 && total > kPersistenceCap - kBoundaryMargin) {
        fit.warnings.push_back("INGARCH estimate is on the stationarity boundary (sum alpha + sum beta = " +
                               std::to_string(total) + ")");
    }
    if (!fit.converged) fit.warnings.push_back("INGARCH optimizer stopped: " + summary.message);
    fit.spec = spec;
    return fit;
}

}  // namespace gei
