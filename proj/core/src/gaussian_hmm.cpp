#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "gei/errors.hpp"
#include "gei/models.hpp"
#include "hmm_detail.hpp"

namespace gei {
namespace {

constexpr double kMinRegimeMass = 1e-6;

struct Design {
    Eigen::MatrixXd r;  // n x (p + K)
    Eigen::VectorXd x;
};

Design build_design(std::span<const double> series, const Matrix& cov, int order) {
    const std::size_t n = series.size();
    const double presample = detail::sample_mean(series);
    Design d{Eigen::MatrixXd(n, order + static_cast<int>(cov.cols())), Eigen::VectorXd(n)};
    std::vector<double> row;
    for (std::size_t t = 0; t < n; ++t) {
        detail::regressors(series, cov, order, presample, t, row);
        for (std::size_t c = 0; c < row.size(); ++c) d.r(t, c) = row[c];
        d.x(t) = series[t];
    }
    return d;
}

// Weighted least squares; returns coefficients and the weighted residual variance.
std::pair<Eigen::VectorXd, double> weighted_fit(const Design& d, const Eigen::VectorXd& w, int regime) {
    const double mass = w.sum();
    if (mass < kMinRegimeMass) {
        throw SingularFitError("regime " + std::to_string(regime + 1) + " has posterior mass below 1e-6");
    }
    const Eigen::MatrixXd rw = d.r.array().colwise() * w.array();
    const Eigen::MatrixXd gram = d.r.transpose() * rw;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    if (ldlt.info() != Eigen::Success || ldlt.rcond() < 1e-13) {
        throw SingularFitError("regime " + std::to_string(regime + 1) + " has a singular regression design");
    }
    const Eigen::VectorXd beta = ldlt.solve(rw.transpose() * d.x);
    const Eigen::VectorXd res = d.x - d.r * beta;
    const double var = (w.array() * res.array().square()).sum() / mass;
    return {beta, var};
}

}  // namespace

FitResult fit_gaussian_hmm(std::span<const double> series, const Matrix& covariates, int regimes, int order,
                           bool zero_inflated, const EmOptions& options) {
    const std::size_t n = series.size();
    if (regimes < 1 || order < 0) throw InvalidArgument("regimes must be >= 1 and the AR order >= 0");
    if (zero_inflated && regimes < 2) throw InvalidArgument("zero inflation needs at least two regimes");
    if (n <= static_cast<std::size_t>(regimes * (order + 2))) {
        throw InvalidArgument("series too short: need n > J (p + 2)");
    }
    for (std::size_t t = 0; t < n; ++t) {
        if (!std::isfinite(series[t])) throw DataError("non-finite value at t = " + std::to_string(t + 1));
    }
    const Matrix cov = detail::covariates_or_intercept(covariates, n);
    for (std::size_t t = 0; t < n; ++t) {
        if (cov(t, 0) != 1.0) throw InvalidArgument("the first covariate column must be the constant 1");
    }
    const Design design = build_design(series, cov, order);
    const int width = static_cast<int>(design.r.cols());
    const int J = regimes;
    const int first = zero_inflated ? 1 : 0;

    // Initial values: pooled regression, then regimes from quantile groups of |residual|.
    std::vector<std::size_t> active;
    for (std::size_t t = 0; t < n; ++t) {
        if (!(zero_inflated && series[t] == 0.0)) active.push_back(t);
    }
    if (active.size() <= static_cast<std::size_t>(width + J)) throw DataError("too few non-zero observations to fit");
    Eigen::VectorXd w0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t t : active) w0(static_cast<Eigen::Index>(t)) = 1.0;
    const auto [beta0, var0] = weighted_fit(design, w0, 0);
    const Eigen::VectorXd res = design.x - design.r * beta0;
    std::vector<std::size_t> order_idx = active;
    std::sort(order_idx.begin(), order_idx.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(res(static_cast<Eigen::Index>(a))) < std::abs(res(static_cast<Eigen::Index>(b)));
    });

    GaussianHmmSpec spec;
    spec.regimes = J;
    spec.order = order;
    spec.zero_inflated = zero_inflated;
    spec.phi.assign(J, std::vector<double>(order, 0.0));
    spec.theta.assign(J, std::vector<double>(cov.cols(), 0.0));
    spec.sigma.assign(J, 0.0);
    const int groups = J - first;
    for (int g = 0; g < groups; ++g) {
        const std::size_t lo = order_idx.size() * g / groups;
        const std::size_t hi = order_idx.size() * (g + 1) / groups;
        double m = 0.0, ss = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            const double e = res(static_cast<Eigen::Index>(order_idx[i]));
            m += e;
            ss += e * e;
        }
        const double cnt = static_cast<double>(std::max<std::size_t>(hi - lo, 1));
        const int j = first + g;
        for (int i = 0; i < order; ++i) spec.phi[j][i] = beta0(i);
        for (std::size_t k = 0; k < cov.cols(); ++k) spec.theta[j][k] = beta0(order + static_cast<int>(k));
        spec.theta[j][0] += m / cnt;
        spec.sigma[j] = std::max(std::sqrt(ss / cnt), 1e-3 * std::sqrt(var0));
    }
    spec.q.assign(J, std::vector<double>(J, 1.0 / J));
    spec.initial.assign(J, 1.0 / J);

    FitResult fit;
    auto log_emissions = [&](const GaussianHmmSpec& s) {
        std::vector<std::vector<double>> le(n, std::vector<double>(J));
        for (int j = 0; j < J; ++j) {
            if (j == 0 && zero_inflated) {
                for (std::size_t t = 0; t < n; ++t) le[t][0] = series[t] == 0.0 ? 0.0 : detail::kNegInf;
                continue;
            }
            Eigen::VectorXd beta(width);
            for (int i = 0; i < order; ++i) beta(i) = s.phi[j][i];
            for (std::size_t k = 0; k < cov.cols(); ++k) beta(order + static_cast<int>(k)) = s.theta[j][k];
            const Eigen::VectorXd mu = design.r * beta;
            for (std::size_t t = 0; t < n; ++t) {
                le[t][j] = zero_inflated && series[t] == 0.0
                               ? detail::kNegInf
                               : detail::log_location_scale_density(BaseFamily::normal, series[t],
                                                                    mu(static_cast<Eigen::Index>(t)), s.sigma[j]);
            }
        }
        return le;
    };

    auto fb = detail::forward_backward(log_emissions(spec), spec.initial, spec.q);
    fit.log_likelihood_trace.push_back(fb.log_likelihood);
    for (int it = 1; it <= options.max_iterations; ++it) {
        // M-step.
        spec.initial = fb.gamma.front();
        for (int j = 0; j < J; ++j) {
            const double row = std::accumulate(fb.xi_sum[j].begin(), fb.xi_sum[j].end(), 0.0);
            if (row > 0.0) {
                for (int k = 0; k < J; ++k) spec.q[j][k] = fb.xi_sum[j][k] / row;
            }
        }
        for (int j = first; j < J; ++j) {
            Eigen::VectorXd w(static_cast<Eigen::Index>(n));
            for (std::size_t t = 0; t < n; ++t) w(static_cast<Eigen::Index>(t)) = fb.gamma[t][j];
            const auto [beta, var] = weighted_fit(design, w, j);
            if (!(var > 1e-24 * var0)) {
                throw SingularFitError("regime " + std::to_string(j + 1) + " collapsed to zero variance");
            }
            for (int i = 0; i < order; ++i) spec.phi[j][i] = beta(i);
            for (std::size_t k = 0; k < cov.cols(); ++k) spec.theta[j][k] = beta(order + static_cast<int>(k));
            spec.sigma[j] = std::sqrt(var);
        }
        // E-step.
        const double previous = fb.log_likelihood;
        fb = detail::forward_backward(log_emissions(spec), spec.initial, spec.q);
        if (!std::isfinite(fb.log_likelihood)) throw DataError("log-likelihood became non-finite");
        fit.log_likelihood_trace.push_back(fb.log_likelihood);
        fit.iterations = it;
        if (std::abs(fb.log_likelihood - previous) < options.tolerance * std::abs(previous)) {
            fit.converged = true;
            break;
        }
    }
    fit.spec = spec;
    return fit;
}

}  // namespace gei
