#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "gei/errors.hpp"
#include "gei/models.hpp"
#include "hmm_detail.hpp"

namespace gei {
namespace detail {

double log_location_scale_density(BaseFamily base, double x, double location, double scale) {
    const double z = (x - location) / scale;
    switch (base) {
        case BaseFamily::normal: return -0.5 * z * z - 0.91893853320467274178 - std::log(scale);
        case BaseFamily::centered_exponential: return z < -1.0 ? kNegInf : -(z + 1.0) - std::log(scale);
        case BaseFamily::centered_pareto6:
            return z < -0.2 ? kNegInf : std::log(6.0) - 7.0 * std::log(z + 1.2) - std::log(scale);
    }
    return kNegInf;
}

double log_poisson_pmf(double x, double mean) {
    if (x == 0.0) return -mean;
    return x * std::log(mean) - mean - std::lgamma(x + 1.0);
}

void regressors(std::span<const double> series, const Matrix& covariates, int order, double presample,
                std::size_t t, std::vector<double>& out) {
    out.clear();
    for (int i = 1; i <= order; ++i) {
        out.push_back(t >= static_cast<std::size_t>(i) ? series[t - static_cast<std::size_t>(i)] : presample);
    }
    for (std::size_t k = 0; k < covariates.cols(); ++k) out.push_back(covariates(t, k));
}

ForwardBackward forward_backward(const std::vector<std::vector<double>>& log_e, const std::vector<double>& initial,
                                 const std::vector<std::vector<double>>& q) {
    const std::size_t n = log_e.size();
    const std::size_t J = initial.size();
    std::vector<std::vector<double>> alpha(n, std::vector<double>(J));
    std::vector<std::vector<double>> e(n, std::vector<double>(J));
    std::vector<double> scale(n);
    ForwardBackward out;
    std::vector<double> pred = initial;
    for (std::size_t t = 0; t < n; ++t) {
        const double top = *std::max_element(log_e[t].begin(), log_e[t].end());
        if (!std::isfinite(top)) {
            throw DataError("observation " + std::to_string(t + 1) + " has zero density under every regime");
        }
        double c = 0.0;
        for (std::size_t j = 0; j < J; ++j) {
            e[t][j] = std::exp(log_e[t][j] - top);
            alpha[t][j] = pred[j] * e[t][j];
            c += alpha[t][j];
        }
        if (!(c > 0.0) || !std::isfinite(c)) throw DataError("non-finite likelihood at t = " + std::to_string(t + 1));
        for (double& a : alpha[t]) a /= c;
        scale[t] = c;
        out.log_likelihood += std::log(c) + top;
        for (std::size_t k = 0; k < J; ++k) {
            double s = 0.0;
            for (std::size_t j = 0; j < J; ++j) s += alpha[t][j] * q[j][k];
            pred[k] = s;
        }
    }
    std::vector<double> beta(J, 1.0);
    out.gamma.assign(n, std::vector<double>(J));
    out.xi_sum.assign(J, std::vector<double>(J, 0.0));
    out.gamma[n - 1] = alpha[n - 1];
    for (std::size_t t = n - 1; t-- > 0;) {
        // xi(t, j, k) = alpha_t(j) q_jk e_{t+1}(k) beta_{t+1}(k) / c_{t+1}
        std::vector<double> next(J, 0.0);
        for (std::size_t j = 0; j < J; ++j) {
            for (std::size_t k = 0; k < J; ++k) {
                const double w = q[j][k] * e[t + 1][k] * beta[k] / scale[t + 1];
                next[j] += w;
                out.xi_sum[j][k] += alpha[t][j] * w;
            }
        }
        beta = next;
        double norm = 0.0;
        for (std::size_t j = 0; j < J; ++j) {
            out.gamma[t][j] = alpha[t][j] * beta[j];
            norm += out.gamma[t][j];
        }
        for (double& g : out.gamma[t]) g /= norm;
    }
    return out;
}

double sample_mean(std::span<const double> x) {
    return x.empty() ? 0.0 : std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

Matrix covariates_or_intercept(const Matrix& covariates, std::size_t n) {
    if (covariates.cols() == 0) return intercept_covariates(n);
    if (covariates.rows() != n) {
        throw InvalidArgument("covariates have " + std::to_string(covariates.rows()) + " rows but the series has " +
                              std::to_string(n));
    }
    return covariates;
}

}  // namespace detail

namespace {

using detail::kNegInf;

void check_transition(const Coefficients& q, std::size_t J, const std::string& who) {
    if (q.size() != J) throw InvalidArgument(who + ": transition matrix must be " + std::to_string(J) + " x " + std::to_string(J));
    for (const auto& row : q) {
        if (row.size() != J) throw InvalidArgument(who + ": transition matrix must be square");
        double s = 0.0;
        for (double v : row) {
            if (!(v >= 0.0)) throw InvalidArgument(who + ": transition probabilities must be non-negative");
            s += v;
        }
        if (std::abs(s - 1.0) > 1e-10) throw InvalidArgument(who + ": transition rows must sum to 1");
    }
}

void check_initial(const std::vector<double>& initial, std::size_t J, const std::string& who) {
    if (initial.size() != J) throw InvalidArgument(who + ": initial law needs one probability per regime");
    double s = 0.0;
    for (double v : initial) {
        if (!(v >= 0.0)) throw InvalidArgument(who + ": initial probabilities must be non-negative");
        s += v;
    }
    if (std::abs(s - 1.0) > 1e-8) throw InvalidArgument(who + ": initial probabilities must sum to 1");
}

void check_coefficients(const Coefficients& c, std::size_t J, std::size_t width, const std::string& who,
                        const std::string& name) {
    if (c.size() != J) throw InvalidArgument(who + ": " + name + " needs one row per regime");
    for (const auto& row : c) {
        if (row.size() != width) throw InvalidArgument(who + ": " + name + " rows must have " + std::to_string(width) + " entries");
    }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::vector<double> regime_row(const std::vector<double>& phi, const std::vector<double>& theta) {
    std::vector<double> row = phi;
    row.insert(row.end(), theta.begin(), theta.end());
    return row;
}

// History of the last `order` observations, most recent first.
class LagHistory {
public:
    LagHistory(int order, double presample) : values_(static_cast<std::size_t>(order), presample) {}
    void push(double x) {
        if (values_.empty()) return;
        std::rotate(values_.rbegin(), values_.rbegin() + 1, values_.rend());
        values_.front() = x;
    }
    std::vector<double> regressors(std::span<const double> z, std::size_t width) const {
        std::vector<double> r = values_;
        const std::size_t k = width - values_.size();
        if (z.empty()) {
            r.push_back(1.0);
            r.resize(width, 0.0);
        } else {
            if (z.size() != k) throw InvalidArgument("covariate row has the wrong length");
            r.insert(r.end(), z.begin(), z.end());
        }
        return r;
    }

private:
    std::vector<double> values_;
};

std::vector<double> propagate(const std::vector<double>& filtered, const Coefficients& q) {
    std::vector<double> out(filtered.size(), 0.0);
    for (std::size_t j = 0; j < filtered.size(); ++j)
        for (std::size_t k = 0; k < filtered.size(); ++k) out[k] += filtered[j] * q[j][k];
    return out;
}

// Posterior update from log densities; returns the log predictive density.
double filter_update(std::vector<double>& pred, const std::vector<double>& log_f, const Coefficients& q) {
    double top = kNegInf;
    for (std::size_t j = 0; j < pred.size(); ++j) {
        if (pred[j] > 0.0) top = std::max(top, log_f[j]);
    }
    if (!std::isfinite(top)) return kNegInf;
    std::vector<double> post(pred.size());
    double s = 0.0;
    for (std::size_t j = 0; j < pred.size(); ++j) {
        post[j] = pred[j] > 0.0 ? pred[j] * std::exp(log_f[j] - top) : 0.0;
        s += post[j];
    }
    for (double& v : post) v /= s;
    pred = propagate(post, q);
    return std::log(s) + top;
}

class GaussianHmmPredictor final : public Predictor {
public:
    GaussianHmmPredictor(GaussianHmmSpec spec, double presample)
        : spec_(std::move(spec)), history_(spec_.order, presample), pred_(spec_.initial) {}

    ConditionalLaw law(std::span<const double> z) const override {
        LocationScaleMixture m;
        m.base = spec_.innovation;
        const auto means = regime_means(z);
        for (int j = 0; j < spec_.regimes; ++j) {
            if (j == 0 && spec_.zero_inflated) {
                m.zero_mass = pred_[0];
                continue;
            }
            m.weights.push_back(pred_[j]);
            m.locations.push_back(means[j]);
            m.scales.push_back(spec_.sigma[j]);
        }
        return m;
    }

    double update(double x, std::span<const double> z) override {
        const auto means = regime_means(z);
        std::vector<double> log_f(static_cast<std::size_t>(spec_.regimes));
        for (int j = 0; j < spec_.regimes; ++j) {
            if (j == 0 && spec_.zero_inflated) {
                log_f[0] = x == 0.0 ? 0.0 : kNegInf;
            } else if (spec_.zero_inflated && x == 0.0) {
                log_f[j] = kNegInf;  // continuous regimes give the atom at 0 no mass
            } else {
                log_f[j] = detail::log_location_scale_density(spec_.innovation, x, means[j], spec_.sigma[j]);
            }
        }
        const double ll = filter_update(pred_, log_f, spec_.q);
        history_.push(x);
        return ll;
    }

private:
    std::vector<double> regime_means(std::span<const double> z) const {
        std::vector<double> means(static_cast<std::size_t>(spec_.regimes), 0.0);
        for (int j = 0; j < spec_.regimes; ++j) {
            const auto row = regime_row(spec_.phi[j], spec_.theta[j]);
            means[j] = dot(row, history_.regressors(z, row.size()));
        }
        return means;
    }

    GaussianHmmSpec spec_;
    LagHistory history_;
    std::vector<double> pred_;
};

class PoissonHmmPredictor final : public Predictor {
public:
    PoissonHmmPredictor(PoissonHmmSpec spec, double presample)
        : spec_(std::move(spec)), history_(spec_.order, presample), pred_(spec_.initial) {}

    ConditionalLaw law(std::span<const double> z) const override { return PoissonMixture{pred_, regime_means(z)}; }

    double update(double x, std::span<const double> z) override {
        const auto means = regime_means(z);
        std::vector<double> log_f(means.size());
        for (std::size_t j = 0; j < means.size(); ++j) log_f[j] = detail::log_poisson_pmf(x, means[j]);
        const double ll = filter_update(pred_, log_f, spec_.q);
        history_.push(x);
        return ll;
    }

private:
    std::vector<double> regime_means(std::span<const double> z) const {
        std::vector<double> means(static_cast<std::size_t>(spec_.regimes));
        for (int j = 0; j < spec_.regimes; ++j) {
            const auto row = regime_row(spec_.phi[j], spec_.theta[j]);
            means[j] = dot(row, history_.regressors(z, row.size()));
            if (!(means[j] > 0.0)) throw DataError("Poisson HMM mean is not positive");
        }
        return means;
    }

    PoissonHmmSpec spec_;
    LagHistory history_;
    std::vector<double> pred_;
};

class IngarchPredictor final : public Predictor {
public:
    explicit IngarchPredictor(IngarchSpec spec)
        : spec_(std::move(spec)),
          x_(spec_.alpha.size(), spec_.unconditional_mean()),
          lambda_(spec_.beta.size(), spec_.unconditional_mean()) {}

    ConditionalLaw law(std::span<const double>) const override { return poisson_law(current()); }

    double update(double x, std::span<const double>) override {
        const double lam = current();
        const double ll = detail::log_poisson_pmf(x, lam);
        push(x_, x);
        push(lambda_, lam);
        return ll;
    }

private:
    static void push(std::vector<double>& v, double x) {
        if (v.empty()) return;
        std::rotate(v.rbegin(), v.rbegin() + 1, v.rend());
        v.front() = x;
    }
    double current() const {
        double lam = spec_.omega;
        for (std::size_t i = 0; i < x_.size(); ++i) lam += spec_.alpha[i] * x_[i];
        for (std::size_t k = 0; k < lambda_.size(); ++k) lam += spec_.beta[k] * lambda_[k];
        return lam;
    }

    IngarchSpec spec_;
    std::vector<double> x_;
    std::vector<double> lambda_;
};

}  // namespace

double IngarchSpec::unconditional_mean() const {
    const double persistence = std::accumulate(alpha.begin(), alpha.end(), 0.0) + std::accumulate(beta.begin(), beta.end(), 0.0);
    return omega / (1.0 - persistence);
}

void validate(const GaussianHmmSpec& s) {
    const std::string who = "Gaussian HMM";
    if (s.regimes < 1) throw InvalidArgument(who + ": at least one regime is required");
    if (s.order < 0) throw InvalidArgument(who + ": AR order must be non-negative");
    if (s.zero_inflated && s.regimes < 2) throw InvalidArgument(who + ": zero inflation needs at least two regimes");
    const auto J = static_cast<std::size_t>(s.regimes);
    check_coefficients(s.phi, J, static_cast<std::size_t>(s.order), who, "phi");
    if (s.theta.size() != J || s.theta.front().empty()) throw InvalidArgument(who + ": theta needs an intercept per regime");
    check_coefficients(s.theta, J, s.theta.front().size(), who, "theta");
    if (s.sigma.size() != J) throw InvalidArgument(who + ": sigma needs one value per regime");
    for (std::size_t j = 0; j < J; ++j) {
        if (j == 0 && s.zero_inflated) continue;
        if (!(s.sigma[j] > 0.0) || !std::isfinite(s.sigma[j])) throw InvalidArgument(who + ": sigma must be positive");
    }
    check_transition(s.q, J, who);
    check_initial(s.initial, J, who);
}

void validate(const PoissonHmmSpec& s) {
    const std::string who = "Poisson HMM";
    if (s.regimes < 1) throw InvalidArgument(who + ": at least one regime is required");
    if (s.order < 0) throw InvalidArgument(who + ": AR order must be non-negative");
    const auto J = static_cast<std::size_t>(s.regimes);
    check_coefficients(s.phi, J, static_cast<std::size_t>(s.order), who, "phi");
    if (s.theta.size() != J || s.theta.front().empty()) throw InvalidArgument(who + ": theta needs an intercept per regime");
    check_coefficients(s.theta, J, s.theta.front().size(), who, "theta");
    for (std::size_t j = 0; j < J; ++j) {
        for (double v : s.phi[j]) if (!(v >= 0.0)) throw InvalidArgument(who + ": phi must be non-negative");
        for (double v : s.theta[j]) if (!(v >= 0.0)) throw InvalidArgument(who + ": theta must be non-negative");
        if (!(s.theta[j][0] > 0.0)) throw InvalidArgument(who + ": intercepts must be positive");
    }
    check_transition(s.q, J, who);
    check_initial(s.initial, J, who);
}

void validate(const IngarchSpec& s) {
    if (!(s.omega > 0.0)) throw InvalidArgument("INGARCH: omega must be positive");
    double total = 0.0;
    for (double a : s.alpha) {
        if (!(a >= 0.0)) throw InvalidArgument("INGARCH: alpha must be non-negative");
        total += a;
    }
    for (double b : s.beta) {
        if (!(b >= 0.0)) throw InvalidArgument("INGARCH: beta must be non-negative");
        total += b;
    }
    if (!(total < 1.0)) throw InvalidArgument("INGARCH: sum(alpha) + sum(beta) must be below 1");
}

std::vector<double> stationary_distribution(const Coefficients& q) {
    const std::size_t J = q.size();
    // Solve pi (Q - I) = 0 with sum(pi) = 1 by replacing one equation.
    Eigen::MatrixXd a(J, J);
    for (std::size_t i = 0; i < J; ++i)
        for (std::size_t j = 0; j < J; ++j) a(j, i) = q[i][j] - (i == j ? 1.0 : 0.0);
    a.row(J - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(J));
    b(static_cast<Eigen::Index>(J - 1)) = 1.0;
    const Eigen::VectorXd pi = a.colPivHouseholderQr().solve(b);
    std::vector<double> out(J);
    double s = 0.0;
    for (std::size_t j = 0; j < J; ++j) {
        out[j] = std::max(0.0, pi(static_cast<Eigen::Index>(j)));
        s += out[j];
    }
    for (double& v : out) v /= s;
    return out;
}

Coefficients normalize_rows(Coefficients q) {
    for (auto& row : q) {
        const double s = std::accumulate(row.begin(), row.end(), 0.0);
        if (!(s > 0.0)) throw InvalidArgument("transition row has non-positive sum");
        for (double& v : row) v /= s;
    }
    return q;
}

Matrix intercept_covariates(std::size_t n) { return Matrix(n, 1, 1.0); }

std::unique_ptr<Predictor> make_predictor(const ModelSpec& spec, double presample) {
    return std::visit(
        [&](const auto& s) -> std::unique_ptr<Predictor> {
            validate(s);
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, GaussianHmmSpec>) return std::make_unique<GaussianHmmPredictor>(s, presample);
            else if constexpr (std::is_same_v<T, PoissonHmmSpec>) return std::make_unique<PoissonHmmPredictor>(s, presample);
            else return std::make_unique<IngarchPredictor>(s);
        },
        spec);
}

namespace {

template <class Visit>
void run_predictor(const ModelSpec& spec, std::span<const double> series, const Matrix& covariates, Visit&& visit) {
    const bool explicit_cov = covariates.cols() > 0;
    if (explicit_cov && covariates.rows() != series.size()) {
        throw InvalidArgument("covariates have " + std::to_string(covariates.rows()) + " rows but the series has " +
                              std::to_string(series.size()));
    }
    auto predictor = make_predictor(spec, detail::sample_mean(series));
    std::vector<double> z;
    for (std::size_t t = 0; t < series.size(); ++t) {
        z.clear();
        if (explicit_cov)
            for (std::size_t k = 0; k < covariates.cols(); ++k) z.push_back(covariates(t, k));
        visit(t, *predictor, std::span<const double>(z));
    }
}

}  // namespace

double log_likelihood(const ModelSpec& spec, std::span<const double> series, const Matrix& covariates) {
    double ll = 0.0;
    run_predictor(spec, series, covariates, [&](std::size_t t, Predictor& p, std::span<const double> z) {
        ll += p.update(series[t], z);
    });
    return ll;
}

std::vector<ConditionalLaw> conditional_trace(const ModelSpec& spec, std::span<const double> series,
                                              const Matrix& covariates) {
    std::vector<ConditionalLaw> laws;
    laws.reserve(series.size());
    run_predictor(spec, series, covariates, [&](std::size_t t, Predictor& p, std::span<const double> z) {
        laws.push_back(p.law(z));
        p.update(series[t], z);
    });
    return laws;
}

}  // namespace gei
