#pragma once

// Dynamic models that produce conditional laws: AR(p)Z-Gaussian HMM (optionally with a
// point mass at zero as regime 1), AR(p)Z-Poisson HMM and INGARCH(p,q).
//
// Covariates are an n x K matrix whose first column is 1; an empty matrix means intercept only.
// Lagged values before the sample start are replaced by a pre-sample value (the sample mean
// for HMMs, the unconditional mean for INGARCH).

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gei/laws.hpp"
#include "gei/panel.hpp"

namespace gei {

using Coefficients = std::vector<std::vector<double>>;  ///< [regime][index]

struct GaussianHmmSpec {
    int regimes = 1;
    int order = 0;  ///< AR order p
    Coefficients phi;    ///< [j][i-1]: coefficient of X_{t-i} in regime j
    Coefficients theta;  ///< [j][k]: coefficient of covariate k (k = 0 is the intercept)
    std::vector<double> sigma;
    Coefficients q;                ///< row-stochastic transition matrix
    std::vector<double> initial;   ///< law of the first regime
    bool zero_inflated = false;    ///< regime 0 is the point mass at 0
    BaseFamily innovation = BaseFamily::normal;

    bool operator==(const GaussianHmmSpec&) const = default;
};

struct PoissonHmmSpec {
    int regimes = 1;
    int order = 0;
    Coefficients phi;    ///< >= 0
    Coefficients theta;  ///< >= 0
    Coefficients q;
    std::vector<double> initial;

    bool operator==(const PoissonHmmSpec&) const = default;
};

/// lambda_t = omega + sum_i alpha_i X_{t-i} + sum_k beta_k lambda_{t-k}.
struct IngarchSpec {
    double omega = 1.0;
    std::vector<double> alpha;  ///< q coefficients
    std::vector<double> beta;   ///< p coefficients

    double unconditional_mean() const;
    bool operator==(const IngarchSpec&) const = default;
};

using ModelSpec = std::variant<GaussianHmmSpec, PoissonHmmSpec, IngarchSpec>;

/// Throws InvalidArgument naming the first violated constraint.
void validate(const GaussianHmmSpec& spec);
void validate(const PoissonHmmSpec& spec);
void validate(const IngarchSpec& spec);

/// Stationary law of a row-stochastic matrix.
std::vector<double> stationary_distribution(const Coefficients& q);

/// Rescales every row to sum to one; throws on a row with non-positive sum.
Coefficients normalize_rows(Coefficients q);

struct FitResult {
    ModelSpec spec;
    std::vector<double> log_likelihood_trace;  ///< one entry per E-step / optimizer iteration
    int iterations = 0;
    bool converged = false;
    std::vector<std::string> warnings;
};

struct EmOptions {
    int max_iterations = 500;
    double tolerance = 1e-8;  ///< relative log-likelihood change
};

/// EM for the AR(p)Z-Gaussian HMM. Throws SingularFitError when a continuous regime keeps
/// posterior mass below 1e-6 or its design is singular, DataError on a non-finite likelihood.
FitResult fit_gaussian_hmm(std::span<const double> series, const Matrix& covariates, int regimes, int order,
                           bool zero_inflated, const EmOptions& options = {});

/// EM for the AR(p)Z-Poisson HMM with multiplicative updates that keep coefficients >= 0.
FitResult fit_poisson_hmm(std::span<const double> series, const Matrix& covariates, int regimes, int order,
                          const EmOptions& options = {});

/// Poisson quasi-likelihood MLE under sum(alpha) + sum(beta) <= 1 - 1e-6. Adds a warning
/// when the estimate sits on that boundary. Throws DataError for n <= 20 or an all-zero series.
FitResult fit_ingarch(std::span<const double> series, int p, int q);

/// Observed-data log-likelihood of a series under a model.
double log_likelihood(const ModelSpec& spec, std::span<const double> series, const Matrix& covariates = {});

/// One-step predictive laws G_t for t = 1..n. Throws InvalidArgument if covariate rows differ from n.
std::vector<ConditionalLaw> conditional_trace(const ModelSpec& spec, std::span<const double> series,
                                              const Matrix& covariates = {});

/// Incremental one-step predictor: law() is G_t given X_1..X_{t-1}; update(x) feeds X_t.
class Predictor {
public:
    virtual ~Predictor() = default;
    virtual ConditionalLaw law(std::span<const double> covariates) const = 0;
    /// Returns the log predictive density (mixed measure) of x.
    virtual double update(double x, std::span<const double> covariates) = 0;
};

/// `presample` fills lags before the first observation (ignored by INGARCH, which uses its
/// unconditional mean).
std::unique_ptr<Predictor> make_predictor(const ModelSpec& spec, double presample);

/// Intercept-only covariates of n rows.
Matrix intercept_covariates(std::size_t n);

}  // namespace gei
