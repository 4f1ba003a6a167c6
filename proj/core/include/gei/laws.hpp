#pragma once

// Conditional laws G_t and the per-time-step trace that every model adapter emits.

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace gei {

/// Uniform(0,1); used when the data already are generalized errors.
struct UniformLaw {};

/// Standardized innovation family of a location-scale component.
enum class BaseFamily {
    normal,
    centered_exponential,  ///< G(x) = 1 - exp(-(x + 1)), x >= -1
    centered_pareto6,      ///< G(x) = 1 - (x + 6/5)^-6, x >= -1/5
};

/// Finite mixture of location-scale components, optionally with a point mass at zero.
/// weights sum to 1 - zero_mass.
struct LocationScaleMixture {
    BaseFamily base = BaseFamily::normal;
    double zero_mass = 0.0;
    std::vector<double> weights;
    std::vector<double> locations;
    std::vector<double> scales;
};

/// Finite mixture of Poisson laws; a single component is a plain Poisson.
struct PoissonMixture {
    std::vector<double> weights;
    std::vector<double> means;
};

/// Law with finitely many atoms; support sorted ascending.
struct DiscreteLaw {
    std::vector<double> support;
    std::vector<double> probs;
};

using ConditionalLaw = std::variant<UniformLaw, LocationScaleMixture, PoissonMixture, DiscreteLaw>;

LocationScaleMixture normal_law(double mean, double sd);
PoissonMixture poisson_law(double mean);

/// G(y) = P(X <= y)
double cdf(const ConditionalLaw& law, double y);
/// G(y-) = P(X < y)
double cdf_left(const ConditionalLaw& law, double y);
/// G(y) - G(y-)
double atom(const ConditionalLaw& law, double y);
/// inf{y : G(y) >= u} for u in (0, 1]; u = 0 maps to the lower end of the support.
double quantile(const ConditionalLaw& law, double u);
/// Draws X ~ G by inverting a uniform.
inline double invert(const ConditionalLaw& law, double u) { return quantile(law, u); }

/// Atoms with mass at most this are treated as continuity points.
inline constexpr double kAtomEpsilon = 1e-12;

/// Conditional laws for every (series, t). laws[j][t] is G_{jt}.
class ConditionalTrace {
public:
    ConditionalTrace() = default;
    explicit ConditionalTrace(std::vector<std::vector<ConditionalLaw>> laws);

    std::size_t d() const noexcept { return laws_.size(); }
    std::size_t n() const noexcept { return laws_.empty() ? 0 : laws_.front().size(); }
    const ConditionalLaw& at(std::size_t j, std::size_t t) const { return laws_[j][t]; }
    std::span<const ConditionalLaw> series(std::size_t j) const { return laws_[j]; }

private:
    std::vector<std::vector<ConditionalLaw>> laws_;
};

}  // namespace gei
