#include "gei/laws.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "gei/errors.hpp"

namespace gei {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// min(1, x) that lets NaN through, so bad model parameters surface as non-finite cdfs.
double cap_at_one(double x) { return x > 1.0 ? 1.0 : x; }

double base_cdf(BaseFamily f, double z) {
    switch (f) {
        case BaseFamily::normal: return 0.5 * std::erfc(-z * kInvSqrt2);
        case BaseFamily::centered_exponential: return z <= -1.0 ? 0.0 : -std::expm1(-(z + 1.0));
        case BaseFamily::centered_pareto6: return z <= -0.2 ? 0.0 : 1.0 - std::pow(z + 1.2, -6.0);
    }
    return 0.0;
}

double base_pdf(BaseFamily f, double z) {
    switch (f) {
        case BaseFamily::normal: return kInvSqrt2Pi * std::exp(-0.5 * z * z);
        case BaseFamily::centered_exponential: return z < -1.0 ? 0.0 : std::exp(-(z + 1.0));
        case BaseFamily::centered_pareto6: return z < -0.2 ? 0.0 : 6.0 * std::pow(z + 1.2, -7.0);
    }
    return 0.0;
}

double base_quantile(BaseFamily f, double p) {
    switch (f) {
        case BaseFamily::normal:
            return boost::math::quantile(boost::math::normal_distribution<double>(), p);
        case BaseFamily::centered_exponential: return -std::log1p(-p) - 1.0;
        case BaseFamily::centered_pareto6: return std::pow(1.0 - p, -1.0 / 6.0) - 1.2;
    }
    return 0.0;
}

double base_lower(BaseFamily f) {
    switch (f) {
        case BaseFamily::normal: return -std::numeric_limits<double>::infinity();
        case BaseFamily::centered_exponential: return -1.0;
        case BaseFamily::centered_pareto6: return -0.2;
    }
    return 0.0;
}

double continuous_part(const LocationScaleMixture& m, double y) {
    double s = 0.0;
    for (std::size_t k = 0; k < m.weights.size(); ++k) {
        s += m.weights[k] * base_cdf(m.base, (y - m.locations[k]) / m.scales[k]);
    }
    return s;
}

double continuous_density(const LocationScaleMixture& m, double y) {
    double s = 0.0;
    for (std::size_t k = 0; k < m.weights.size(); ++k) {
        s += m.weights[k] * base_pdf(m.base, (y - m.locations[k]) / m.scales[k]) / m.scales[k];
    }
    return s;
}

double mixture_cdf(const LocationScaleMixture& m, double y) {
    return cap_at_one(continuous_part(m, y) + (y >= 0.0 ? m.zero_mass : 0.0));
}

double mixture_quantile(const LocationScaleMixture& m, double u) {
    if (m.zero_mass > 0.0) {
        const double below = continuous_part(m, 0.0);
        if (u > below && u <= below + m.zero_mass) return 0.0;
    }
    if (m.weights.size() == 1 && m.zero_mass == 0.0) {
        return m.locations[0] + m.scales[0] * base_quantile(m.base, std::clamp(u, 1e-300, 1.0 - 1e-16));
    }
    // Bracket [lo, hi] with cdf(lo) < u <= cdf(hi), then safeguarded Newton.
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < m.weights.size(); ++k) {
        const double lb = base_lower(m.base);
        lo = std::min(lo, m.locations[k] + m.scales[k] * (std::isfinite(lb) ? lb : -40.0));
        hi = std::max(hi, m.locations[k] + 10.0 * m.scales[k]);
    }
    if (m.zero_mass > 0.0) {
        lo = std::min(lo, -1e-300);
        hi = std::max(hi, 0.0);
    }
    if (u <= mixture_cdf(m, lo)) return lo;
    double width = std::max(1.0, hi - lo);
    for (int i = 0; i < 200 && mixture_cdf(m, hi) < u; ++i) {
        hi += width;
        width *= 2.0;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double f = mixture_cdf(m, x) - u;
        if (std::fabs(f) <= 1e-15) return x;
        if (f > 0.0) hi = x; else lo = x;
        if (hi - lo <= 1e-15 * std::max(1.0, std::fabs(x))) break;
        const double dens = continuous_density(m, x);
        double next = dens > 0.0 ? x - f / dens : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        x = next;
    }
    return hi;
}

double poisson_le(double mean, double k) {
    if (k < 0.0) return 0.0;
    if (std::isnan(mean)) return mean;
    if (mean <= 0.0) return 1.0;
    return boost::math::gamma_q(k + 1.0, mean);
}

double poisson_mixture_cdf(const PoissonMixture& m, double y) {
    if (y < 0.0) return 0.0;
    const double k = std::floor(y);
    double s = 0.0;
    for (std::size_t c = 0; c < m.weights.size(); ++c) s += m.weights[c] * poisson_le(m.means[c], k);
    return cap_at_one(s);
}

double poisson_mixture_quantile(const PoissonMixture& m, double u) {
    if (u <= poisson_mixture_cdf(m, 0.0)) return 0.0;
    double top = 0.0;
    for (double mu : m.means) top = std::max(top, mu);
    double hi = std::ceil(top + 10.0 * std::sqrt(top) + 10.0);
    while (poisson_mixture_cdf(m, hi) < u && hi < 1e12) hi *= 2.0;
    double lo = 0.0;  // cdf(lo) < u <= cdf(hi)
    while (hi - lo > 1.0) {
        const double mid = std::floor(0.5 * (lo + hi));
        if (poisson_mixture_cdf(m, mid) >= u) hi = mid; else lo = mid;
    }
    return hi;
}

}  // namespace

LocationScaleMixture normal_law(double mean, double sd) {
    return LocationScaleMixture{BaseFamily::normal, 0.0, {1.0}, {mean}, {sd}};
}

PoissonMixture poisson_law(double mean) { return PoissonMixture{{1.0}, {mean}}; }

double cdf(const ConditionalLaw& law, double y) {
    return std::visit(
        Overloaded{
            [y](const UniformLaw&) { return std::clamp(y, 0.0, 1.0); },
            [y](const LocationScaleMixture& m) { return mixture_cdf(m, y); },
            [y](const PoissonMixture& m) { return poisson_mixture_cdf(m, y); },
            [y](const DiscreteLaw& m) {
                double s = 0.0;
                for (std::size_t i = 0; i < m.support.size() && m.support[i] <= y; ++i) s += m.probs[i];
                return cap_at_one(s);
            },
        },
        law);
}

double cdf_left(const ConditionalLaw& law, double y) {
    return std::visit(
        Overloaded{
            [y](const UniformLaw&) { return std::clamp(y, 0.0, 1.0); },
            [y](const LocationScaleMixture& m) {
                return cap_at_one(continuous_part(m, y) + (y > 0.0 ? m.zero_mass : 0.0));
            },
            [y](const PoissonMixture& m) {
                const double k = std::ceil(y) - 1.0;
                return k < 0.0 ? 0.0 : poisson_mixture_cdf(m, k);
            },
            [y](const DiscreteLaw& m) {
                double s = 0.0;
                for (std::size_t i = 0; i < m.support.size() && m.support[i] < y; ++i) s += m.probs[i];
                return cap_at_one(s);
            },
        },
        law);
}

double atom(const ConditionalLaw& law, double y) {
    return std::visit(
        Overloaded{
            [](const UniformLaw&) { return 0.0; },
            [y](const LocationScaleMixture& m) { return y == 0.0 ? m.zero_mass : 0.0; },
            [y](const PoissonMixture& m) {
                if (y < 0.0 || y != std::floor(y)) return 0.0;
                double s = 0.0;
                for (std::size_t c = 0; c < m.weights.size(); ++c) {
                    const double mu = m.means[c];
                    if (mu <= 0.0) {
                        s += y == 0.0 ? m.weights[c] : 0.0;
                    } else {
                        s += m.weights[c] * std::exp(y * std::log(mu) - mu - std::lgamma(y + 1.0));
                    }
                }
                return s;
            },
            [y](const DiscreteLaw& m) {
                for (std::size_t i = 0; i < m.support.size(); ++i) {
                    if (m.support[i] == y) return m.probs[i];
                }
                return 0.0;
            },
        },
        law);
}

double quantile(const ConditionalLaw& law, double u) {
    if (!(u >= 0.0 && u <= 1.0)) throw InvalidArgument("quantile level must lie in [0,1]");
    return std::visit(
        Overloaded{
            [u](const UniformLaw&) { return u; },
            [u](const LocationScaleMixture& m) { return mixture_quantile(m, u); },
            [u](const PoissonMixture& m) { return poisson_mixture_quantile(m, u); },
            [u](const DiscreteLaw& m) {
                double s = 0.0;
                for (std::size_t i = 0; i < m.support.size(); ++i) {
                    s += m.probs[i];
                    if (s >= u) return m.support[i];
                }
                return m.support.back();
            },
        },
        law);
}

ConditionalTrace::ConditionalTrace(std::vector<std::vector<ConditionalLaw>> laws) : laws_(std::move(laws)) {
    for (const auto& s : laws_) {
        if (s.size() != n()) throw InvalidArgument("every series of a trace must have the same length");
    }
}

}  // namespace gei
