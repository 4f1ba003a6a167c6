#include "gei/pit.hpp"

#include <algorithm>
#include <cmath>

#include "gei/rng.hpp"

namespace gei {

double randomization_variate(const RandomizationPlan& plan, std::size_t k, std::size_t j, std::size_t t) noexcept {
    return bits_to_open_unit(derive_seed(plan.seed, {k, j, t}));
}

double generalized_error(const ConditionalLaw& law, double x, double v) {
    const double left = cdf_left(law, x);
    const double right = cdf(law, x);
    const double mass = right - left;
    if (!(mass > kAtomEpsilon)) return right;
    return std::clamp(left + v * mass, 0.0, 1.0);
}

GeneralizedErrorPanel randomized_pit(const SeriesPanel& series, const ConditionalTrace& trace,
                                     const RandomizationPlan& plan) {
    if (plan.replicates == 0) throw InvalidArgument("a randomization plan needs M >= 1");
    if (trace.d() != series.d() || trace.n() != series.n()) {
        throw InvalidArgument("conditional trace does not cover every (t, j) of the series panel");
    }
    const std::size_t n = series.n();
    const std::size_t d = series.d();

    // G(x-) and dG(x) do not depend on the randomization; evaluate once.
    Matrix left(n, d);
    Matrix mass(n, d);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t t = 0; t < n; ++t) {
            const double x = series.values()(t, j);
            const double lo = cdf_left(trace.at(j, t), x);
            const double hi = cdf(trace.at(j, t), x);
            if (!std::isfinite(lo) || !std::isfinite(hi)) {
                throw ModelEvaluationError("conditional cdf is not finite", t, j);
            }
            const double dm = hi - lo;
            left(t, j) = dm > kAtomEpsilon ? lo : hi;
            mass(t, j) = dm > kAtomEpsilon ? dm : 0.0;
        }
    }

    GeneralizedErrorPanel out;
    out.source_seed = plan.seed;
    out.replicates.reserve(plan.replicates);
    for (std::size_t k = 0; k < plan.replicates; ++k) {
        Matrix u(n, d);
        for (std::size_t j = 0; j < d; ++j) {
            for (std::size_t t = 0; t < n; ++t) {
                const double m = mass(t, j);
                u(t, j) = m > 0.0 ? std::clamp(left(t, j) + randomization_variate(plan, k, j, t) * m, 0.0, 1.0)
                                  : left(t, j);
            }
        }
        out.replicates.push_back(std::move(u));
    }
    return out;
}

GeneralizedErrorPanel uniform_panel(Matrix errors, std::uint64_t seed) {
    GeneralizedErrorPanel out;
    out.source_seed = seed;
    out.replicates.push_back(std::move(errors));
    return out;
}

double j_transform(const ConditionalLaw& law, double x, double u) {
    const double left = cdf_left(law, x);
    const double right = cdf(law, x);
    const double mass = right - left;
    if (mass > kAtomEpsilon) return std::clamp((u - left) / mass, 0.0, 1.0);
    return right <= u ? 1.0 : 0.0;
}

double chi0(const ConditionalLaw& law, double u, double v) {
    const double x = quantile(law, u);
    const double y = quantile(law, v);
    if (x != y) return 0.0;
    const double left = cdf_left(law, x);
    const double right = cdf(law, x);
    const double mass = right - left;
    if (!(mass > kAtomEpsilon)) return 0.0;
    return (std::min(u, v) - left) * (right - std::max(u, v)) / mass;
}

}  // namespace gei
