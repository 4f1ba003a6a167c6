#pragma once

// Randomized probability integral transform: series + conditional laws -> generalized errors.

#include <cstdint>
#include <functional>
#include <vector>

#include "gei/errors.hpp"
#include "gei/laws.hpp"
#include "gei/panel.hpp"

namespace gei {

/// M independent randomizations drawn from counter-derived streams of `seed`.
struct RandomizationPlan {
    std::size_t replicates = 1;
    std::uint64_t seed = 0;
};

/// V^{(k)}_{jt}: depends only on (seed, k, j, t), never on evaluation order.
double randomization_variate(const RandomizationPlan& plan, std::size_t k, std::size_t j, std::size_t t) noexcept;

/// n x d generalized errors, one matrix per randomization.
struct GeneralizedErrorPanel {
    std::vector<Matrix> replicates;
    std::uint64_t source_seed = 0;

    std::size_t n() const noexcept { return replicates.empty() ? 0 : replicates.front().rows(); }
    std::size_t d() const noexcept { return replicates.empty() ? 0 : replicates.front().cols(); }
    std::size_t m() const noexcept { return replicates.size(); }
};

/// U = G(x-) + V * dG(x). Continuity points give U = G(x) whatever V is.
double generalized_error(const ConditionalLaw& law, double x, double v);

/// Throws ModelEvaluationError on a non-finite cdf, InvalidArgument on shape mismatch or M = 0.
GeneralizedErrorPanel randomized_pit(const SeriesPanel& series, const ConditionalTrace& trace,
                                     const RandomizationPlan& plan);

/// Wraps an already-uniform panel (M = 1) without transformation.
GeneralizedErrorPanel uniform_panel(Matrix errors, std::uint64_t seed = 0);

/// E[1{U <= u} | X = x]: clamp((u - G(x-)) / dG(x)) on atoms, 1{G(x) <= u} elsewhere.
double j_transform(const ConditionalLaw& law, double x, double u);

/// Atom correction of the covariance of J-transforms:
/// cov{J(X,u), J(X,v)} = min(u,v) - uv - chi0(u,v).
double chi0(const ConditionalLaw& law, double u, double v);

/// Mean of per-randomization statistic vectors.
struct AveragedStatistics {
    std::vector<double> mean;
    std::size_t replicates = 0;
    /// False when M > 1: the average no longer has a distribution-free null law.
    bool distribution_free = true;
};

/// Evaluates `statistic` on every replicate of `panel` and averages component-wise.
template <class Evaluator>
AveragedStatistics average_over_randomizations(Evaluator&& statistic, const GeneralizedErrorPanel& panel) {
    if (panel.m() == 0) throw InvalidArgument("at least one randomization is required");
    AveragedStatistics out;
    out.replicates = panel.m();
    out.distribution_free = panel.m() == 1;
    for (const Matrix& errors : panel.replicates) {
        const std::vector<double> values = std::invoke(statistic, errors);
        if (out.mean.empty()) out.mean.assign(values.size(), 0.0);
        if (values.size() != out.mean.size()) throw InvalidArgument("statistic size changed between replicates");
        for (std::size_t i = 0; i < values.size(); ++i) out.mean[i] += values[i];
    }
    for (double& v : out.mean) v /= static_cast<double>(panel.m());
    return out;
}

}  // namespace gei
