#pragma once

// Data-generating processes of the simulation study and the study specification.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gei/copula.hpp"
#include "gei/inference.hpp"
#include "gei/laws.hpp"
#include "gei/models.hpp"
#include "gei/panel.hpp"

namespace gei {

enum class Dgp {
    dgp1,         ///< two Gaussian (or exponential/Pareto) HMMs with fixed regime-switching parameters
    dgp2,         ///< Poisson with lambda_t = 1 + 0.1 X_{t-1}, and an AR(1) with phi = 0.5
    dgp3,         ///< dgp2 plus a second AR(1) series
    iid_uniform,  ///< copula draws used directly as generalized errors
};

std::string_view to_string(Dgp dgp) noexcept;
Dgp dgp_from_string(std::string_view name);

enum class StudyMode { rejection, quantile };

struct McStudySpec {
    Dgp dgp = Dgp::iid_uniform;
    CopulaSpec copula;
    BaseFamily margin = BaseFamily::normal;  ///< innovation family of dgp1
    std::size_t n = 300;
    std::size_t replicates = 1000;
    int lag_shift = 0;  ///< dependence between u_t and v_{t + lag_shift}
    std::size_t randomizations = 1;
    std::uint64_t seed = 1;
    std::vector<StatisticFamily> statistics = all_statistic_families();
    double level = 0.05;
    int pair_max_lag = 5;
    int triple_max_lag = 2;
    bool include_triples = true;
    StudyMode mode = StudyMode::rejection;
    /// Quantile mode: averaged statistics are reported for each of these M (<= randomizations).
    std::vector<std::size_t> averaging_sizes;
    std::vector<double> quantile_levels = {0.95, 0.99};
    std::string name;
};

/// Number of series generated by the DGP (the copula dimension for iid_uniform).
int dgp_dimension(const McStudySpec& spec);

/// Throws InvalidArgument naming the first invalid field.
void validate(const McStudySpec& spec);

/// Discarded start-up steps of recursive DGPs.
inline constexpr std::size_t kBurnIn = 500;

struct DgpSample {
    SeriesPanel series;
    ConditionalTrace trace;
};

/// Draws replicate `replicate` of the study's DGP: X_t = G_t^{-1}(u_t) with u from the
/// copula, returned with the true conditional laws G_t. Deterministic in (seed, replicate).
DgpSample generate_dgp(const McStudySpec& spec, std::size_t replicate);

/// The two regime-switching models behind dgp1.
GaussianHmmSpec dgp1_model_x1(BaseFamily innovation = BaseFamily::normal);
GaussianHmmSpec dgp1_model_x2(BaseFamily innovation = BaseFamily::normal);

}  // namespace gei
