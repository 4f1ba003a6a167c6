#pragma once

// Per-(A, l) statistics, combined statistics and the report that carries them.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gei/depmeasures.hpp"
#include "gei/lags.hpp"
#include "gei/panel.hpp"
#include "gei/pit.hpp"

namespace gei {

/// Families of statistics that can be requested. Each enables per-term values and
/// the matching combined statistic(s).
enum class StatisticFamily {
    cvm,       ///< S_{n,A,l}; combined W and F
    pearson,   ///< r_{A,l}; combined H
    spearman,  ///< combined H_S
    vdw,       ///< combined H_G
    savage,    ///< combined H_E
};

std::string to_string(StatisticFamily family);
/// Accepts a family name or a combined-statistic name ("W", "F", "H", "H_S", "H_G", "H_E").
StatisticFamily statistic_family_from_string(const std::string& name);
std::vector<StatisticFamily> all_statistic_families();

struct TestOptions {
    int pair_max_lag = 5;
    int triple_max_lag = 2;
    bool include_triples = true;
    std::vector<StatisticFamily> statistics = all_statistic_families();
    double alpha = 0.05;
};

struct TermResult {
    Subset subset;
    LagVector lag;
    std::string kind;  ///< "S", "r", "r_S", "r_G" or "r_E"
    double value = 0.0;
    double p_value = 1.0;

    bool operator==(const TermResult&) const = default;
};

struct CombinedResult {
    std::string name;       ///< "W", "F", "H", ...; pair-restricted versions end in "2"
    double value = 0.0;
    std::string reference;  ///< "edgeworth", "chi2"
    double dof = 0.0;       ///< chi-square degrees of freedom; 0 for W
    double p_value = 1.0;

    bool operator==(const CombinedResult&) const = default;
};

struct ReportMetadata {
    std::size_t n = 0;
    std::size_t d = 0;
    int pair_max_lag = 0;
    int triple_max_lag = 0;
    bool include_triples = true;
    std::size_t randomizations = 1;
    std::uint64_t seed = 0;
    double alpha = 0.05;
    bool distribution_free = true;

    bool operator==(const ReportMetadata&) const = default;
};

struct StatisticReport {
    std::vector<TermResult> per_term;
    std::vector<CombinedResult> combined;
    ReportMetadata metadata;
    std::vector<std::string> warnings;

    const CombinedResult* find(const std::string& name) const;
    /// True when any combined p-value is below metadata.alpha.
    bool rejects() const;

    bool operator==(const StatisticReport&) const = default;
};

/// Flat statistic vector of one error matrix: per-term values followed by combined values,
/// in the order given by statistic_layout(). This is what gets averaged over randomizations.
std::vector<double> evaluate_statistics(const Matrix& errors, const SubsetLagFamily& family,
                                        const std::vector<StatisticFamily>& statistics);

struct StatisticSlot {
    std::string name;  ///< combined name or per-term kind
    bool combined = false;
    std::size_t term = 0;  ///< index into the flattened family when !combined
};
std::vector<StatisticSlot> statistic_layout(const SubsetLagFamily& family,
                                            const std::vector<StatisticFamily>& statistics);

/// Index of a named combined statistic in the flat vector; throws if absent.
std::size_t combined_slot(const SubsetLagFamily& family, const std::vector<StatisticFamily>& statistics,
                          const std::string& name);

/// Asymptotic p-value of a combined statistic ("W", "F2", "H_S", ...) for `family`.
double combined_p_value(const std::string& name, double value, const SubsetLagFamily& family);

/// Statistics averaged over every randomization of `panel`, with p-values from the
/// asymptotic null laws.
StatisticReport evaluate(const GeneralizedErrorPanel& panel, const TestOptions& options);

}  // namespace gei
