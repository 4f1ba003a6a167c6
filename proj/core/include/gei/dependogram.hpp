#pragma once

// Bar chart of S_{n,A,l} over (A, l) with per-cardinality critical lines.

#include <string>
#include <vector>

#include "gei/inference.hpp"

namespace gei {

struct DependogramBar {
    Subset subset;
    LagVector lag;
    double value = 0.0;
    double critical = 0.0;  ///< (1 - alpha) quantile of xi_{|A|}
    double p_value = 1.0;
    bool significant = false;  ///< p_value < alpha
    std::string label;         ///< e.g. "{1,2} (0,3)"
};

struct Dependogram {
    std::vector<DependogramBar> bars;
    double alpha = 0.05;
    double critical_pair = 0.0;
    double critical_triple = 0.0;  ///< 0 when the family has no triples
};

/// Built from the "S" terms of a report, in report order. Throws InvalidArgument if the
/// report has no "S" terms or alpha is outside (0, 1).
Dependogram make_dependogram(const StatisticReport& report, double alpha);

std::string dependogram_svg(const Dependogram& dependogram);
/// Columns: subset, lag, S, critical, p_value, significant. Subsets and lags are written
/// 1-based / raw, separated by spaces.
std::string dependogram_csv(const Dependogram& dependogram);

}  // namespace gei
