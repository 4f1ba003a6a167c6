#pragma once

// Monte-Carlo replication engine: rejection rates and null quantiles of combined statistics.

#include <string>
#include <vector>

#include "gei/dgp.hpp"

namespace gei {

struct RejectionRow {
    std::string statistic;
    std::size_t rejections = 0;
    double percent = 0.0;
    double standard_error = 0.0;  ///< binomial, in percentage points

    bool operator==(const RejectionRow&) const = default;
};

struct QuantileRow {
    std::string statistic;
    std::size_t averaging = 1;  ///< M
    double level = 0.95;
    double value = 0.0;

    bool operator==(const QuantileRow&) const = default;
};

struct McStudyResult {
    McStudySpec spec;
    std::vector<std::string> statistics;  ///< combined statistic names, column order of `values`
    std::size_t completed = 0;
    std::size_t failed = 0;
    std::vector<std::string> failure_messages;  ///< first few, prefixed by the replicate index
    std::vector<RejectionRow> rejection;        ///< rejection mode
    std::vector<QuantileRow> quantiles;         ///< quantile mode
    /// Combined statistic values per completed replicate (averaged over all randomizations).
    std::vector<std::vector<double>> values;
    std::string quantile_estimator = "type7";
    double runtime_seconds = 0.0;  ///< wall clock; excluded from reproducibility comparisons
};

/// Runs every replicate on up to `threads` workers (0 = GEI_THREADS or hardware). Results do
/// not depend on the worker count. Errors raised inside a replicate are counted, not thrown.
McStudyResult run_study(const McStudySpec& spec, std::size_t threads = 0);

/// Sample quantile with linear interpolation between order statistics (Hyndman-Fan type 7).
double type7_quantile(std::vector<double> values, double level);

}  // namespace gei
