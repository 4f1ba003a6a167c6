#pragma once

// JSON persistence of model specs and the per-column model configuration read by the CLI.
//
// Spec documents carry "kind" = "gaussian_hmm" | "poisson_hmm" | "ingarch" plus the spec
// fields under their struct names. Transition rows within 1e-3 of summing to one are
// renormalized on load (hand-entered matrices are often rounded).

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gei/models.hpp"

namespace gei {

std::string model_to_json(const ModelSpec& spec, int indent = 2);
/// Throws DataError with the offending field on malformed input.
ModelSpec model_from_json(const std::string& text);

/// Request to estimate a model from the data.
struct FitRequest {
    std::string kind = "gaussian_hmm";  ///< gaussian_hmm | poisson_hmm | ingarch
    int regimes = 1;
    int order = 0;          ///< AR order for HMMs
    bool zero_inflated = false;
    int p = 1;              ///< INGARCH beta order
    int q = 1;              ///< INGARCH alpha order
};

FitResult fit_model(const FitRequest& request, std::span<const double> series, const Matrix& covariates = {});

/// How one data column becomes generalized errors.
struct ColumnModel {
    enum class Mode { raw, spec, fit };
    Mode mode = Mode::raw;  ///< raw: values are already uniform generalized errors
    std::optional<ModelSpec> spec;
    FitRequest fit;
};

/// {"columns": [{"raw": true} | {"model": {...spec...}} | {"fit": {...request...}}, ...]}
std::vector<ColumnModel> model_config_from_json(const std::string& text);

}  // namespace gei
