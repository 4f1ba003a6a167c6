#include "gei/study.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>

#include "gei/errors.hpp"
#include "gei/parallel.hpp"
#include "gei/pit.hpp"
#include "gei/rng.hpp"

namespace gei {
namespace {

constexpr std::uint64_t kRandomizationStream = 0x7A;
constexpr std::size_t kKeptFailureMessages = 5;

struct ReplicateOutcome {
    std::optional<std::string> error;
    std::vector<double> values;                     // combined, averaged over all M
    std::vector<std::vector<double>> per_averaging; // quantile mode: combined for each M in averaging_sizes
};

}  // namespace

double type7_quantile(std::vector<double> values, double level) {
    if (values.empty()) throw InvalidArgument("quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * level;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

McStudyResult run_study(const McStudySpec& spec, std::size_t threads) {
    validate(spec);
    const auto start = std::chrono::steady_clock::now();
    const int d = dgp_dimension(spec);
    const auto family = build_subset_lag_family(d, spec.pair_max_lag, spec.triple_max_lag, spec.include_triples);
    const auto layout = statistic_layout(family, spec.statistics);
    std::vector<std::size_t> slots;
    McStudyResult result;
    result.spec = spec;
    for (std::size_t i = 0; i < layout.size(); ++i) {
        if (layout[i].combined) {
            slots.push_back(i);
            result.statistics.push_back(layout[i].name);
        }
    }
    std::vector<std::size_t> sizes = spec.averaging_sizes;
    if (sizes.empty()) sizes.push_back(spec.randomizations);

    std::vector<ReplicateOutcome> outcomes(spec.replicates);
    parallel_for(spec.replicates, threads, [&](std::size_t r) {
        ReplicateOutcome& out = outcomes[r];
        try {
            const DgpSample sample = generate_dgp(spec, r);
            const RandomizationPlan plan{spec.randomizations, derive_seed(spec.seed, {r, kRandomizationStream})};
            const GeneralizedErrorPanel panel = randomized_pit(sample.series, sample.trace, plan);
            std::vector<double> running(slots.size(), 0.0);
            std::size_t next_size = 0;
            std::vector<std::size_t> sorted_sizes = sizes;
            std::sort(sorted_sizes.begin(), sorted_sizes.end());
            std::vector<std::vector<double>> by_size(sizes.size());
            for (std::size_t k = 0; k < panel.m(); ++k) {
                const auto flat = evaluate_statistics(panel.replicates[k], family, spec.statistics);
                for (std::size_t s = 0; s < slots.size(); ++s) running[s] += flat[slots[s]];
                while (next_size < sorted_sizes.size() && sorted_sizes[next_size] == k + 1) {
                    std::vector<double> avg(running);
                    for (double& v : avg) v /= static_cast<double>(k + 1);
                    for (std::size_t i = 0; i < sizes.size(); ++i) {
                        if (sizes[i] == k + 1) by_size[i] = avg;
                    }
                    ++next_size;
                }
            }
            for (double& v : running) v /= static_cast<double>(panel.m());
            out.values = std::move(running);
            out.per_averaging = std::move(by_size);
        } catch (const Error& e) {
            out.error = e.what();
        }
    });

    for (std::size_t r = 0; r < outcomes.size(); ++r) {
        if (outcomes[r].error) {
            ++result.failed;
            if (result.failure_messages.size() < kKeptFailureMessages) {
                result.failure_messages.push_back("replicate " + std::to_string(r) + ": " + *outcomes[r].error);
            }
            continue;
        }
        ++result.completed;
        result.values.push_back(outcomes[r].values);
    }

    if (result.completed > 0) {
        if (spec.mode == StudyMode::rejection) {
            const double total = static_cast<double>(result.completed);
            for (std::size_t s = 0; s < result.statistics.size(); ++s) {
                RejectionRow row{result.statistics[s]};
                for (const auto& v : result.values) {
                    if (combined_p_value(row.statistic, v[s], family) < spec.level) ++row.rejections;
                }
                const double p = static_cast<double>(row.rejections) / total;
                row.percent = 100.0 * p;
                row.standard_error = 100.0 * std::sqrt(p * (1.0 - p) / total);
                result.rejection.push_back(row);
            }
        } else {
            for (std::size_t s = 0; s < result.statistics.size(); ++s) {
                for (std::size_t i = 0; i < sizes.size(); ++i) {
                    std::vector<double> sample;
                    for (const auto& o : outcomes) {
                        if (!o.error) sample.push_back(o.per_averaging[i][s]);
                    }
                    for (double level : spec.quantile_levels) {
                        result.quantiles.push_back({result.statistics[s], sizes[i], level, type7_quantile(sample, level)});
                    }
                }
            }
        }
    }
    result.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace gei
