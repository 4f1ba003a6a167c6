#include "gei/inference.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "gei/asymptotics.hpp"
#include "gei/errors.hpp"
#include "gei/mobius.hpp"

namespace gei {
namespace {

struct FlatTerm {
    Subset subset;
    LagVector lag;
};

std::vector<FlatTerm> flatten(const SubsetLagFamily& family) {
    std::vector<FlatTerm> out;
    for (const auto& e : family.entries()) {
        for (const auto& l : e.lags) out.push_back({e.subset, l});
    }
    return out;
}

bool has_triples(const SubsetLagFamily& family) {
    return std::any_of(family.entries().begin(), family.entries().end(),
                       [](const SubsetLags& e) { return e.subset.size() > 2; });
}

bool wants(const std::vector<StatisticFamily>& s, StatisticFamily f) {
    return std::find(s.begin(), s.end(), f) != s.end();
}

struct ScoreStat {
    StatisticFamily family;
    ScoreKind kind;
    const char* term_kind;
    const char* combined;
};

constexpr ScoreStat kScoreStats[] = {
    {StatisticFamily::spearman, ScoreKind::spearman, "r_S", "H_S"},
    {StatisticFamily::vdw, ScoreKind::vdw, "r_G", "H_G"},
    {StatisticFamily::savage, ScoreKind::savage, "r_E", "H_E"},
};

// Per-term kinds in slot order.
std::vector<std::string> term_kinds(const std::vector<StatisticFamily>& s) {
    std::vector<std::string> kinds;
    if (wants(s, StatisticFamily::cvm)) kinds.push_back("S");
    if (wants(s, StatisticFamily::pearson)) kinds.push_back("r");
    for (const auto& st : kScoreStats) {
        if (wants(s, st.family)) kinds.push_back(st.term_kind);
    }
    return kinds;
}

std::vector<std::string> combined_names(const SubsetLagFamily& family, const std::vector<StatisticFamily>& s) {
    std::vector<std::string> base;
    if (wants(s, StatisticFamily::cvm)) {
        base.push_back("W");
        base.push_back("F");
    }
    if (wants(s, StatisticFamily::pearson)) base.push_back("H");
    for (const auto& st : kScoreStats) {
        if (wants(s, st.family)) base.push_back(st.combined);
    }
    std::vector<std::string> names = base;
    if (has_triples(family)) {
        for (const auto& b : base) names.push_back(b + "2");
    }
    return names;
}

double clipped_log(double p) { return std::log(std::max(p, 1e-300)); }

double term_p_value(const std::string& kind, double value, std::size_t cardinality, std::size_t n) {
    if (kind == "S") return xi_tail_probability(static_cast<int>(cardinality), std::max(value, 0.0));
    return two_sided_normal_p(std::sqrt(static_cast<double>(n)) * value);
}

}  // namespace

std::string to_string(StatisticFamily family) {
    switch (family) {
        case StatisticFamily::cvm: return "cvm";
        case StatisticFamily::pearson: return "pearson";
        case StatisticFamily::spearman: return "spearman";
        case StatisticFamily::vdw: return "vdw";
        case StatisticFamily::savage: return "savage";
    }
    return "unknown";
}

StatisticFamily statistic_family_from_string(const std::string& name) {
    static const std::map<std::string, StatisticFamily> names = {
        {"cvm", StatisticFamily::cvm},           {"W", StatisticFamily::cvm},
        {"F", StatisticFamily::cvm},             {"pearson", StatisticFamily::pearson},
        {"H", StatisticFamily::pearson},         {"spearman", StatisticFamily::spearman},
        {"H_S", StatisticFamily::spearman},      {"vdw", StatisticFamily::vdw},
        {"H_G", StatisticFamily::vdw},           {"savage", StatisticFamily::savage},
        {"H_E", StatisticFamily::savage},
    };
    const auto it = names.find(name);
    if (it == names.end()) throw InvalidArgument("unknown statistic '" + name + "'");
    return it->second;
}

std::vector<StatisticFamily> all_statistic_families() {
    return {StatisticFamily::cvm, StatisticFamily::pearson, StatisticFamily::spearman, StatisticFamily::vdw,
            StatisticFamily::savage};
}

const CombinedResult* StatisticReport::find(const std::string& name) const {
    for (const auto& c : combined) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

bool StatisticReport::rejects() const {
    return std::any_of(combined.begin(), combined.end(),
                       [&](const CombinedResult& c) { return c.p_value < metadata.alpha; });
}

std::vector<StatisticSlot> statistic_layout(const SubsetLagFamily& family,
                                            const std::vector<StatisticFamily>& statistics) {
    std::vector<StatisticSlot> slots;
    const std::size_t terms = family.term_count();
    for (const auto& kind : term_kinds(statistics)) {
        for (std::size_t i = 0; i < terms; ++i) slots.push_back({kind, false, i});
    }
    for (const auto& name : combined_names(family, statistics)) slots.push_back({name, true, 0});
    return slots;
}

std::size_t combined_slot(const SubsetLagFamily& family, const std::vector<StatisticFamily>& statistics,
                          const std::string& name) {
    const auto layout = statistic_layout(family, statistics);
    for (std::size_t i = 0; i < layout.size(); ++i) {
        if (layout[i].combined && layout[i].name == name) return i;
    }
    throw InvalidArgument("statistic '" + name + "' was not requested");
}

std::vector<double> evaluate_statistics(const Matrix& errors, const SubsetLagFamily& family,
                                        const std::vector<StatisticFamily>& statistics) {
    if (errors.cols() != static_cast<std::size_t>(family.d())) {
        throw InvalidArgument("error panel width does not match the lag family");
    }
    const std::size_t n = errors.rows();
    const double nd = static_cast<double>(n);
    const auto terms = flatten(family);
    const bool triples = has_triples(family);
    std::vector<double> out;
    std::vector<double> combined;

    // Appends sum and pairs-only sum of f(term, value) for the combined block.
    auto totals = [&](const std::vector<double>& values, auto&& f) {
        double all = 0.0;
        double pairs = 0.0;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const double v = f(terms[i], values[i]);
            all += v;
            if (terms[i].subset.size() == 2) pairs += v;
        }
        return std::pair{all, pairs};
    };
    std::vector<double> pair_block;

    if (wants(statistics, StatisticFamily::cvm)) {
        const auto ranks = circular_ranks(errors);
        std::vector<double> s(terms.size());
        for (std::size_t i = 0; i < terms.size(); ++i) s[i] = cvm_statistic(ranks, terms[i].subset, terms[i].lag);
        out.insert(out.end(), s.begin(), s.end());
        const auto w = totals(s, [&](const FlatTerm& t, double v) {
            const int k = static_cast<int>(t.subset.size());
            return w_weight(k) * (v - bias_term(n, k));
        });
        const auto f = totals(s, [&](const FlatTerm& t, double v) {
            return -2.0 * clipped_log(xi_tail_probability(static_cast<int>(t.subset.size()), std::max(v, 0.0)));
        });
        combined.push_back(w.first);
        combined.push_back(f.first);
        pair_block.push_back(w.second);
        pair_block.push_back(f.second);
    }
    auto add_correlations = [&](const StandardizedColumns& z) {
        std::vector<double> r(terms.size());
        for (std::size_t i = 0; i < terms.size(); ++i) r[i] = z.product_moment(terms[i].subset, terms[i].lag);
        out.insert(out.end(), r.begin(), r.end());
        const auto h = totals(r, [&](const FlatTerm&, double v) { return nd * v * v; });
        combined.push_back(h.first);
        pair_block.push_back(h.second);
    };
    if (wants(statistics, StatisticFamily::pearson)) add_correlations(StandardizedColumns(errors));
    for (const auto& st : kScoreStats) {
        if (wants(statistics, st.family)) add_correlations(standardized_scores(errors, ScoreFamily{st.kind}));
    }
    out.insert(out.end(), combined.begin(), combined.end());
    if (triples) out.insert(out.end(), pair_block.begin(), pair_block.end());
    return out;
}

double combined_p_value(const std::string& name, double value, const SubsetLagFamily& family) {
    const bool pairs = name.size() > 1 && name.back() == '2';
    const std::string base = pairs ? name.substr(0, name.size() - 1) : name;
    if (base == "W") return edgeworth_tail(value, w_limit_cumulants(family, pairs));
    const double terms = static_cast<double>(pairs ? family.pair_term_count() : family.term_count());
    if (base == "F") return chi_square_tail(value, 2.0 * terms);
    if (base == "H" || base == "H_S" || base == "H_G" || base == "H_E") return chi_square_tail(value, terms);
    throw InvalidArgument("unknown combined statistic '" + name + "'");
}

StatisticReport evaluate(const GeneralizedErrorPanel& panel, const TestOptions& options) {
    if (panel.m() == 0) throw InvalidArgument("at least one randomization is required");
    if (options.statistics.empty()) throw InvalidArgument("no statistics requested");
    if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
    const auto family = build_subset_lag_family(static_cast<int>(panel.d()), options.pair_max_lag,
                                                options.triple_max_lag, options.include_triples);
    const std::size_t n = panel.n();

    const auto averaged = average_over_randomizations(
        [&](const Matrix& errors) { return evaluate_statistics(errors, family, options.statistics); }, panel);

    const auto layout = statistic_layout(family, options.statistics);
    const auto terms = flatten(family);
    StatisticReport report;
    report.metadata = {n, panel.d(), options.pair_max_lag, options.triple_max_lag, options.include_triples,
                       panel.m(), panel.source_seed, options.alpha, averaged.distribution_free};

    for (std::size_t i = 0; i < layout.size(); ++i) {
        const auto& slot = layout[i];
        const double v = averaged.mean[i];
        if (!slot.combined) {
            const auto& t = terms[slot.term];
            report.per_term.push_back({t.subset, t.lag, slot.name, v, term_p_value(slot.name, v, t.subset.size(), n)});
            continue;
        }
        const bool w = slot.name == "W" || slot.name == "W2";
        const bool f = slot.name == "F" || slot.name == "F2";
        const bool pairs = slot.name.back() == '2';
        const double dof = (f ? 2.0 : 1.0) * static_cast<double>(pairs ? family.pair_term_count() : family.term_count());
        report.combined.push_back({slot.name, v, w ? "edgeworth" : "chi2", w ? 0.0 : dof,
                                   combined_p_value(slot.name, v, family)});
    }

    if (panel.m() > 1) {
        report.warnings.push_back(
            "statistics are averaged over " + std::to_string(panel.m()) +
            " randomizations; asymptotic p-values and critical values are approximate, use simulated quantiles "
            "for calibrated inference");
    }
    if (panel.d() == 3 && n < 500 && wants(options.statistics, StatisticFamily::savage)) {
        report.warnings.push_back("H_E converges slowly for three series; its level may be inflated for n < 500");
    }
    return report;
}

}  // namespace gei
