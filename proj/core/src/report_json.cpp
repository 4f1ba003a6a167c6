#include "gei/report_json.hpp"

#include <json.hpp>

#include "gei/errors.hpp"

namespace gei {

using nlohmann::json;

std::string report_to_json(const StatisticReport& report, int indent) {
    json doc;
    doc["schema"] = kReportSchema;
    const auto& m = report.metadata;
    doc["metadata"] = {{"n", m.n},
                       {"d", m.d},
                       {"pair_max_lag", m.pair_max_lag},
                       {"triple_max_lag", m.triple_max_lag},
                       {"include_triples", m.include_triples},
                       {"randomizations", m.randomizations},
                       {"seed", m.seed},
                       {"alpha", m.alpha},
                       {"distribution_free", m.distribution_free}};
    json terms = json::array();
    for (const auto& t : report.per_term) {
        json subset = json::array();
        for (int j : t.subset) subset.push_back(j + 1);
        terms.push_back({{"subset", subset}, {"lag", t.lag}, {"kind", t.kind}, {"value", t.value}, {"p_value", t.p_value}});
    }
    doc["per_term"] = terms;
    json combined = json::array();
    for (const auto& c : report.combined) {
        combined.push_back({{"name", c.name},
                            {"value", c.value},
                            {"reference", c.reference},
                            {"dof", c.dof},
                            {"p_value", c.p_value}});
    }
    doc["combined"] = combined;
    doc["warnings"] = report.warnings;
    return doc.dump(indent);
}

StatisticReport report_from_json(const std::string& text) {
    try {
        const json doc = json::parse(text);
        if (doc.at("schema").get<std::string>() != kReportSchema) {
            throw DataError("unsupported report schema '" + doc.at("schema").get<std::string>() + "'");
        }
        StatisticReport r;
        const auto& m = doc.at("metadata");
        r.metadata.n = m.at("n").get<std::size_t>();
        r.metadata.d = m.at("d").get<std::size_t>();
        r.metadata.pair_max_lag = m.at("pair_max_lag").get<int>();
        r.metadata.triple_max_lag = m.at("triple_max_lag").get<int>();
        r.metadata.include_triples = m.at("include_triples").get<bool>();
        r.metadata.randomizations = m.at("randomizations").get<std::size_t>();
        r.metadata.seed = m.at("seed").get<std::uint64_t>();
        r.metadata.alpha = m.at("alpha").get<double>();
        r.metadata.distribution_free = m.at("distribution_free").get<bool>();
        for (const auto& t : doc.at("per_term")) {
            TermResult term;
            for (int j : t.at("subset").get<std::vector<int>>()) term.subset.push_back(j - 1);
            term.lag = t.at("lag").get<LagVector>();
            term.kind = t.at("kind").get<std::string>();
            term.value = t.at("value").get<double>();
            term.p_value = t.at("p_value").get<double>();
            r.per_term.push_back(std::move(term));
        }
        for (const auto& c : doc.at("combined")) {
            r.combined.push_back({c.at("name").get<std::string>(), c.at("value").get<double>(),
                                  c.at("reference").get<std::string>(), c.at("dof").get<double>(),
                                  c.at("p_value").get<double>()});
        }
        r.warnings = doc.at("warnings").get<std::vector<std::string>>();
        return r;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed report: ") + e.what());
    }
}

}  // namespace gei
