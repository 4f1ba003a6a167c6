#include "gei/study_io.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <type_traits>

#include <json.hpp>
#include <toml.hpp>

#include "gei/csv.hpp"
#include "gei/errors.hpp"

namespace gei {

using nlohmann::json;

namespace {

const std::vector<std::string> kKnownKeys = {
    "dgp", "copula", "tau", "dimension", "margin", "n", "replicates", "lag_shift", "randomizations", "seed",
    "statistics", "level", "m2", "m3", "include_triples", "mode", "averaging", "quantile_levels", "label",
    "table_row", "table_column"};

BaseFamily margin_from(const std::string& s) {
    if (s == "normal" || s == "gaussian") return BaseFamily::normal;
    if (s == "exponential") return BaseFamily::centered_exponential;
    if (s == "pareto") return BaseFamily::centered_pareto6;
    throw InvalidArgument("unknown margin '" + s + "' (normal, exponential, pareto)");
}

std::string margin_name(BaseFamily b) {
    switch (b) {
        case BaseFamily::normal: return "normal";
        case BaseFamily::centered_exponential: return "exponential";
        case BaseFamily::centered_pareto6: return "pareto";
    }
    return "normal";
}

template <class T>
T field(const json& j, const std::string& key, const std::string& where) {
    try {
        const json& v = j.at(key);
        if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
            if (!v.is_number_unsigned()) throw DataError(where + "." + key + ": expected a non-negative integer");
        } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
            if (!v.is_number_integer()) throw DataError(where + "." + key + ": expected an integer");
        } else if constexpr (std::is_same_v<T, std::vector<std::size_t>>) {
            for (const auto& e : v)
                if (!e.is_number_unsigned()) throw DataError(where + "." + key + ": expected non-negative integers");
        }
        return v.get<T>();
    } catch (const json::exception&) {
        throw DataError(where + "." + key + ": wrong type");
    }
}

std::string default_label(const McStudySpec& s) {
    std::ostringstream out;
    out << to_string(s.dgp) << "/" << to_string(s.copula.family);
    if (s.copula.family == CopulaFamily::gaussian || s.copula.family == CopulaFamily::frank ||
        s.copula.family == CopulaFamily::clayton) {
        out << "(" << s.copula.kendall_tau << ")";
    }
    out << "/n=" << s.n;
    if (s.lag_shift != 0) out << "/l=" << s.lag_shift;
    return out.str();
}

McStudySpec study_from(const json& j, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(kKnownKeys.begin(), kKnownKeys.end(), it.key()) == kKnownKeys.end()) {
            throw DataError(where + "." + it.key() + ": unknown field");
        }
    }
    McStudySpec s;
    auto guard = [&](const std::string& key, auto&& apply) {
        if (!j.contains(key)) return;
        try {
            apply();
        } catch (const DataError&) {
            throw;
        } catch (const Error& e) {
            throw DataError(where + "." + key + ": " + e.what());
        }
    };
    guard("dgp", [&] { s.dgp = dgp_from_string(field<std::string>(j, "dgp", where)); });
    s.copula.dimension = s.dgp == Dgp::dgp3 ? 3 : 2;
    guard("copula", [&] { s.copula.family = copula_family_from_string(field<std::string>(j, "copula", where)); });
    guard("tau", [&] { s.copula.kendall_tau = field<double>(j, "tau", where); });
    guard("dimension", [&] { s.copula.dimension = field<int>(j, "dimension", where); });
    guard("margin", [&] { s.margin = margin_from(field<std::string>(j, "margin", where)); });
    guard("n", [&] { s.n = field<std::size_t>(j, "n", where); });
    guard("replicates", [&] { s.replicates = field<std::size_t>(j, "replicates", where); });
    guard("lag_shift", [&] { s.lag_shift = field<int>(j, "lag_shift", where); });
    guard("randomizations", [&] { s.randomizations = field<std::size_t>(j, "randomizations", where); });
    guard("seed", [&] { s.seed = field<std::uint64_t>(j, "seed", where); });
    guard("statistics", [&] {
        s.statistics.clear();
        for (const auto& name : field<std::vector<std::string>>(j, "statistics", where)) {
            const auto f = statistic_family_from_string(name);
            if (std::find(s.statistics.begin(), s.statistics.end(), f) == s.statistics.end()) s.statistics.push_back(f);
        }
    });
    guard("level", [&] { s.level = field<double>(j, "level", where); });
    guard("m2", [&] { s.pair_max_lag = field<int>(j, "m2", where); });
    guard("m3", [&] { s.triple_max_lag = field<int>(j, "m3", where); });
    guard("include_triples", [&] { s.include_triples = field<bool>(j, "include_triples", where); });
    guard("mode", [&] {
        const auto m = field<std::string>(j, "mode", where);
        if (m == "rejection") s.mode = StudyMode::rejection;
        else if (m == "quantile") s.mode = StudyMode::quantile;
        else throw InvalidArgument("expected 'rejection' or 'quantile'");
    });
    guard("averaging", [&] { s.averaging_sizes = field<std::vector<std::size_t>>(j, "averaging", where); });
    guard("quantile_levels", [&] { s.quantile_levels = field<std::vector<double>>(j, "quantile_levels", where); });
    if (!s.averaging_sizes.empty() && !j.contains("randomizations")) {
        s.randomizations = *std::max_element(s.averaging_sizes.begin(), s.averaging_sizes.end());
    }
    s.name = j.contains("label") ? field<std::string>(j, "label", where) : default_label(s);
    try {
        validate(s);
    } catch (const Error& e) {
        throw DataError(where + ": " + e.what());
    }
    return s;
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

StudyFile parse_study_file(const std::string& text, const std::string& format) {
    json doc;
    if (format == "json") {
        try {
            doc = json::parse(text);
        } catch (const json::exception& e) {
            throw DataError(std::string("study file: ") + e.what());
        }
    } else if (format == "toml") {
        try {
            const toml::table table = toml::parse(text);
            std::ostringstream out;
            out << toml::json_formatter{table};
            doc = json::parse(out.str());
        } catch (const toml::parse_error& e) {
            std::ostringstream msg;
            msg << "study file: line " << e.source().begin.line << ": " << e.description();
            throw DataError(msg.str());
        }
    } else {
        throw InvalidArgument("study format must be 'toml' or 'json'");
    }
    if (!doc.is_object()) throw DataError("study file: top level must be a table");
    StudyFile file;
    file.source_hash = fnv1a64(text);
    file.name = doc.value("name", std::string("study"));
    const json defaults = doc.value("defaults", json::object());
    if (!doc.contains("study") || !doc["study"].is_array() || doc["study"].empty()) {
        throw DataError("study file: at least one [[study]] entry is required");
    }
    std::size_t index = 0;
    for (const auto& entry : doc["study"]) {
        ++index;
        json merged = defaults;
        merged.update(entry);
        const std::string where = "study[" + std::to_string(index) + "]";
        file.studies.push_back(study_from(merged, where));
        file.cells.emplace_back(merged.contains("table_row") ? field<std::string>(merged, "table_row", where) : "",
                                merged.contains("table_column") ? field<std::string>(merged, "table_column", where)
                                                                : "");
    }
    return file;
}

StudyFile load_study_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    const auto ext = std::filesystem::path(path).extension().string();
    if (ext != ".toml" && ext != ".json") throw DataError(path + ": expected a .toml or .json study file");
    return parse_study_file(ss.str(), ext.substr(1));
}

std::vector<std::string> write_study_outputs(const std::string& directory, const StudyFile& file,
                                             const std::vector<McStudyResult>& results) {
    namespace fs = std::filesystem;
    fs::create_directories(directory);
    std::vector<std::string> written;
    auto open = [&](const std::string& name) {
        const std::string path = (fs::path(directory) / name).string();
        std::ofstream out(path);
        if (!out) throw DataError("cannot write '" + path + "'");
        written.push_back(path);
        return out;
    };

    // Statistic rows in first-seen order across studies.
    auto statistic_rows = [&](StudyMode mode) {
        std::vector<std::string> rows;
        for (const auto& r : results) {
            if (r.spec.mode != mode) continue;
            for (const auto& s : r.statistics)
                if (std::find(rows.begin(), rows.end(), s) == rows.end()) rows.push_back(s);
        }
        return rows;
    };

    const auto rej_rows = statistic_rows(StudyMode::rejection);
    auto percent = [](const McStudyResult& r, const std::string& stat) {
        for (const auto& row : r.rejection)
            if (row.statistic == stat) return csv_number(std::round(row.percent * 10.0) / 10.0);
        return std::string();
    };
    bool grid = !rej_rows.empty() && file.cells.size() == results.size();
    for (std::size_t i = 0; grid && i < results.size(); ++i) {
        if (results[i].spec.mode == StudyMode::rejection && (file.cells[i].first.empty() || file.cells[i].second.empty()))
            grid = false;
    }
    if (grid) {
        std::vector<std::string> row_keys, col_keys;
        for (std::size_t i = 0; i < results.size(); ++i) {
            if (results[i].spec.mode != StudyMode::rejection) continue;
            const auto& [r, c] = file.cells[i];
            if (std::find(row_keys.begin(), row_keys.end(), r) == row_keys.end()) row_keys.push_back(r);
            if (std::find(col_keys.begin(), col_keys.end(), c) == col_keys.end()) col_keys.push_back(c);
        }
        auto out = open("rejection.csv");
        out << "row,statistic";
        for (const auto& c : col_keys) out << "," << csv_field(c);
        out << "\n";
        for (const auto& r : row_keys) {
            for (const auto& stat : rej_rows) {
                out << csv_field(r) << "," << csv_field(stat);
                for (const auto& c : col_keys) {
                    out << ",";
                    for (std::size_t i = 0; i < results.size(); ++i) {
                        if (results[i].spec.mode == StudyMode::rejection && file.cells[i].first == r &&
                            file.cells[i].second == c) {
                            out << percent(results[i], stat);
                            break;
                        }
                    }
                }
                out << "\n";
            }
        }
    } else if (!rej_rows.empty()) {
        auto out = open("rejection.csv");
        out << "statistic";
        for (const auto& r : results)
            if (r.spec.mode == StudyMode::rejection) out << "," << csv_field(r.spec.name);
        out << "\n";
        for (const auto& stat : rej_rows) {
            out << csv_field(stat);
            for (const auto& r : results) {
                if (r.spec.mode != StudyMode::rejection) continue;
                out << "," << percent(r, stat);
            }
            out << "\n";
        }
    }

    const auto q_rows = statistic_rows(StudyMode::quantile);
    if (!q_rows.empty()) {
        auto out = open("quantiles.csv");
        // One column per (study, M, level).
        std::vector<std::tuple<std::size_t, std::size_t, double>> cols;
        out << "statistic";
        for (std::size_t i = 0; i < results.size(); ++i) {
            if (results[i].spec.mode != StudyMode::quantile) continue;
            for (const auto& q : results[i].quantiles) {
                const auto key = std::make_tuple(i, q.averaging, q.level);
                if (std::find(cols.begin(), cols.end(), key) != cols.end()) continue;
                cols.push_back(key);
                std::ostringstream name;
                name << results[i].spec.name << " M=" << q.averaging << " q" << q.level * 100.0;
                out << "," << csv_field(name.str());
            }
        }
        out << "\n";
        for (const auto& stat : q_rows) {
            out << csv_field(stat);
            for (const auto& [i, m, level] : cols) {
                out << ",";
                for (const auto& q : results[i].quantiles)
                    if (q.statistic == stat && q.averaging == m && q.level == level) out << csv_number(q.value);
            }
            out << "\n";
        }
    }

    {
        auto out = open("values.csv");
        out << "study,replicate,statistic,value\n";
        for (const auto& r : results) {
            for (std::size_t k = 0; k < r.values.size(); ++k)
                for (std::size_t s = 0; s < r.statistics.size(); ++s)
                    out << csv_field(r.spec.name) << "," << k << "," << r.statistics[s] << "," << csv_number(r.values[k][s])
                        << "\n";
        }
    }

    {
        json manifest;
        std::ostringstream hash;
        hash << std::hex << file.source_hash;
        manifest["name"] = file.name;
        manifest["spec_hash_fnv1a64"] = hash.str();
        json studies = json::array();
        double total = 0.0;
        for (const auto& r : results) {
            total += r.runtime_seconds;
            studies.push_back({{"label", r.spec.name},
                               {"dgp", to_string(r.spec.dgp)},
                               {"copula", to_string(r.spec.copula.family)},
                               {"tau", r.spec.copula.kendall_tau},
                               {"margin", margin_name(r.spec.margin)},
                               {"n", r.spec.n},
                               {"seed", r.spec.seed},
                               {"replicates", r.spec.replicates},
                               {"randomizations", r.spec.randomizations},
                               {"completed", r.completed},
                               {"failed", r.failed},
                               {"failures", r.failure_messages},
                               {"quantile_estimator", r.quantile_estimator},
                               {"runtime_seconds", r.runtime_seconds}});
        }
        manifest["studies"] = studies;
        manifest["runtime_seconds"] = total;
        auto out = open("manifest.json");
        out << manifest.dump(2) << "\n";
    }
    return written;
}

}  // namespace gei
