#include "gei/model_json.hpp"

#include <cmath>
#include <numeric>

#include <json.hpp>

#include "gei/errors.hpp"

namespace gei {

using nlohmann::json;

namespace {

std::string base_name(BaseFamily b) {
    switch (b) {
        case BaseFamily::normal: return "normal";
        case BaseFamily::centered_exponential: return "centered_exponential";
        case BaseFamily::centered_pareto6: return "centered_pareto6";
    }
    return "normal";
}

BaseFamily base_from_name(const std::string& s) {
    if (s == "normal") return BaseFamily::normal;
    if (s == "centered_exponential") return BaseFamily::centered_exponential;
    if (s == "centered_pareto6") return BaseFamily::centered_pareto6;
    throw DataError("unknown innovation family '" + s + "'");
}

template <class T>
T field(const json& j, const char* key) {
    if (!j.contains(key)) throw DataError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw DataError(std::string("field '") + key + "' has the wrong type");
    }
}

template <class T>
T field_or(const json& j, const char* key, T fallback) {
    return j.contains(key) ? field<T>(j, key) : fallback;
}

Coefficients renormalized(Coefficients q) {
    for (auto& row : q) {
        const double s = std::accumulate(row.begin(), row.end(), 0.0);
        if (std::abs(s - 1.0) > 1e-3) throw DataError("field 'q': transition row sums to " + std::to_string(s) + ", not 1");
    }
    return normalize_rows(std::move(q));
}

json spec_json(const ModelSpec& spec) {
    return std::visit(
        [](const auto& s) -> json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, GaussianHmmSpec>) {
                return {{"kind", "gaussian_hmm"}, {"regimes", s.regimes}, {"order", s.order},
                        {"phi", s.phi},           {"theta", s.theta},     {"sigma", s.sigma},
                        {"q", s.q},               {"initial", s.initial}, {"zero_inflated", s.zero_inflated},
                        {"innovation", base_name(s.innovation)}};
            } else if constexpr (std::is_same_v<T, PoissonHmmSpec>) {
                return {{"kind", "poisson_hmm"}, {"regimes", s.regimes}, {"order", s.order}, {"phi", s.phi},
                        {"theta", s.theta},      {"q", s.q},             {"initial", s.initial}};
            } else {
                return {{"kind", "ingarch"}, {"omega", s.omega}, {"alpha", s.alpha}, {"beta", s.beta}};
            }
        },
        spec);
}

ModelSpec spec_from(const json& j) {
    const std::string kind = field<std::string>(j, "kind");
    if (kind == "gaussian_hmm") {
        GaussianHmmSpec s;
        s.regimes = field<int>(j, "regimes");
        s.order = field_or(j, "order", 0);
        s.theta = field<Coefficients>(j, "theta");
        s.phi = j.contains("phi") ? field<Coefficients>(j, "phi") : Coefficients(s.regimes, std::vector<double>(s.order));
        s.sigma = field<std::vector<double>>(j, "sigma");
        s.q = renormalized(field<Coefficients>(j, "q"));
        s.zero_inflated = field_or(j, "zero_inflated", false);
        s.innovation = base_from_name(field_or(j, "innovation", std::string("normal")));
        s.initial = j.contains("initial") ? field<std::vector<double>>(j, "initial") : stationary_distribution(s.q);
        validate(s);
        return s;
    }
    if (kind == "poisson_hmm") {
        PoissonHmmSpec s;
        s.regimes = field<int>(j, "regimes");
        s.order = field_or(j, "order", 0);
        s.theta = field<Coefficients>(j, "theta");
        s.phi = j.contains("phi") ? field<Coefficients>(j, "phi") : Coefficients(s.regimes, std::vector<double>(s.order));
        s.q = renormalized(field<Coefficients>(j, "q"));
        s.initial = j.contains("initial") ? field<std::vector<double>>(j, "initial") : stationary_distribution(s.q);
        validate(s);
        return s;
    }
    if (kind == "ingarch") {
        IngarchSpec s;
        s.omega = field<double>(j, "omega");
        s.alpha = field_or(j, "alpha", std::vector<double>{});
        s.beta = field_or(j, "beta", std::vector<double>{});
        validate(s);
        return s;
    }
    throw DataError("unknown model kind '" + kind + "'");
}

FitRequest request_from(const json& j) {
    FitRequest r;
    r.kind = field<std::string>(j, "kind");
    r.regimes = field_or(j, "regimes", 1);
    r.order = field_or(j, "order", 0);
    r.zero_inflated = field_or(j, "zero_inflated", false);
    r.p = field_or(j, "p", 1);
    r.q = field_or(j, "q", 1);
    if (r.kind != "gaussian_hmm" && r.kind != "poisson_hmm" && r.kind != "ingarch") {
        throw DataError("unknown model kind '" + r.kind + "'");
    }
    return r;
}

}  // namespace

std::string model_to_json(const ModelSpec& spec, int indent) { return spec_json(spec).dump(indent); }

ModelSpec model_from_json(const std::string& text) {
    try {
        return spec_from(json::parse(text));
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed model document: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw DataError(std::string("invalid model: ") + e.what());
    }
}

FitResult fit_model(const FitRequest& r, std::span<const double> series, const Matrix& covariates) {
    if (r.kind == "gaussian_hmm") return fit_gaussian_hmm(series, covariates, r.regimes, r.order, r.zero_inflated);
    if (r.kind == "poisson_hmm") return fit_poisson_hmm(series, covariates, r.regimes, r.order);
    if (r.kind == "ingarch") return fit_ingarch(series, r.p, r.q);
    throw InvalidArgument("unknown model kind '" + r.kind + "'");
}

std::vector<ColumnModel> model_config_from_json(const std::string& text) {
    try {
        const json doc = json::parse(text);
        std::vector<ColumnModel> out;
        std::size_t index = 0;
        for (const auto& c : doc.at("columns")) {
            ++index;
            ColumnModel m;
            try {
                const int modes = c.contains("model") + c.contains("fit") + c.contains("raw");
                if (modes != 1) throw DataError("expected exactly one of \"raw\", \"model\" or \"fit\"");
                if (c.contains("model")) {
                    m.mode = ColumnModel::Mode::spec;
                    m.spec = spec_from(c.at("model"));
                } else if (c.contains("fit")) {
                    m.mode = ColumnModel::Mode::fit;
                    m.fit = request_from(c.at("fit"));
                } else if (c.value("raw", false)) {
                    m.mode = ColumnModel::Mode::raw;
                } else {
                    throw DataError("expected one of \"raw\", \"model\" or \"fit\"");
                }
            } catch (const Error& e) {
                throw DataError("columns[" + std::to_string(index) + "]: " + e.what());
            }
            out.push_back(std::move(m));
        }
        return out;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed model configuration: ") + e.what());
    }
}

}  // namespace gei
