#include "gei/dgp.hpp"

#include <string>

#include "gei/errors.hpp"
#include "gei/rng.hpp"

namespace gei {
namespace {

constexpr std::uint64_t kCopulaStream = 0xC0;

GaussianHmmSpec hmm(std::vector<double> theta, std::vector<double> sigma, Coefficients q, BaseFamily innovation) {
    GaussianHmmSpec s;
    s.regimes = static_cast<int>(theta.size());
    s.order = 0;
    s.phi.assign(theta.size(), {});
    for (double v : theta) s.theta.push_back({v});
    s.sigma = std::move(sigma);
    s.q = normalize_rows(std::move(q));
    s.initial = stationary_distribution(s.q);
    s.innovation = innovation;
    return s;
}

GaussianHmmSpec ar1_gaussian() {
    GaussianHmmSpec s;
    s.regimes = 1;
    s.order = 1;
    s.phi = {{0.5}};
    s.theta = {{0.0}};
    s.sigma = {1.0};
    s.q = {{1.0}};
    s.initial = {1.0};
    return s;
}

IngarchSpec poisson_feedback() {
    IngarchSpec s;
    s.omega = 1.0;
    s.alpha = {0.1};
    return s;
}

}  // namespace

std::string_view to_string(Dgp dgp) noexcept {
    switch (dgp) {
        case Dgp::dgp1: return "dgp1";
        case Dgp::dgp2: return "dgp2";
        case Dgp::dgp3: return "dgp3";
        case Dgp::iid_uniform: return "iid_uniform";
    }
    return "unknown";
}

Dgp dgp_from_string(std::string_view name) {
    for (auto d : {Dgp::dgp1, Dgp::dgp2, Dgp::dgp3, Dgp::iid_uniform}) {
        if (to_string(d) == name) return d;
    }
    throw InvalidArgument("unknown dgp '" + std::string(name) + "'");
}

GaussianHmmSpec dgp1_model_x1(BaseFamily innovation) {
    return hmm({0.002158, 0.004192, 0.001306}, {0.026689, 0.016850, 0.008872},
               {{0.969080, 0.030912, 0.000008}, {0.000233, 0.169373, 0.830394}, {0.025170, 0.859641, 0.115189}},
               innovation);
}

GaussianHmmSpec dgp1_model_x2(BaseFamily innovation) {
    return hmm({0.000759, 0.000908}, {0.029993, 0.014038}, {{0.974388, 0.025612}, {0.006381, 0.993619}}, innovation);
}

int dgp_dimension(const McStudySpec& spec) {
    switch (spec.dgp) {
        case Dgp::dgp1:
        case Dgp::dgp2: return 2;
        case Dgp::dgp3: return 3;
        case Dgp::iid_uniform: return spec.copula.dimension;
    }
    return 2;
}

void validate(const McStudySpec& spec) {
    if (spec.copula.dimension != dgp_dimension(spec)) {
        throw InvalidArgument("copula.dimension must be " + std::to_string(dgp_dimension(spec)) + " for " +
                              std::string(to_string(spec.dgp)));
    }
    validate(spec.copula);
    if (spec.n < 2) throw InvalidArgument("n must be at least 2");
    if (spec.replicates < 1) throw InvalidArgument("replicates must be at least 1");
    if (spec.randomizations < 1) throw InvalidArgument("randomizations must be at least 1");
    if (!(spec.level > 0.0 && spec.level < 1.0)) throw InvalidArgument("level must lie in (0, 1)");
    if (spec.statistics.empty()) throw InvalidArgument("statistics must not be empty");
    if (spec.pair_max_lag < 0 || spec.triple_max_lag < 0) throw InvalidArgument("maximum lags must be non-negative");
    if (static_cast<std::size_t>(std::abs(spec.lag_shift)) >= spec.n) throw InvalidArgument("lag_shift must be below n");
    for (std::size_t m : spec.averaging_sizes) {
        if (m < 1 || m > spec.randomizations) {
            throw InvalidArgument("averaging_sizes entries must lie in [1, randomizations]");
        }
    }
    for (double q : spec.quantile_levels) {
        if (!(q > 0.0 && q < 1.0)) throw InvalidArgument("quantile_levels must lie in (0, 1)");
    }
}

DgpSample generate_dgp(const McStudySpec& spec, std::size_t replicate) {
    validate(spec);
    const std::size_t d = static_cast<std::size_t>(dgp_dimension(spec));
    const bool recursive = spec.dgp != Dgp::iid_uniform;
    const std::size_t burn = recursive ? kBurnIn : 0;
    const std::size_t total = burn + spec.n;

    Rng rng(derive_seed(spec.seed, {replicate, kCopulaStream}));
    const Matrix c = sample_copula(spec.copula, total, rng);
    // Row t of the copula sample pairs u_t with v_{t + shift}; indices wrap inside the burn-in.
    Matrix u(total, d);
    const long shift = spec.lag_shift;
    const long len = static_cast<long>(total);
    for (std::size_t t = 0; t < total; ++t) {
        for (std::size_t j = 0; j < d; ++j) {
            long s = static_cast<long>(t);
            if (j == 1) s = ((s - shift) % len + len) % len;
            u(t, j) = c(static_cast<std::size_t>(s), j);
        }
    }

    std::vector<ModelSpec> models;
    switch (spec.dgp) {
        case Dgp::dgp1: models = {dgp1_model_x1(spec.margin), dgp1_model_x2(spec.margin)}; break;
        case Dgp::dgp2: models = {poisson_feedback(), ar1_gaussian()}; break;
        case Dgp::dgp3: models = {poisson_feedback(), ar1_gaussian(), ar1_gaussian()}; break;
        case Dgp::iid_uniform: break;
    }

    Matrix x(spec.n, d);
    std::vector<std::vector<ConditionalLaw>> laws(d);
    for (std::size_t j = 0; j < d; ++j) {
        laws[j].reserve(spec.n);
        if (!recursive) {
            for (std::size_t t = 0; t < spec.n; ++t) {
                x(t, j) = u(t, j);
                laws[j].push_back(UniformLaw{});
            }
            continue;
        }
        auto predictor = make_predictor(models[j], 0.0);
        for (std::size_t t = 0; t < total; ++t) {
            const ConditionalLaw law = predictor->law({});
            const double value = quantile(law, u(t, j));
            predictor->update(value, {});
            if (t >= burn) {
                x(t - burn, j) = value;
                laws[j].push_back(law);
            }
        }
    }
    return {SeriesPanel(std::move(x)), ConditionalTrace(std::move(laws))};
}

}  // namespace gei
