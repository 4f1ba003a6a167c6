#include "gei/copula.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "gei/errors.hpp"

namespace gei {
namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double debye1(double theta) {
    if (theta == 0.0) return 1.0;
    auto f = [](double t) { return t == 0.0 ? 1.0 : t / std::expm1(t); };
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, theta, 10, 1e-14) / theta;
}

// Kemp's sampler for the logarithmic series law P(V = k) = -p^k / (k log(1 - p)).
double logarithmic_series(double p, Rng& rng) {
    const double v = rng.uniform();
    if (v >= p) return 1.0;
    const double q = -std::expm1(std::log1p(-p) * rng.uniform());
    if (v <= q * q) return std::floor(1.0 + std::log(v) / std::log(q));
    return v <= q ? 2.0 : 1.0;
}

}  // namespace

std::string_view to_string(CopulaFamily family) noexcept {
    switch (family) {
        case CopulaFamily::independence: return "independence";
        case CopulaFamily::gaussian: return "gaussian";
        case CopulaFamily::frank: return "frank";
        case CopulaFamily::clayton: return "clayton";
        case CopulaFamily::tentmap: return "tentmap";
        case CopulaFamily::romano_siegel: return "romano_siegel";
    }
    return "unknown";
}

CopulaFamily copula_family_from_string(std::string_view name) {
    for (auto f : {CopulaFamily::independence, CopulaFamily::gaussian, CopulaFamily::frank, CopulaFamily::clayton,
                   CopulaFamily::tentmap, CopulaFamily::romano_siegel}) {
        if (to_string(f) == name) return f;
    }
    throw InvalidArgument("unknown copula family '" + std::string(name) + "'");
}

double gaussian_rho_from_tau(double tau) { return std::sin(std::numbers::pi * tau / 2.0); }

double clayton_theta_from_tau(double tau) { return 2.0 * tau / (1.0 - tau); }

double frank_tau_from_theta(double theta) {
    if (theta == 0.0) return 0.0;
    return 1.0 - 4.0 / theta * (1.0 - debye1(theta));
}

double frank_theta_from_tau(double tau) {
    if (!(tau > -1.0 && tau < 1.0)) throw InvalidArgument("Frank copula needs tau in (-1, 1)");
    if (tau == 0.0) return 0.0;
    // tau is odd and increasing in theta; bracket on the side of tau's sign.
    double lo = 0.0;
    double hi = tau > 0.0 ? 1.0 : -1.0;
    while ((frank_tau_from_theta(hi) - tau) * (tau > 0.0 ? 1.0 : -1.0) < 0.0) hi *= 2.0;
    boost::uintmax_t iterations = 200;
    const auto r = boost::math::tools::toms748_solve([&](double t) { return frank_tau_from_theta(t) - tau; },
                                                      std::min(lo, hi), std::max(lo, hi),
                                                      boost::math::tools::eps_tolerance<double>(50), iterations);
    return 0.5 * (r.first + r.second);
}

void validate(const CopulaSpec& spec) {
    const double tau = spec.kendall_tau;
    if (spec.dimension < 2 || spec.dimension > 3) throw InvalidArgument("copula dimension must be 2 or 3");
    switch (spec.family) {
        case CopulaFamily::independence: break;
        case CopulaFamily::gaussian:
            if (!(tau > -1.0 && tau < 1.0)) throw InvalidArgument("Gaussian copula needs tau in (-1, 1)");
            if (spec.dimension == 3 && gaussian_rho_from_tau(tau) <= -0.5) {
                throw InvalidArgument("exchangeable trivariate Gaussian copula needs rho > -1/2");
            }
            break;
        case CopulaFamily::clayton:
            if (!(tau >= 0.0 && tau < 1.0)) throw InvalidArgument("Clayton copula needs tau in [0, 1)");
            break;
        case CopulaFamily::frank:
            if (!(tau > -1.0 && tau < 1.0)) throw InvalidArgument("Frank copula needs tau in (-1, 1)");
            if (spec.dimension == 3 && tau < 0.0) throw InvalidArgument("trivariate Frank copula needs tau >= 0");
            break;
        case CopulaFamily::tentmap:
            if (spec.dimension != 2) throw InvalidArgument("the tent map copula is bivariate");
            break;
        case CopulaFamily::romano_siegel:
            if (spec.dimension != 3) throw InvalidArgument("the Romano-Siegel copula is trivariate");
            break;
    }
}

Matrix sample_copula(const CopulaSpec& spec, std::size_t n, Rng& rng) {
    validate(spec);
    const auto d = static_cast<std::size_t>(spec.dimension);
    Matrix out(n, d);
    const double tau = spec.kendall_tau;
    const bool trivial = spec.family != CopulaFamily::tentmap && spec.family != CopulaFamily::romano_siegel && tau == 0.0;
    if (spec.family == CopulaFamily::independence || trivial) {
        for (std::size_t t = 0; t < n; ++t)
            for (std::size_t j = 0; j < d; ++j) out(t, j) = rng.uniform();
        return out;
    }
    switch (spec.family) {
        case CopulaFamily::gaussian: {
            const double rho = gaussian_rho_from_tau(tau);
            Eigen::MatrixXd corr = Eigen::MatrixXd::Constant(d, d, rho);
            corr.diagonal().setOnes();
            const Eigen::MatrixXd l = corr.llt().matrixL();
            Eigen::VectorXd z(d);
            for (std::size_t t = 0; t < n; ++t) {
                for (std::size_t j = 0; j < d; ++j) z(j) = rng.normal();
                const Eigen::VectorXd x = l * z;
                for (std::size_t j = 0; j < d; ++j) out(t, j) = normal_cdf(x(j));
            }
            break;
        }
        case CopulaFamily::clayton: {
            const double theta = clayton_theta_from_tau(tau);
            for (std::size_t t = 0; t < n; ++t) {
                if (d == 2) {
                    const double u = rng.uniform();
                    const double w = rng.uniform();
                    out(t, 0) = u;
                    out(t, 1) = std::pow((std::pow(w, -theta / (1.0 + theta)) - 1.0) * std::pow(u, -theta) + 1.0,
                                         -1.0 / theta);
                } else {
                    const double v = rng.gamma(1.0 / theta);
                    for (std::size_t j = 0; j < d; ++j) out(t, j) = std::pow(1.0 + rng.exponential() / v, -1.0 / theta);
                }
            }
            break;
        }
        case CopulaFamily::frank: {
            const double theta = frank_theta_from_tau(tau);
            for (std::size_t t = 0; t < n; ++t) {
                if (d == 2) {
                    const double u = rng.uniform();
                    const double w = rng.uniform();
                    out(t, 0) = u;
                    const double a = std::expm1(-theta);
                    out(t, 1) = -std::log1p(w * a / (w + (1.0 - w) * std::exp(-theta * u))) / theta;
                } else {
                    const double v = logarithmic_series(-std::expm1(-theta), rng);
                    for (std::size_t j = 0; j < d; ++j) {
                        out(t, j) = -std::log1p(std::exp(-rng.exponential() / v) * std::expm1(-theta)) / theta;
                    }
                }
            }
            break;
        }
        case CopulaFamily::tentmap:
            for (std::size_t t = 0; t < n; ++t) {
                const double u = rng.uniform();
                out(t, 0) = u;
                out(t, 1) = 1.0 - std::abs(2.0 * u - 1.0);
            }
            break;
        case CopulaFamily::romano_siegel:
            for (std::size_t t = 0; t < n; ++t) {
                const double u = rng.uniform();
                const double v = rng.uniform();
                const double eta = rng.uniform();
                out(t, 0) = u;
                out(t, 1) = v;
                out(t, 2) = (u - 0.5) * (v - 0.5) * (eta - 0.5) >= 0.0 ? eta : 1.0 - eta;
            }
            break;
        case CopulaFamily::independence: break;
    }
    return out;
}

}  // namespace gei
