#pragma once

#include <string>
#include <string_view>

#include "gei/panel.hpp"
#include "gei/rng.hpp"

namespace gei {

enum class CopulaFamily { independence, gaussian, frank, clayton, tentmap, romano_siegel };

std::string_view to_string(CopulaFamily family) noexcept;
CopulaFamily copula_family_from_string(std::string_view name);

/// Exchangeable copula parameterized by Kendall's tau (ignored by independence, tentmap
/// and romano_siegel). tentmap needs dimension 2, romano_siegel dimension 3.
struct CopulaSpec {
    CopulaFamily family = CopulaFamily::independence;
    double kendall_tau = 0.0;
    int dimension = 2;

    bool operator==(const CopulaSpec&) const = default;
};

/// rho = sin(pi tau / 2)
double gaussian_rho_from_tau(double tau);
/// theta = 2 tau / (1 - tau)
double clayton_theta_from_tau(double tau);
/// Solves tau = 1 - 4/theta [1 - D_1(theta)] with D_1 the Debye function.
double frank_theta_from_tau(double tau);
/// Kendall's tau of the Frank copula with parameter theta.
double frank_tau_from_theta(double theta);

/// Throws InvalidArgument for a tau outside the family's range or an unsupported dimension.
void validate(const CopulaSpec& spec);

/// n rows drawn i.i.d. from the copula. Bivariate Clayton and Frank use conditional
/// inversion; trivariate ones use the Marshall-Olkin frailty construction.
Matrix sample_copula(const CopulaSpec& spec, std::size_t n, Rng& rng);

}  // namespace gei
