#include "gei/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include "gei/errors.hpp"

namespace gei {

double bias_term(std::size_t n, int d) {
    if (n < 1) throw InvalidArgument("bias term needs n >= 1");
    if (d != 2 && d != 3) throw InvalidArgument("bias term is defined for d = 2 and d = 3");
    const double nd = static_cast<double>(n);
    return std::pow((nd - 1.0) / (6.0 * nd), d) - std::pow(6.0, -d) + (nd - 1.0) * std::pow(-1.0 / (6.0 * nd), d);
}

std::array<double, 6> xi_cumulants(int d) {
    if (d < 1) throw InvalidArgument("cumulants need d >= 1");
    std::array<double, 6> k{};
    double factorial = 1.0;
    for (int r = 1; r <= 6; ++r) {
        if (r > 1) factorial *= r - 1;
        const double zeta = boost::math::zeta(2.0 * r);
        k[r - 1] = std::pow(2.0, r - 1) * factorial * std::pow(zeta, d) / std::pow(std::numbers::pi, 2.0 * r * d);
    }
    return k;
}

double w_weight(int cardinality) { return std::pow(std::numbers::pi, 2.0 * (cardinality - 2)); }

std::array<double, 6> w_limit_cumulants(const SubsetLagFamily& family, bool pairs_only) {
    std::array<double, 6> total{};
    for (const SubsetLags& entry : family.entries()) {
        const int k = static_cast<int>(entry.subset.size());
        if (pairs_only && k != 2) continue;
        const auto kappa = xi_cumulants(k);
        const double w = w_weight(k);
        const double count = static_cast<double>(entry.lags.size());
        for (int r = 0; r < 6; ++r) total[r] += count * std::pow(w, r + 1) * kappa[r];
    }
    return total;
}

double edgeworth_tail(double x, const std::array<double, 6>& k) {
    if (!(k[1] > 0.0)) throw InvalidArgument("Edgeworth expansion needs a positive variance");
    const double sd = std::sqrt(k[1]);
    const double z = (x - k[0]) / sd;
    const double l3 = k[2] / std::pow(sd, 3);
    const double l4 = k[3] / std::pow(sd, 4);
    const double l5 = k[4] / std::pow(sd, 5);
    const double l6 = k[5] / std::pow(sd, 6);

    // Probabilists' Hermite polynomials He_0..He_11.
    std::array<double, 12> he{};
    he[0] = 1.0;
    he[1] = z;
    for (int i = 2; i < 12; ++i) he[i] = z * he[i - 1] - (i - 1) * he[i - 2];

    const double corr = l3 / 6.0 * he[2]
                      + l4 / 24.0 * he[3] + l3 * l3 / 72.0 * he[5]
                      + l5 / 120.0 * he[4] + l3 * l4 / 144.0 * he[6] + l3 * l3 * l3 / 1296.0 * he[8]
                      + l6 / 720.0 * he[5] + (l4 * l4 / 1152.0 + l3 * l5 / 720.0) * he[7]
                      + l3 * l3 * l4 / 1728.0 * he[9] + l3 * l3 * l3 * l3 / 31104.0 * he[11];
    const double phi = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
    const double upper = 0.5 * std::erfc(z / std::numbers::sqrt2);
    return std::clamp(upper + phi * corr, 0.0, 1.0);
}

double chi_square_tail(double x, double dof) {
    if (!(dof > 0.0)) throw InvalidArgument("chi-square degrees of freedom must be positive");
    if (x <= 0.0) return 1.0;
    const boost::math::chi_squared_distribution<double> chi(dof);
    return boost::math::cdf(boost::math::complement(chi, x));
}

double chi_square_upper_quantile(double p, double dof) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("quantile level must lie in (0, 1)");
    const boost::math::chi_squared_distribution<double> chi(dof);
    return boost::math::quantile(boost::math::complement(chi, p));
}

double two_sided_normal_p(double z) { return std::erfc(std::abs(z) / std::numbers::sqrt2); }

}  // namespace gei
