#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/interpolators/pchip.hpp>

#include "gei/asymptotics.hpp"
#include "gei/errors.hpp"

namespace gei {
namespace {

constexpr double kPi = std::numbers::pi;
// Imhof is used until its value drops below this; the asymptote takes over beyond.
constexpr double kSwitchProbability = 1e-6;
// Series expansion for atan/log1p once lambda*u is this small.
constexpr double kSmallArgument = 1e-3;
constexpr int kTableIntervals = 1024;

}  // namespace

XiDistribution::XiDistribution(int d, int truncation) : d_(d), truncation_(truncation) {
    if (d != 2 && d != 3) throw InvalidArgument("xi_d is implemented for d = 2 and d = 3");
    if (truncation_ <= 0) truncation_ = d == 2 ? 50 : 20;

    // Multiplicity of each index product m among tuples in {1..I}^d.
    std::map<long, double> counts;
    const long top = truncation_;
    if (d == 2) {
        for (long a = 1; a <= top; ++a)
            for (long b = 1; b <= top; ++b) counts[a * b] += 1.0;
    } else {
        for (long a = 1; a <= top; ++a)
            for (long b = 1; b <= top; ++b)
                for (long c = 1; c <= top; ++c) counts[a * b * c] += 1.0;
    }
    const double scale = std::pow(kPi, -2.0 * d);
    double kept_mean = 0.0;
    double kept_sq = 0.0;
    for (const auto& [m, h] : counts) {
        const double lambda = scale / (static_cast<double>(m) * static_cast<double>(m));
        groups_.push_back({lambda, h});
        kept_mean += h * lambda;
        kept_sq += h * lambda * lambda;
    }
    const double rest_mean = mean() - kept_mean;
    const double rest_var = std::pow(90.0, -d) - kept_sq;
    if (rest_mean > 0.0 && rest_var > 0.0) {
        tail_scale_ = rest_var / rest_mean;
        tail_dof_ = rest_mean * rest_mean / rest_var;
    }

    // Asymptote P(xi > s) ~ C P(chi2_1 > s / lambda_1).
    const double l1 = groups_.front().lambda;
    double log_c = 0.0;
    for (std::size_t i = 1; i < groups_.size(); ++i) {
        log_c -= 0.5 * groups_[i].multiplicity * std::log1p(-groups_[i].lambda / l1);
    }
    if (tail_dof_ > 0.0) log_c -= 0.5 * tail_dof_ * std::log1p(-tail_scale_ / l1);
    asymptotic_constant_ = std::exp(log_c);

    // Imhof integrand: sin(theta0(u) - s u / 2) / (u rho(u)). theta0 has slope at most
    // mean/2, so a step resolving frequency (mean + s_max)/2 handles every s <= s_max.
    const double s_max = l1 * 60.0;
    step_ = 0.15 / (0.5 * (mean() + s_max));

    // Suffix sums of lambda^k so small-argument terms are added in bulk.
    const std::size_t g = groups_.size();
    std::vector<double> suf1(g + 1, 0.0), suf2(g + 1, 0.0), suf3(g + 1, 0.0);
    for (std::size_t i = g; i-- > 0;) {
        const double l = groups_[i].lambda;
        const double h = groups_[i].multiplicity;
        suf1[i] = suf1[i + 1] + h * l;
        suf2[i] = suf2[i + 1] + h * l * l;
        suf3[i] = suf3[i + 1] + h * l * l * l;
    }
    theta0_.push_back(0.0);
    amplitude_.push_back(0.0);  // replaced by the limit below
    for (std::size_t k = 1;; ++k) {
        const double u = step_ * static_cast<double>(k);
        double theta = 0.0;
        double log_rho = 0.0;
        std::size_t i = 0;
        for (; i < g && groups_[i].lambda * u > kSmallArgument; ++i) {
            const double x = groups_[i].lambda * u;
            theta += groups_[i].multiplicity * std::atan(x);
            log_rho += groups_[i].multiplicity * std::log1p(x * x);
        }
        theta += u * suf1[i] - u * u * u * suf3[i] / 3.0;
        log_rho += u * u * suf2[i];
        if (tail_dof_ > 0.0) {
            const double x = tail_scale_ * u;
            theta += tail_dof_ * std::atan(x);
            log_rho += tail_dof_ * std::log1p(x * x);
        }
        theta *= 0.5;
        log_rho *= 0.25;
        const double log_amp = -std::log(u) - log_rho;
        theta0_.push_back(theta);
        amplitude_.push_back(std::exp(log_amp));
        if (log_amp < -36.0 && k % 2 == 0) break;
    }

    // s at which Imhof reaches kSwitchProbability, found on the asymptote scale.
    double lo = mean();
    double hi = s_max;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (imhof(mid) > kSwitchProbability ? lo : hi) = mid;
    }
    switch_point_ = hi;

    std::vector<double> grid(kTableIntervals + 1);
    std::vector<double> log_p(kTableIntervals + 1);
    for (int k = 0; k <= kTableIntervals; ++k) {
        grid[k] = switch_point_ * k / kTableIntervals;
        log_p[k] = k == 0 ? 0.0 : std::log(std::clamp(imhof(grid[k]), 1e-300, 1.0));
    }
    log_tail_table_ = boost::math::interpolators::pchip<std::vector<double>>(std::move(grid), std::move(log_p));
}

const XiDistribution& XiDistribution::standard(int d) {
    if (d != 2 && d != 3) throw InvalidArgument("xi_d is implemented for d = 2 and d = 3");
    static std::once_flag flags[2];
    static std::unique_ptr<XiDistribution> cache[2];
    const int slot = d - 2;
    std::call_once(flags[slot], [&] { cache[slot] = std::make_unique<XiDistribution>(d); });
    return *cache[slot];
}

double XiDistribution::mean() const noexcept { return std::pow(6.0, -d_); }

double XiDistribution::variance() const noexcept { return 2.0 * std::pow(90.0, -d_); }

double XiDistribution::imhof(double s) const {
    // Composite Simpson over the precomputed grid; the u -> 0 limit is (sum lambda - s)/2.
    const std::size_t last = theta0_.size() - 1;
    auto f = [&](std::size_t k) {
        if (k == 0) return 0.5 * (mean() - s);
        const double u = step_ * static_cast<double>(k);
        return std::sin(theta0_[k] - 0.5 * s * u) * amplitude_[k];
    };
    double acc = f(0) + f(last);
    for (std::size_t k = 1; k < last; ++k) acc += (k % 2 == 1 ? 4.0 : 2.0) * f(k);
    const double integral = acc * step_ / 3.0;
    return 0.5 + integral / kPi;
}

double XiDistribution::asymptotic_tail(double s) const {
    const boost::math::chi_squared_distribution<double> chi1(1.0);
    return asymptotic_constant_ * boost::math::cdf(boost::math::complement(chi1, s / groups_.front().lambda));
}

double XiDistribution::tail_probability(double s) const {
    if (!(s >= 0.0)) throw InvalidArgument("xi tail probability needs s >= 0");
    if (s == 0.0) return 1.0;
    const double p = s < switch_point_ ? std::exp(log_tail_table_(s)) : asymptotic_tail(s);
    return std::clamp(p, 0.0, 1.0);
}

double XiDistribution::direct_tail_probability(double s) const {
    if (!(s >= 0.0)) throw InvalidArgument("xi tail probability needs s >= 0");
    if (s == 0.0) return 1.0;
    return std::clamp(s < switch_point_ ? imhof(s) : asymptotic_tail(s), 0.0, 1.0);
}

double XiDistribution::upper_quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("quantile level must lie in (0, 1)");
    double lo = 0.0;
    double hi = mean();
    while (tail_probability(hi) > p) hi *= 2.0;
    for (int it = 0; it < 100 && hi - lo > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (tail_probability(mid) > p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double xi_tail_probability(int d, double s) { return XiDistribution::standard(d).tail_probability(s); }

}  // namespace gei
