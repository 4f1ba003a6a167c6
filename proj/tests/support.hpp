#pragma once

// Test-only oracles and statistical helpers.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "gei/laws.hpp"
#include "gei/panel.hpp"
#include "gei/rng.hpp"

namespace gei::testing {

/// Two-sided one-sample KS distance to Uniform(0,1).
inline double ks_uniform_distance(std::vector<double> x) {
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        d = std::max({d, (i + 1) / n - x[i], x[i] - i / n});
    }
    return d;
}

/// Asymptotic Kolmogorov p-value P(K > sqrt(n) D) with the small-sample correction
/// sqrt(n) + 0.12 + 0.11/sqrt(n).
inline double ks_p_value(double distance, std::size_t n) {
    const double sn = std::sqrt(static_cast<double>(n));
    const double lambda = (sn + 0.12 + 0.11 / sn) * distance;
    if (lambda < 0.2) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
        sum += term;
        if (std::fabs(term) < 1e-16) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

inline double ks_uniform_p(const std::vector<double>& x) { return ks_p_value(ks_uniform_distance(x), x.size()); }

/// Draws of xi_d with eigenvalues grouped by the index product m = i_1 ... i_d: the
/// eigenvalue 1/(pi^{2d} m^2) carries multiplicity tau_d(m) (ordered factorizations),
/// so each group is lambda_m * chi2(tau_d(m)). Groups beyond max_product are replaced
/// by their mean, which changes the variance by less than 1e-9.
class XiMonteCarlo {
public:
    XiMonteCarlo(int d, int max_product = 300) : d_(d) {
        std::vector<double> count(max_product + 1, 0.0);
        for (int m = 1; m <= max_product; ++m) count[m] = 1.0;
        for (int k = 2; k <= d; ++k) {
            std::vector<double> next(max_product + 1, 0.0);
            for (int a = 1; a <= max_product; ++a)
                for (int b = 1; a * b <= max_product; ++b) next[a * b] += count[a];
            count = next;
        }
        const double scale = std::pow(M_PI, -2.0 * d);
        double kept = 0.0;
        for (int m = 1; m <= max_product; ++m) {
            const double lambda = scale / (static_cast<double>(m) * m);
            lambda_.push_back(lambda);
            shape_.push_back(count[m] / 2.0);
            kept += lambda * count[m];
        }
        remainder_mean_ = std::pow(6.0, -d) - kept;
    }

    std::vector<double> sample(std::size_t draws, std::uint64_t seed) const {
        std::mt19937_64 engine(seed);
        std::vector<std::gamma_distribution<double>> gammas;
        for (double s : shape_) gammas.emplace_back(s, 1.0);
        std::vector<double> out(draws);
        for (auto& x : out) {
            double s = remainder_mean_;
            for (std::size_t m = 0; m < lambda_.size(); ++m) s += 2.0 * lambda_[m] * gammas[m](engine);
            x = s;
        }
        return out;
    }

private:
    int d_;
    std::vector<double> lambda_;
    std::vector<double> shape_;
    double remainder_mean_ = 0.0;
};

/// Each column of `m` permuted independently.
inline Matrix permute_columns(const Matrix& m, std::mt19937_64& engine) {
    Matrix out = m;
    for (std::size_t j = 0; j < out.cols(); ++j) {
        auto c = out.col(j);
        std::shuffle(c.begin(), c.end(), engine);
    }
    return out;
}

/// n x d matrix of i.i.d. uniforms.
inline Matrix uniform_matrix(std::size_t n, std::size_t d, Rng& rng) {
    Matrix m(n, d);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t t = 0; t < n; ++t) m(t, j) = rng.uniform();
    return m;
}

inline double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double variance_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

/// Markov chain on {0, 1} with P(X_t = X_{t-1}) = p and X_0 = 1, with its one-step laws.
struct BernoulliChain {
    std::vector<double> values;
    std::vector<ConditionalLaw> laws;
};

inline BernoulliChain simulate_bernoulli_chain(std::size_t n, double p, Rng& rng) {
    BernoulliChain out;
    double previous = 1.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double p0 = previous == 0.0 ? p : 1.0 - p;  // P(X_t = 0 | X_{t-1})
        const double x = rng.uniform() < p0 ? 0.0 : 1.0;
        out.laws.push_back(DiscreteLaw{{0.0, 1.0}, {p0, 1.0 - p0}});
        out.values.push_back(x);
        previous = x;
    }
    return out;
}

}  // namespace gei::testing
