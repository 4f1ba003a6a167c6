#pragma once

// Null laws: the weighted chi-square limit xi_d, chi-square and normal tails, the
// finite-sample bias of S, cumulants of xi_d and the Edgeworth tail used for W.

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "gei/lags.hpp"

namespace gei {

/// xi_d = sum over (i_1..i_d) of Z^2 / (pi^{2d} (i_1 ... i_d)^2), i.i.d. standard normal Z.
///
/// Eigenvalues with every index <= truncation are kept exactly (grouped by the product
/// of indices); the remainder is represented by c * chi2(nu) with the same mean and
/// variance as the omitted terms. Tail probabilities come from Imhof's inversion formula
/// and, once they fall below 1e-6, from the leading-eigenvalue asymptote.
class XiDistribution {
public:
    struct Group {
        double lambda;
        double multiplicity;
    };

    /// d in {2, 3}; truncation 0 selects 50 for d = 2 and 20 for d = 3.
    explicit XiDistribution(int d, int truncation = 0);

    /// Shared, lazily built instance for the default truncation. Thread-safe.
    static const XiDistribution& standard(int d);

    int d() const noexcept { return d_; }
    int truncation() const noexcept { return truncation_; }
    const std::vector<Group>& groups() const noexcept { return groups_; }
    double remainder_scale() const noexcept { return tail_scale_; }
    double remainder_dof() const noexcept { return tail_dof_; }

    /// 6^{-d}; equal to the sum of all eigenvalues including the remainder.
    double mean() const noexcept;
    /// 2 * 90^{-d}.
    double variance() const noexcept;

    /// P(xi_d > s). Throws InvalidArgument for s < 0 or NaN.
    double tail_probability(double s) const;
    /// Same, evaluating the inversion integral directly instead of the table.
    double direct_tail_probability(double s) const;
    /// The s with P(xi_d > s) = p, for p in (0, 1).
    double upper_quantile(double p) const;

private:
    double imhof(double s) const;
    double asymptotic_tail(double s) const;

    int d_;
    int truncation_;
    std::vector<Group> groups_;  // descending lambda
    double tail_scale_ = 0.0;
    double tail_dof_ = 0.0;
    double switch_point_ = 0.0;  // s beyond which the asymptote is used
    double asymptotic_constant_ = 1.0;
    // Imhof integrand pieces on a uniform u grid; independent of s.
    double step_ = 0.0;
    std::vector<double> theta0_;
    std::vector<double> amplitude_;  // 1 / (u rho(u))
    std::function<double(double)> log_tail_table_;
};

/// P(xi_d > s) with the shared instance.
double xi_tail_probability(int d, double s);

/// B(n,d) = ((n-1)/(6n))^d - 6^{-d} + (n-1)(-1/(6n))^d, so that E S_{n,A,l} = B(n,|A|) + 6^{-|A|}
/// under independence.
double bias_term(std::size_t n, int d);

/// kappa_r(xi_d) = 2^{r-1} (r-1)! zeta(2r)^d / pi^{2rd}, for r = 1..6.
std::array<double, 6> xi_cumulants(int d);

/// Weight pi^{2(|A|-2)} of subset cardinality k in W.
double w_weight(int cardinality);

/// Cumulants of sum_A w_A sum_l xi_{|A|} over a family (optionally pairs only).
std::array<double, 6> w_limit_cumulants(const SubsetLagFamily& family, bool pairs_only = false);

/// Upper tail P(X > x) of the six-cumulant Edgeworth expansion around N(k1, k2),
/// clipped to [0, 1].
double edgeworth_tail(double x, const std::array<double, 6>& cumulants);

/// P(chi2(dof) > x).
double chi_square_tail(double x, double dof);
/// Upper quantile of chi2(dof): the x with P(chi2 > x) = p.
double chi_square_upper_quantile(double p, double dof);
/// 2 * (1 - Phi(|z|)).
double two_sided_normal_p(double z);

}  // namespace gei
