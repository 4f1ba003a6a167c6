#pragma once

// Circular ranks and Cramér-von Mises statistics of Möbius-transformed lagged copula processes.

#include <cstddef>
#include <span>
#include <vector>

#include "gei/lags.hpp"
#include "gei/panel.hpp"

namespace gei {

/// Ranks R_{j,t} in {1..n}, extended circularly: R_{j,t+n} = R_{j,t}.
class CircularRankMatrix {
public:
    CircularRankMatrix() = default;
    CircularRankMatrix(std::size_t n, std::size_t d, std::vector<int> ranks);

    std::size_t n() const noexcept { return n_; }
    std::size_t d() const noexcept { return d_; }
    /// Any integer t; 0-based, so t = 0 is the first observation.
    int rank(std::size_t j, long t) const noexcept;
    std::span<const int> column(std::size_t j) const noexcept { return {ranks_.data() + j * n_, n_}; }

private:
    std::size_t n_ = 0;
    std::size_t d_ = 0;
    std::vector<int> ranks_;
};

/// Ranks each column; ties go to the earlier time index.
CircularRankMatrix circular_ranks(const Matrix& errors);
std::vector<int> ranks_with_time_ties(std::span<const double> column);

/// Largest n accepted by cvm_statistic (the double sum is O(n^2 |A|)).
inline constexpr std::size_t kMaxCvmSampleSize = 5000;

/// S_{n,A,l}: closed-form double sum over circular ranks. Throws InvalidArgument for a
/// bad subset or lag, SizeGuardError when n > kMaxCvmSampleSize.
double cvm_statistic(const CircularRankMatrix& ranks, const Subset& subset, const LagVector& lag);

struct OracleOptions {
    /// 0 selects exact integration on the rank grid {k/(n+1)}; otherwise a midpoint
    /// rule with this many cells per coordinate.
    std::size_t grid_resolution = 0;
};

inline constexpr std::size_t kMaxOracleSampleSize = 50;

/// Integral of the squared Möbius copula process over [0,1]^|A|, evaluated by brute force.
double cvm_oracle(const CircularRankMatrix& ranks, const Subset& subset, const LagVector& lag,
                  OracleOptions options = {});

}  // namespace gei
