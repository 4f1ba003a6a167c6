#include "gei/mobius.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gei/errors.hpp"

namespace gei {
namespace {

void check_term(const CircularRankMatrix& ranks, const Subset& subset, const LagVector& lag) {
    if (subset.size() < 2) throw InvalidArgument("a subset must contain at least two series");
    if (subset.size() > 3) throw InvalidArgument("subsets larger than three series are not supported");
    for (std::size_t i = 0; i < subset.size(); ++i) {
        if (subset[i] < 0 || static_cast<std::size_t>(subset[i]) >= ranks.d()) {
            throw InvalidArgument("subset index " + std::to_string(subset[i] + 1) + " is out of range");
        }
        if (i > 0 && subset[i] <= subset[i - 1]) throw InvalidArgument("subset must be strictly increasing");
    }
    if (lag.size() != ranks.d()) throw InvalidArgument("lag vector length must equal the number of series");
}

// Ranks of series j read at t + l_j for t = 0..n-1.
std::vector<int> shifted(const CircularRankMatrix& ranks, int j, int l) {
    std::vector<int> out(ranks.n());
    for (std::size_t t = 0; t < ranks.n(); ++t) out[t] = ranks.rank(j, static_cast<long>(t) + l);
    return out;
}

}  // namespace

CircularRankMatrix::CircularRankMatrix(std::size_t n, std::size_t d, std::vector<int> ranks)
    : n_(n), d_(d), ranks_(std::move(ranks)) {
    if (ranks_.size() != n_ * d_) throw InvalidArgument("rank storage does not match n x d");
    std::vector<char> seen(n_ + 1);
    for (std::size_t j = 0; j < d_; ++j) {
        std::fill(seen.begin(), seen.end(), 0);
        for (std::size_t t = 0; t < n_; ++t) {
            const int r = ranks_[j * n_ + t];
            if (r < 1 || static_cast<std::size_t>(r) > n_ || seen[r]) {
                throw InvalidArgument("column " + std::to_string(j + 1) + " is not a permutation of 1..n");
            }
            seen[r] = 1;
        }
    }
}

int CircularRankMatrix::rank(std::size_t j, long t) const noexcept {
    const long n = static_cast<long>(n_);
    long r = t % n;
    if (r < 0) r += n;
    return ranks_[j * n_ + static_cast<std::size_t>(r)];
}

std::vector<int> ranks_with_time_ties(std::span<const double> column) {
    std::vector<std::size_t> order(column.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return column[a] < column[b]; });
    std::vector<int> ranks(column.size());
    for (std::size_t i = 0; i < order.size(); ++i) ranks[order[i]] = static_cast<int>(i + 1);
    return ranks;
}

CircularRankMatrix circular_ranks(const Matrix& errors) {
    if (errors.rows() < 2) throw InvalidArgument("ranks need n >= 2");
    std::vector<int> all;
    all.reserve(errors.rows() * errors.cols());
    for (std::size_t j = 0; j < errors.cols(); ++j) {
        const auto r = ranks_with_time_ties(errors.col(j));
        all.insert(all.end(), r.begin(), r.end());
    }
    return CircularRankMatrix(errors.rows(), errors.cols(), std::move(all));
}

double cvm_statistic(const CircularRankMatrix& ranks, const Subset& subset, const LagVector& lag) {
    check_term(ranks, subset, lag);
    const std::size_t n = ranks.n();
    if (n > kMaxCvmSampleSize) {
        throw SizeGuardError("cvm_statistic is limited to n <= " + std::to_string(kMaxCvmSampleSize));
    }
    const double nd = static_cast<double>(n);
    const double base = (2.0 * nd + 1.0) / (6.0 * nd);
    const double inv_np1 = 1.0 / (nd + 1.0);
    const double half_inv = 1.0 / (2.0 * nd * (nd + 1.0));

    // bracket(r, r') = base + a[r] + a[r'] - max(r, r') / (n + 1)
    std::vector<double> a(n + 1);
    for (std::size_t r = 0; r <= n; ++r) a[r] = static_cast<double>(r) * (static_cast<double>(r) - 1.0) * half_inv;

    const std::size_t k = subset.size();
    std::vector<std::vector<int>> cols;
    std::vector<std::vector<double>> acol;
    for (int j : subset) {
        cols.push_back(shifted(ranks, j, lag[j]));
        std::vector<double> av(n);
        for (std::size_t t = 0; t < n; ++t) av[t] = base + a[cols.back()[t]];
        acol.push_back(std::move(av));
    }

    // The summand is symmetric in (t, s): diagonal plus twice the strict upper triangle.
    double total = 0.0;
    std::vector<double> row(n);
    for (std::size_t t = 0; t < n; ++t) {
        double diag = 1.0;
        for (std::size_t i = 0; i < k; ++i) {
            diag *= 2.0 * acol[i][t] - base - static_cast<double>(cols[i][t]) * inv_np1;
        }
        const std::size_t len = n - t - 1;
        std::fill_n(row.begin(), len, 1.0);
        for (std::size_t i = 0; i < k; ++i) {
            const int rt = cols[i][t];
            const double at = acol[i][t] - base;
            const int* rs = cols[i].data() + t + 1;
            const double* as = acol[i].data() + t + 1;
            for (std::size_t s = 0; s < len; ++s) {
                row[s] *= at + as[s] - static_cast<double>(std::max(rt, rs[s])) * inv_np1;
            }
        }
        double off = 0.0;
        for (std::size_t s = 0; s < len; ++s) off += row[s];
        total += diag + 2.0 * off;
    }
    return total / nd;
}

double cvm_oracle(const CircularRankMatrix& ranks, const Subset& subset, const LagVector& lag, OracleOptions options) {
    check_term(ranks, subset, lag);
    const std::size_t n = ranks.n();
    if (n > kMaxOracleSampleSize) {
        throw SizeGuardError("cvm_oracle is limited to n <= " + std::to_string(kMaxOracleSampleSize));
    }
    const double nd = static_cast<double>(n);
    const std::size_t k = subset.size();

    std::vector<std::vector<int>> cols;
    for (int j : subset) cols.push_back(shifted(ranks, j, lag[j]));

    // Cells per coordinate: node u and weight (cell length).
    std::vector<double> nodes;
    std::vector<double> weights;
    if (options.grid_resolution == 0) {
        // C_n is constant on [i/(n+1), (i+1)/(n+1)) for i = 0..n.
        for (std::size_t i = 0; i <= n; ++i) {
            nodes.push_back((static_cast<double>(i) + 0.5) / (nd + 1.0));
            weights.push_back(1.0 / (nd + 1.0));
        }
    } else {
        const double h = 1.0 / static_cast<double>(options.grid_resolution);
        for (std::size_t i = 0; i < options.grid_resolution; ++i) {
            nodes.push_back((static_cast<double>(i) + 0.5) * h);
            weights.push_back(h);
        }
    }
    const std::size_t g = nodes.size();
    auto dn = [&](double u) { return std::min(nd, std::floor((nd + 1.0) * u)) / nd; };

    // ind[i][c][t] = 1{R <= (n+1) u_c} - D_n(u_c) for coordinate i of the subset.
    std::vector<std::vector<double>> centered(k, std::vector<double>(g * n));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t c = 0; c < g; ++c) {
            const double thr = (nd + 1.0) * nodes[c];
            const double dv = dn(nodes[c]);
            for (std::size_t t = 0; t < n; ++t) {
                centered[i][c * n + t] = (static_cast<double>(cols[i][t]) <= thr ? 1.0 : 0.0) - dv;
            }
        }
    }

    std::vector<std::size_t> idx(k, 0);
    double integral = 0.0;
    while (true) {
        double w = 1.0;
        for (std::size_t i = 0; i < k; ++i) w *= weights[idx[i]];
        double process = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            double p = 1.0;
            for (std::size_t i = 0; i < k; ++i) p *= centered[i][idx[i] * n + t];
            process += p;
        }
        integral += w * process * process / nd;

        std::size_t pos = 0;
        while (pos < k && ++idx[pos] == g) idx[pos++] = 0;
        if (pos == k) break;
    }
    return integral;
}

}  // namespace gei
