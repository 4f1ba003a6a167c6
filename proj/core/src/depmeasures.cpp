#include "gei/depmeasures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "gei/errors.hpp"

namespace gei {
namespace {

const boost::math::normal_distribution<double> kStdNormal{};

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

void check_term(std::size_t d, const Subset& subset, const LagVector& lag) {
    if (subset.size() < 2) throw InvalidArgument("a subset must contain at least two series");
    for (int j : subset) {
        if (j < 0 || static_cast<std::size_t>(j) >= d) throw InvalidArgument("subset index out of range");
    }
    if (lag.size() != d) throw InvalidArgument("lag vector length must equal the number of series");
}

}  // namespace

std::string_view to_string(ScoreKind kind) noexcept {
    switch (kind) {
        case ScoreKind::spearman: return "spearman";
        case ScoreKind::vdw: return "vdw";
        case ScoreKind::savage: return "savage";
        case ScoreKind::savage_classical: return "savage_classical";
    }
    return "unknown";
}

ScoreKind score_kind_from_string(std::string_view name) {
    for (ScoreKind k : {ScoreKind::spearman, ScoreKind::vdw, ScoreKind::savage, ScoreKind::savage_classical}) {
        if (to_string(k) == name) return k;
    }
    throw InvalidArgument("unknown score family '" + std::string(name) + "'");
}

double ScoreFamily::quantile(double u) const {
    switch (kind) {
        case ScoreKind::spearman: return u;
        case ScoreKind::vdw:
            if (u <= 0.0) return -INFINITY;
            if (u >= 1.0) return INFINITY;
            return boost::math::quantile(kStdNormal, u);
        case ScoreKind::savage: return std::log(u);
        case ScoreKind::savage_classical: return std::log1p(-u);
    }
    return 0.0;
}

double ScoreFamily::integral(double u) const {
    u = std::clamp(u, 0.0, 1.0);
    switch (kind) {
        case ScoreKind::spearman: return 0.5 * u * u;
        case ScoreKind::vdw:
            if (u <= 0.0 || u >= 1.0) return 0.0;
            return -boost::math::pdf(kStdNormal, boost::math::quantile(kStdNormal, u));
        case ScoreKind::savage: return xlogx(u) - u;
        case ScoreKind::savage_classical: return -xlogx(1.0 - u) - u;
    }
    return 0.0;
}

double ScoreFamily::mean() const noexcept {
    switch (kind) {
        case ScoreKind::spearman: return 0.5;
        case ScoreKind::vdw: return 0.0;
        case ScoreKind::savage:
        case ScoreKind::savage_classical: return -1.0;
    }
    return 0.0;
}

double ScoreFamily::reference_variance() const noexcept {
    return kind == ScoreKind::spearman ? 1.0 / 12.0 : 1.0;
}

std::vector<double> empirical_scores(std::span<const double> column, const ScoreFamily& family) {
    const std::size_t n = column.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return column[a] < column[b]; });
    const double nd = static_cast<double>(n);
    std::vector<double> scores(n);
    std::size_t lo = 0;
    while (lo < n) {
        std::size_t hi = lo + 1;
        while (hi < n && column[order[hi]] == column[order[lo]]) ++hi;
        const double left = static_cast<double>(lo) / nd;
        const double right = static_cast<double>(hi) / nd;
        const double score = (family.integral(right) - family.integral(left)) / (right - left);
        for (std::size_t i = lo; i < hi; ++i) scores[order[i]] = score;
        lo = hi;
    }
    return scores;
}

StandardizedColumns::StandardizedColumns(const Matrix& values) {
    std::vector<double> centers(values.cols());
    for (std::size_t j = 0; j < values.cols(); ++j) {
        const auto c = values.col(j);
        centers[j] = std::accumulate(c.begin(), c.end(), 0.0) / static_cast<double>(c.size());
    }
    *this = StandardizedColumns(values, centers);
}

StandardizedColumns::StandardizedColumns(const Matrix& values, const std::vector<double>& centers)
    : z_(values.rows(), values.cols()) {
    if (centers.size() != values.cols()) throw InvalidArgument("one center per column is required");
    const double nd = static_cast<double>(values.rows());
    for (std::size_t j = 0; j < values.cols(); ++j) {
        double ss = 0.0;
        for (std::size_t t = 0; t < values.rows(); ++t) {
            z_(t, j) = values(t, j) - centers[j];
            ss += z_(t, j) * z_(t, j);
        }
        const double s = std::sqrt(ss / nd);
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw DataError("column " + std::to_string(j + 1) + " has zero variance");
        }
        for (double& v : z_.col(j)) v /= s;
    }
}

StandardizedColumns::StandardizedColumns(const Matrix& values, const std::vector<double>& centers,
                                         const std::vector<double>& scales)
    : z_(values.rows(), values.cols()) {
    if (centers.size() != values.cols() || scales.size() != values.cols()) {
        throw InvalidArgument("one center and one scale per column are required");
    }
    for (std::size_t j = 0; j < values.cols(); ++j) {
        if (!(scales[j] > 0.0)) throw InvalidArgument("scales must be positive");
        for (std::size_t t = 0; t < values.rows(); ++t) z_(t, j) = (values(t, j) - centers[j]) / scales[j];
    }
}

double StandardizedColumns::product_moment(const Subset& subset, const LagVector& lag) const {
    check_term(d(), subset, lag);
    const std::size_t n = z_.rows();
    std::vector<double> prod(n, 1.0);
    for (int j : subset) {
        const auto col = z_.col(static_cast<std::size_t>(j));
        const long nl = static_cast<long>(n);
        std::size_t shift = static_cast<std::size_t>(((lag[j] % nl) + nl) % nl);
        for (std::size_t t = 0; t < n; ++t) {
            std::size_t s = t + shift;
            if (s >= n) s -= n;
            prod[t] *= col[s];
        }
    }
    return std::accumulate(prod.begin(), prod.end(), 0.0) / static_cast<double>(n);
}

double generalized_cross_correlation(const Matrix& errors, const Subset& subset, const LagVector& lag) {
    return StandardizedColumns(errors).product_moment(subset, lag);
}

namespace {

Matrix score_matrix(const Matrix& errors, const ScoreFamily& family) {
    Matrix scores(errors.rows(), errors.cols());
    for (std::size_t j = 0; j < errors.cols(); ++j) {
        const auto s = empirical_scores(errors.col(j), family);
        std::copy(s.begin(), s.end(), scores.col(j).begin());
    }
    return scores;
}

}  // namespace

StandardizedColumns standardized_scores(const Matrix& errors, const ScoreFamily& family) {
    return StandardizedColumns(score_matrix(errors, family), std::vector<double>(errors.cols(), family.mean()));
}

double dependence_coefficient(const Matrix& errors, const Subset& subset, const LagVector& lag,
                              const ScoreFamily& family) {
    return standardized_scores(errors, family).product_moment(subset, lag);
}

}  // namespace gei

namespace gei {

double reference_dependence_coefficient(const Matrix& errors, const Subset& subset, const LagVector& lag,
                                        const ScoreFamily& family) {
    const std::size_t d = errors.cols();
    return StandardizedColumns(score_matrix(errors, family), std::vector<double>(d, family.mean()),
                               std::vector<double>(d, std::sqrt(family.reference_variance())))
        .product_moment(subset, lag);
}

}  // namespace gei
