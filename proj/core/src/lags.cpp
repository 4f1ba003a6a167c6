#include "gei/lags.hpp"

#include <algorithm>
#include <string>

#include "gei/errors.hpp"

namespace gei {

SubsetLagFamily::SubsetLagFamily(int d, int pair_max_lag, int triple_max_lag, std::vector<SubsetLags> entries)
    : d_(d), m2_(pair_max_lag), m3_(triple_max_lag), entries_(std::move(entries)) {
    for (const auto& e : entries_) {
        if (e.subset.size() < 2) throw InvalidArgument("subsets must contain at least two series");
        if (!std::is_sorted(e.subset.begin(), e.subset.end()) ||
            std::adjacent_find(e.subset.begin(), e.subset.end()) != e.subset.end()) {
            throw InvalidArgument("subset indices must be strictly increasing");
        }
        if (e.subset.front() < 0 || e.subset.back() >= d_) throw InvalidArgument("subset index out of range");
        for (const auto& l : e.lags) {
            if (static_cast<int>(l.size()) != d_) throw InvalidArgument("lag vectors must have length d");
        }
    }
}

std::size_t SubsetLagFamily::term_count() const noexcept {
    std::size_t n = 0;
    for (const auto& e : entries_) n += e.lags.size();
    return n;
}

std::size_t SubsetLagFamily::pair_term_count() const noexcept {
    std::size_t n = 0;
    for (const auto& e : entries_) {
        if (e.subset.size() == 2) n += e.lags.size();
    }
    return n;
}

SubsetLagFamily build_subset_lag_family(int d, int pair_max_lag, int triple_max_lag, bool include_triples) {
    if (d < 2) throw InvalidArgument("at least two series are required");
    if (d > 3) {
        throw InvalidArgument("d = " + std::to_string(d) +
                              " is not supported: statistics are implemented for subsets of size 2 and 3");
    }
    if (pair_max_lag < 0 || triple_max_lag < 0) throw InvalidArgument("maximum lags must be non-negative");

    std::vector<SubsetLags> entries;
    for (int a = 0; a < d; ++a) {
        for (int b = a + 1; b < d; ++b) {
            SubsetLags e{{a, b}, {}};
            for (int l = -pair_max_lag; l <= pair_max_lag; ++l) {
                LagVector lag(d, 0);
                lag[b] = l;
                e.lags.push_back(std::move(lag));
            }
            entries.push_back(std::move(e));
        }
    }
    if (d == 3 && include_triples) {
        SubsetLags e{{0, 1, 2}, {}};
        for (int l1 = -triple_max_lag; l1 <= triple_max_lag; ++l1) {
            for (int l2 = -triple_max_lag; l2 <= triple_max_lag; ++l2) {
                e.lags.push_back({0, l1, l2});
            }
        }
        entries.push_back(std::move(e));
    }
    return SubsetLagFamily(d, pair_max_lag, triple_max_lag, std::move(entries));
}

bool lag_equivalent(const Subset& subset, const LagVector& a, const LagVector& b) {
    const int shift = a[subset.front()] - b[subset.front()];
    return std::all_of(subset.begin(), subset.end(), [&](int j) { return a[j] - b[j] == shift; });
}

LagVector canonical_lag(const Subset& subset, const LagVector& lag) {
    LagVector out(lag.size(), 0);
    const int anchor = lag[subset.front()];
    for (int j : subset) out[j] = lag[j] - anchor;
    return out;
}

SubsetLagFamily canonicalize(const SubsetLagFamily& family) {
    std::vector<SubsetLags> entries;
    for (const auto& e : family.entries()) {
        SubsetLags c{e.subset, {}};
        for (const auto& l : e.lags) {
            LagVector r = canonical_lag(e.subset, l);
            if (std::find(c.lags.begin(), c.lags.end(), r) == c.lags.end()) c.lags.push_back(std::move(r));
        }
        std::sort(c.lags.begin(), c.lags.end());
        entries.push_back(std::move(c));
    }
    std::sort(entries.begin(), entries.end(), [](const SubsetLags& x, const SubsetLags& y) {
        if (x.subset.size() != y.subset.size()) return x.subset.size() < y.subset.size();
        return x.subset < y.subset;
    });
    return SubsetLagFamily(family.d(), family.pair_max_lag(), family.triple_max_lag(), std::move(entries));
}

}  // namespace gei
