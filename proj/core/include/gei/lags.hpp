#pragma once

#include <cstddef>
#include <vector>

namespace gei {

using Subset = std::vector<int>;   ///< sorted 0-based series indices, |A| >= 2
using LagVector = std::vector<int>;  ///< one shift per series, length d

/// Lag vectors of one subset A, one representative per equivalence class.
struct SubsetLags {
    Subset subset;
    std::vector<LagVector> lags;

    bool operator==(const SubsetLags&) const = default;
};

/// The collection {(A, D_A)} over which statistics are computed and combined.
class SubsetLagFamily {
public:
    SubsetLagFamily() = default;
    SubsetLagFamily(int d, int pair_max_lag, int triple_max_lag, std::vector<SubsetLags> entries);

    int d() const noexcept { return d_; }
    int pair_max_lag() const noexcept { return m2_; }
    int triple_max_lag() const noexcept { return m3_; }
    const std::vector<SubsetLags>& entries() const noexcept { return entries_; }

    /// Sum over A of |D_A|.
    std::size_t term_count() const noexcept;
    /// Sum over A with |A| = 2 of |D_A|.
    std::size_t pair_term_count() const noexcept;

    bool operator==(const SubsetLagFamily&) const = default;

private:
    int d_ = 0;
    int m2_ = 0;
    int m3_ = 0;
    std::vector<SubsetLags> entries_;
};

/// Pairs use lags -M2..M2 on the larger index; triples use (-M3..M3)^2 on the two
/// non-anchored indices. The smallest index of A is anchored at lag 0.
/// Throws InvalidArgument for d < 2, d > 3 or negative maximum lags.
SubsetLagFamily build_subset_lag_family(int d, int pair_max_lag, int triple_max_lag, bool include_triples = true);

/// l ~_A l' iff l_j - l'_j is constant over j in A.
bool lag_equivalent(const Subset& subset, const LagVector& a, const LagVector& b);

/// Representative of the class of `lag`: zero outside A, zero at min(A).
LagVector canonical_lag(const Subset& subset, const LagVector& lag);

/// Canonicalizes every lag, drops duplicates and sorts; idempotent.
SubsetLagFamily canonicalize(const SubsetLagFamily& family);

}  // namespace gei
