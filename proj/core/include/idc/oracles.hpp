#pragma once

#include <cstdint>
#include <span>

#include "idc/demand_profile.hpp"
#include "idc/generators.hpp"
#include "idc/rational.hpp"

namespace idc {

// Exact collision probabilities, as arbitrary-precision rationals. These are
// the ground truth the Monte-Carlo estimator is checked against, and the
// p_* references used in competitive-ratio experiments.

inline constexpr std::uint64_t kEnumerationBudget = 10'000'000;

// Probability that two CLUSTER instances with demands d_i, d_j collide:
// (d_i + d_j - 1) / m. Requires d_i + d_j - 1 <= m.
Rational cluster_pairwise(std::uint64_t d_i, std::uint64_t d_j, std::uint64_t m);

// Exact CLUSTER collision probability by enumerating all m^n start tuples
// and testing arc overlap. Budget: m^n <= 10^7.
Rational cluster_exact(const DemandProfile& profile, std::uint64_t m);

// Probability that n independent uniform subsets of sizes b_1..b_n from a
// universe of `universe` elements are NOT pairwise disjoint. Returns 1 when
// the sizes sum past the universe.
Rational disjoint_subsets_exact(std::uint64_t universe, std::span<const std::uint64_t> sizes);

// RANDOM: the first d_i IDs of an instance form a uniform d_i-subset.
Rational random_exact(const DemandProfile& profile, std::uint64_t m);

// BINS(k): collision iff two instances select a common bin. Returns 1 when
// some demand runs past the binned region into the shared leftover tail.
Rational bins_exact(const DemandProfile& profile, std::uint64_t k, std::uint64_t m);

// Optimal collision probability for the uniform profile (h, ..., h) with n
// entries; BINS(h) attains it.
Rational p_star_uniform(std::uint64_t n, std::uint64_t h, std::uint64_t m);

// Collision probability of the two-demand construction for the profile
// (i, j): BINS(i) on a reduced universe plus j-i hard-wired IDs. Equals
// 1 / floor((m - j + i) / i). Requires 1 <= i <= j <= m/2.
Rational p_star_two_construction(std::uint64_t i, std::uint64_t j, std::uint64_t m);

// Probability that n balls thrown into bins with probabilities p land in
// distinct bins: n! * e_n(p_1, ..., p_l). Requires sum(p) = 1, n <= l <= 10.
Rational balls_success_prob(std::span<const Rational> p, std::uint64_t n);

// BINS*: collision iff two instances allocate the same bin; chunks are
// independent, so the no-collision probability is a product of per-chunk
// birthday terms. Requires every entry <= geometry.capacity().
Rational bins_star_exact(const DemandProfile& profile, const ChunkGeometry& geometry);

// Independent oracle: exact collision probability by weighted enumeration of
// every internal random choice of every instance, materializing emitted ID
// sets. Shares no code with the closed forms above or with Generator.
// Budget: 10^7 enumeration nodes.
Rational brute_force_collision(const AlgorithmKind& kind, const DemandProfile& profile,
                               std::uint64_t m);

}  // namespace idc
