#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "idc/rational.hpp"
#include "idc/rng.hpp"

namespace idc {

// A demand profile (d_1, ..., d_n): positive per-instance request counts.
// The empty profile is allowed (a game stopped before any request).
class DemandProfile {
  public:
    DemandProfile() = default;
    explicit DemandProfile(std::vector<std::uint64_t> entries);

    // Comma-separated positive integers, e.g. "9,5,4,42".
    static DemandProfile parse(const std::string& text);
    std::string to_string() const;

    const std::vector<std::uint64_t>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool trivial() const { return entries_.size() < 2; }

    std::uint64_t l1_norm() const;
    std::uint64_t l2_norm_sq() const;
    std::uint64_t max_entry() const;

    bool operator==(const DemandProfile&) const = default;

  private:
    std::vector<std::uint64_t> entries_;
};

// Rounds every entry down to a power of two, then reduces a unique largest
// entry to the second largest. Requires n >= 2.
DemandProfile round_profile(const DemandProfile& profile);

// True iff all entries are powers of two and no entry is a unique maximum.
bool is_rounded(const DemandProfile& profile);

// counts[i] = multiplicity of 2^i in a rounded profile; the last entry is
// the multiplicity of the largest value present.
struct RankDistribution {
    std::vector<std::uint64_t> counts;
    bool operator==(const RankDistribution&) const = default;
};

RankDistribution rank_distribution(const DemandProfile& rounded);

// Uniform draw from the C(d-1, n-1) compositions of d into n positive parts.
DemandProfile sample_composition(std::uint64_t n, std::uint64_t d, Xoshiro256ss& rng);

// Draws (2^i, 2^j), 0 <= i,j <= floor(log2(m))/2, with probability
// proportional to 2^(-max(i,j)). Requires m >= 4.
DemandProfile sample_phi(std::uint64_t m, Xoshiro256ss& rng);

// True iff at least eps*n entries of the profile exceed eps*d/n,
// where d is the profile's L1 norm. Requires 0 < eps <= 1/2.
bool epsilon_good(const DemandProfile& profile, const Rational& eps);

// Exact fraction of eps-bad profiles among all compositions of d into n
// positive parts, by exhaustive enumeration. Budget: n <= 12, d <= 40.
Rational epsilon_bad_fraction(std::uint64_t n, std::uint64_t d, const Rational& eps);

// Tooling default for eps-goodness scans. 1/4 fails its own validating
// property (the bad fraction is not non-increasing in n at d=32), so the
// default sits in the window where the property holds.
const Rational& default_epsilon();

}  // namespace idc
