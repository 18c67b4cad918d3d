#include "idc/demand_profile.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <set>

#include "idc/errors.hpp"

namespace idc {

DemandProfile::DemandProfile(std::vector<std::uint64_t> entries) : entries_(std::move(entries)) {
    for (auto e : entries_)
        if (e == 0) throw InvalidParameter("DemandProfile: entries must be positive");
}

DemandProfile DemandProfile::parse(const std::string& text) {
    std::vector<std::uint64_t> entries;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        std::uint64_t value = 0;
        auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + comma, value);
        if (ec != std::errc() || ptr != text.data() + comma)
            throw InvalidParameter("DemandProfile::parse: bad entry in '" + text + "'");
        entries.push_back(value);
        pos = comma + 1;
    }
    if (entries.empty()) throw InvalidParameter("DemandProfile::parse: empty profile text");
    return DemandProfile(std::move(entries));
}

std::string DemandProfile::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(entries_[i]);
    }
    return out;
}

std::uint64_t DemandProfile::l1_norm() const {
    std::uint64_t sum = 0;
    for (auto e : entries_) {
        if (__builtin_add_overflow(sum, e, &sum))
            throw InvalidParameter("DemandProfile::l1_norm: overflow");
    }
    return sum;
}

std::uint64_t DemandProfile::l2_norm_sq() const {
    std::uint64_t sum = 0;
    for (auto e : entries_) {
        std::uint64_t sq = 0;
        if (__builtin_mul_overflow(e, e, &sq) || __builtin_add_overflow(sum, sq, &sum))
            throw InvalidParameter("DemandProfile::l2_norm_sq: overflow");
    }
    return sum;
}

std::uint64_t DemandProfile::max_entry() const {
    if (entries_.empty()) return 0;
    return *std::max_element(entries_.begin(), entries_.end());
}

DemandProfile round_profile(const DemandProfile& profile) {
    if (profile.size() < 2)
        throw InvalidParameter("round_profile: needs a non-trivial profile (n >= 2)");
    std::vector<std::uint64_t> rounded;
    rounded.reserve(profile.size());
    for (auto e : profile.entries()) rounded.push_back(std::bit_floor(e));

    auto max_it = std::max_element(rounded.begin(), rounded.end());
    std::uint64_t max_value = *max_it;
    if (std::count(rounded.begin(), rounded.end(), max_value) == 1) {
        std::uint64_t second = 0;
        for (auto e : rounded)
            if (e != max_value) second = std::max(second, e);
        *max_it = second;
    }
    return DemandProfile(std::move(rounded));
}

bool is_rounded(const DemandProfile& profile) {
    if (profile.size() < 2) return false;
    std::uint64_t max_value = 0;
    for (auto e : profile.entries()) {
        if (!std::has_single_bit(e)) return false;
        max_value = std::max(max_value, e);
    }
    return std::count(profile.entries().begin(), profile.entries().end(), max_value) >= 2;
}

RankDistribution rank_distribution(const DemandProfile& rounded) {
    if (!is_rounded(rounded))
        throw InvalidParameter("rank_distribution: profile is not rounded");
    std::uint64_t k = std::bit_width(rounded.max_entry());
    RankDistribution dist;
    dist.counts.assign(static_cast<std::size_t>(k), 0);
    for (auto e : rounded.entries()) dist.counts[static_cast<std::size_t>(std::bit_width(e)) - 1]++;
    return dist;
}

DemandProfile sample_composition(std::uint64_t n, std::uint64_t d, Xoshiro256ss& rng) {
    if (n < 2 || n > d) throw InvalidParameter("sample_composition: need 2 <= n <= d");
    // Stars and bars: sort n-1 distinct cut points drawn from [1, d-1].
    // The distinct subset comes from Robert Floyd's sampling algorithm.
    std::set<std::uint64_t> cuts;
    for (std::uint64_t alt = d - n + 1; alt <= d - 1; ++alt) {
        std::uint64_t candidate = 1 + rng.uniform(alt);
        if (!cuts.insert(candidate).second) cuts.insert(alt);
    }
    std::vector<std::uint64_t> parts;
    parts.reserve(static_cast<std::size_t>(n));
    std::uint64_t prev = 0;
    for (auto cut : cuts) {
        parts.push_back(cut - prev);
        prev = cut;
    }
    parts.push_back(d - prev);
    return DemandProfile(std::move(parts));
}

DemandProfile sample_phi(std::uint64_t m, Xoshiro256ss& rng) {
    if (m < 4) throw InvalidParameter("sample_phi: need m >= 4");
    std::uint64_t k = (static_cast<std::uint64_t>(std::bit_width(m)) - 1) / 2;
    // Weight of (2^i, 2^j) is 2^(-max(i,j)); scale by 2^k to draw with
    // integer weights and an exact normalization.
    std::uint64_t total = 0;
    for (std::uint64_t i = 0; i <= k; ++i)
        for (std::uint64_t j = 0; j <= k; ++j) total += 1ULL << (k - std::max(i, j));
    std::uint64_t u = rng.uniform(total);
    for (std::uint64_t i = 0; i <= k; ++i) {
        for (std::uint64_t j = 0; j <= k; ++j) {
            std::uint64_t w = 1ULL << (k - std::max(i, j));
            if (u < w) return DemandProfile({1ULL << i, 1ULL << j});
            u -= w;
        }
    }
    throw std::logic_error("sample_phi: unreachable");
}

bool epsilon_good(const DemandProfile& profile, const Rational& eps) {
    if (eps <= 0 || eps > Rational(1, 2))
        throw InvalidParameter("epsilon_good: need 0 < eps <= 1/2");
    const BigInt num = eps.get_num();
    const BigInt den = eps.get_den();
    const BigInt n(static_cast<unsigned long>(profile.size()));
    const BigInt d(static_cast<unsigned long>(profile.l1_norm()));
    BigInt exceed_count(0);
    for (auto e : profile.entries()) {
        // e > eps*d/n  <=>  e*n*den > num*d
        if (BigInt(static_cast<unsigned long>(e)) * n * den > num * d) ++exceed_count;
    }
    // exceed_count >= eps*n  <=>  exceed_count*den >= num*n
    return exceed_count * den >= num * n;
}

namespace {

struct BadFractionCounter {
    std::uint64_t exceed_threshold;  // entry is "large" iff entry >= this
    std::uint64_t min_good_count;    // profile is good iff #large >= this
    std::uint64_t total = 0;
    std::uint64_t bad = 0;

    void walk(std::uint64_t remaining, std::uint64_t parts_left, std::uint64_t exceed_count) {
        if (parts_left == 1) {
            if (remaining >= exceed_threshold) ++exceed_count;
            ++total;
            if (exceed_count < min_good_count) ++bad;
            return;
        }
        for (std::uint64_t v = 1; v + (parts_left - 1) <= remaining; ++v)
            walk(remaining - v, parts_left - 1, exceed_count + (v >= exceed_threshold ? 1 : 0));
    }
};

}  // namespace

Rational epsilon_bad_fraction(std::uint64_t n, std::uint64_t d, const Rational& eps) {
    if (eps <= 0 || eps > Rational(1, 2))
        throw InvalidParameter("epsilon_bad_fraction: need 0 < eps <= 1/2");
    if (n < 2 || n > d) throw InvalidParameter("epsilon_bad_fraction: need 2 <= n <= d");
    if (n > 12 || d > 40)
        throw BudgetExceeded("epsilon_bad_fraction: enumeration budget is n <= 12, d <= 40");

    const BigInt num = eps.get_num();
    const BigInt den = eps.get_den();
    BadFractionCounter counter;
    // v > eps*d/n  <=>  v >= floor(num*d / (n*den)) + 1
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), BigInt(num * static_cast<unsigned long>(d)).get_mpz_t(),
               BigInt(den * static_cast<unsigned long>(n)).get_mpz_t());
    counter.exceed_threshold = q.get_ui() + 1;
    // count >= eps*n  <=>  count >= ceil(num*n / den)
    mpz_cdiv_q(q.get_mpz_t(), BigInt(num * static_cast<unsigned long>(n)).get_mpz_t(),
               den.get_mpz_t());
    counter.min_good_count = q.get_ui();

    counter.walk(d, n, 0);
    return make_rational(BigInt(static_cast<unsigned long>(counter.bad)),
                         BigInt(static_cast<unsigned long>(counter.total)));
}

const Rational& default_epsilon() {
    static const Rational eps(7, 20);
    return eps;
}

}  // namespace idc
