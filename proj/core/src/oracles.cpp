#include "idc/oracles.hpp"

#include <algorithm>
#include <bit>
#include <unordered_set>

#include "idc/errors.hpp"

namespace idc {

Rational cluster_pairwise(std::uint64_t d_i, std::uint64_t d_j, std::uint64_t m) {
    if (m == 0 || d_i == 0 || d_j == 0) throw InvalidParameter("cluster_pairwise: positive arguments required");
    if (d_i > m || d_j > m || d_i + d_j - 1 > m)
        throw InvalidParameter("cluster_pairwise: d_i + d_j - 1 exceeds m (probability clamps to 1)");
    return make_rational(BigInt(static_cast<unsigned long>(d_i + d_j - 1)),
                         BigInt(static_cast<unsigned long>(m)));
}

namespace {

bool arcs_overlap(std::uint64_t a, std::uint64_t la, std::uint64_t b, std::uint64_t lb,
                  std::uint64_t m) {
    return (b + m - a) % m < la || (a + m - b) % m < lb;
}

struct EnumerationBudget {
    std::uint64_t remaining = kEnumerationBudget;
    void charge(std::uint64_t amount = 1) {
        if (remaining < amount)
            throw BudgetExceeded("exact enumeration exceeds the 10^7 node budget");
        remaining -= amount;
    }
};

void cluster_enumerate(const std::vector<std::uint64_t>& demands, std::uint64_t m,
                       std::size_t instance, std::vector<std::uint64_t>& starts,
                       std::uint64_t tuples_below, std::uint64_t& colliding,
                       EnumerationBudget& budget) {
    if (instance == demands.size()) return;
    for (std::uint64_t x = 0; x < m; ++x) {
        budget.charge();
        bool clash = false;
        for (std::size_t j = 0; j < starts.size() && !clash; ++j)
            clash = arcs_overlap(starts[j], demands[j], x, demands[instance], m);
        if (clash) {
            colliding += tuples_below;  // every completion of this prefix collides
            continue;
        }
        starts.push_back(x);
        cluster_enumerate(demands, m, instance + 1, starts, tuples_below / m, colliding, budget);
        starts.pop_back();
    }
}

}  // namespace

Rational cluster_exact(const DemandProfile& profile, std::uint64_t m) {
    if (m == 0) throw InvalidParameter("cluster_exact: universe must be positive");
    for (auto d : profile.entries())
        if (d > m) throw InvalidParameter("cluster_exact: demand exceeds universe");
    if (profile.size() < 2) return Rational(0);

    std::uint64_t tuples = 1;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        if (tuples > kEnumerationBudget / m)
            throw BudgetExceeded("cluster_exact: m^n exceeds the 10^7 budget");
        tuples *= m;
    }
    std::uint64_t colliding = 0;
    std::vector<std::uint64_t> starts;
    EnumerationBudget budget;
    cluster_enumerate(profile.entries(), m, 0, starts, tuples / m, colliding, budget);
    return make_rational(BigInt(static_cast<unsigned long>(colliding)),
                         int_pow(m, profile.size()));
}

Rational disjoint_subsets_exact(std::uint64_t universe, std::span<const std::uint64_t> sizes) {
    if (universe == 0) throw InvalidParameter("disjoint_subsets_exact: empty universe");
    for (auto b : sizes)
        if (b == 0) throw InvalidParameter("disjoint_subsets_exact: sizes must be positive");
    if (sizes.size() < 2) return Rational(0);
    std::uint64_t total = 0;
    for (auto b : sizes) {
        if (__builtin_add_overflow(total, b, &total) || total > universe) return Rational(1);
    }
    Rational disjoint(1);
    std::uint64_t prefix = 0;
    for (auto b : sizes) {
        disjoint *= make_rational(binomial(universe - prefix, b), binomial(universe, b));
        prefix += b;
    }
    return Rational(1) - disjoint;
}

Rational random_exact(const DemandProfile& profile, std::uint64_t m) {
    if (m == 0) throw InvalidParameter("random_exact: universe must be positive");
    for (auto d : profile.entries())
        if (d > m) throw InvalidParameter("random_exact: demand exceeds universe");
    return disjoint_subsets_exact(m, profile.entries());
}

Rational bins_exact(const DemandProfile& profile, std::uint64_t k, std::uint64_t m) {
    if (m == 0 || k == 0 || k > m) throw InvalidParameter("bins_exact: need 1 <= k <= m");
    for (auto d : profile.entries())
        if (d > m) throw InvalidParameter("bins_exact: demand exceeds universe");
    if (profile.size() < 2) return Rational(0);
    const std::uint64_t bins = m / k;
    std::vector<std::uint64_t> chosen;
    chosen.reserve(profile.size());
    for (auto d : profile.entries()) {
        if (d > bins * k) return Rational(1);  // demand reaches the shared leftover tail
        chosen.push_back((d + k - 1) / k);
    }
    return disjoint_subsets_exact(bins, chosen);
}

Rational p_star_uniform(std::uint64_t n, std::uint64_t h, std::uint64_t m) {
    if (n < 2) throw InvalidParameter("p_star_uniform: need n >= 2");
    if (h == 0 || h > m) throw InvalidParameter("p_star_uniform: need 1 <= h <= m");
    return bins_exact(DemandProfile(std::vector<std::uint64_t>(n, h)), h, m);
}

Rational p_star_two_construction(std::uint64_t i, std::uint64_t j, std::uint64_t m) {
    if (i < 1 || i > j || 2 * j > m)
        throw InvalidParameter("p_star_two_construction: need 1 <= i <= j <= m/2");
    std::uint64_t bins = (m - j + i) / i;
    return make_rational(BigInt(1), BigInt(static_cast<unsigned long>(bins)));
}

Rational balls_success_prob(std::span<const Rational> p, std::uint64_t n) {
    if (p.size() > 10) throw InvalidParameter("balls_success_prob: at most 10 bins");
    if (n < 1 || n > p.size()) throw InvalidParameter("balls_success_prob: need 1 <= n <= #bins");
    Rational sum(0);
    for (const auto& q : p) {
        if (q < 0) throw InvalidParameter("balls_success_prob: negative probability");
        sum += q;
    }
    if (sum != 1) throw InvalidParameter("balls_success_prob: probabilities must sum to 1");
    // Elementary symmetric polynomial e_n by the usual one-pass recurrence.
    std::vector<Rational> e(static_cast<std::size_t>(n) + 1, Rational(0));
    e[0] = 1;
    for (const auto& q : p)
        for (std::size_t t = std::min<std::size_t>(e.size() - 1, p.size()); t >= 1; --t)
            e[t] += e[t - 1] * q;
    Rational factorial(1);
    for (std::uint64_t t = 2; t <= n; ++t) factorial *= Rational(static_cast<unsigned long>(t));
    return factorial * e[static_cast<std::size_t>(n)];
}

Rational bins_star_exact(const DemandProfile& profile, const ChunkGeometry& geometry) {
    for (auto d : profile.entries())
        if (d > geometry.capacity())
            throw InvalidParameter("bins_star_exact: demand exceeds the bins* capacity");
    if (profile.size() < 2) return Rational(0);
    Rational no_collision(1);
    for (std::uint32_t chunk = 1; chunk <= geometry.chunks; ++chunk) {
        std::uint64_t threshold = 1ULL << (chunk - 1);
        std::uint64_t reaching = 0;
        for (auto d : profile.entries())
            if (d >= threshold) ++reaching;
        if (reaching < 2) continue;
        std::uint64_t bins = geometry.bin_count(chunk);
        no_collision *= make_rational(falling_factorial(bins, reaching), int_pow(bins, reaching));
    }
    return Rational(1) - no_collision;
}

// ---------------------------------------------------------------------------
// Brute force: independent weighted enumeration of each algorithm's internal
// random choices, materializing emitted ID multisets.

namespace {

struct Occupied {
    std::unordered_set<std::uint64_t> ids;
    bool any_of(const std::vector<std::uint64_t>& candidate) const {
        for (auto id : candidate)
            if (ids.count(id)) return true;
        return false;
    }
    void add(const std::vector<std::uint64_t>& candidate) {
        for (auto id : candidate) ids.insert(id);
    }
    void remove(const std::vector<std::uint64_t>& candidate) {
        for (auto id : candidate) ids.erase(id);
    }
};

struct RandomBrute {
    const std::vector<std::uint64_t>& demands;
    std::uint64_t m;
    EnumerationBudget& budget;
    Occupied occupied;
    std::uint64_t disjoint_count = 0;

    void instance(std::size_t index) {
        if (index == demands.size()) {
            ++disjoint_count;
            return;
        }
        std::vector<std::uint64_t> picked;
        picked.reserve(static_cast<std::size_t>(demands[index]));
        combination(index, 0, picked);
    }

    void combination(std::size_t index, std::uint64_t from, std::vector<std::uint64_t>& picked) {
        if (picked.size() == demands[index]) {
            if (!occupied.any_of(picked)) {
                occupied.add(picked);
                instance(index + 1);
                occupied.remove(picked);
            }
            return;
        }
        std::uint64_t needed = demands[index] - picked.size();
        for (std::uint64_t id = from; id + needed <= m; ++id) {
            budget.charge();
            picked.push_back(id);
            combination(index, id + 1, picked);
            picked.pop_back();
        }
    }
};

struct ClusterBrute {
    const std::vector<std::uint64_t>& demands;
    std::uint64_t m;
    EnumerationBudget& budget;
    Occupied occupied;
    std::uint64_t colliding = 0;

    void instance(std::size_t index, std::uint64_t tuples_below) {
        if (index == demands.size()) return;
        std::vector<std::uint64_t> ids;
        ids.reserve(static_cast<std::size_t>(demands[index]));
        for (std::uint64_t x = 0; x < m; ++x) {
            budget.charge();
            ids.clear();
            for (std::uint64_t t = 0; t < demands[index]; ++t) ids.push_back((x + t) % m);
            if (occupied.any_of(ids)) {
                colliding += tuples_below;
                continue;
            }
            occupied.add(ids);
            instance(index + 1, tuples_below / m);
            occupied.remove(ids);
        }
    }
};

// The drawn-bin order only matters through which bin ends up partially
// emitted (the last one), so the enumeration runs over (bin subset, choice
// of partial bin): a uniform ordered draw is a uniform subset plus a uniform
// partial member. This keeps the space at C(bins, c) * c instead of the
// ordered falling factorial.
struct BinsBrute {
    const std::vector<std::uint64_t>& demands;
    std::uint64_t m, k, bins;
    EnumerationBudget& budget;
    Occupied occupied;
    std::uint64_t disjoint_count = 0;

    void instance(std::size_t index) {
        if (index == demands.size()) {
            ++disjoint_count;
            return;
        }
        std::uint64_t demand = demands[index];
        std::uint64_t full_draws = std::min(demand / k, bins);
        std::uint64_t remainder = demand - full_draws * k;  // partial bin size, 0 if none
        bool has_partial = remainder > 0 && full_draws < bins;
        std::uint64_t chosen = full_draws + (has_partial ? 1 : 0);
        std::vector<std::uint64_t> subset;
        subset.reserve(static_cast<std::size_t>(chosen));
        combination(index, 0, chosen, has_partial, remainder, subset);
    }

    void combination(std::size_t index, std::uint64_t from, std::uint64_t chosen, bool has_partial,
                     std::uint64_t remainder, std::vector<std::uint64_t>& subset) {
        if (subset.size() == chosen) {
            if (has_partial) {
                for (std::size_t partial = 0; partial < subset.size(); ++partial)
                    finish(index, subset, static_cast<std::ptrdiff_t>(partial), remainder);
            } else {
                finish(index, subset, -1, 0);
            }
            return;
        }
        std::uint64_t needed = chosen - subset.size();
        for (std::uint64_t bin = from; bin + needed <= bins; ++bin) {
            budget.charge();
            subset.push_back(bin);
            combination(index, bin + 1, chosen, has_partial, remainder, subset);
            subset.pop_back();
        }
    }

    void finish(std::size_t index, const std::vector<std::uint64_t>& subset, std::ptrdiff_t partial,
                std::uint64_t remainder) {
        budget.charge();
        std::uint64_t demand = demands[index];
        std::vector<std::uint64_t> emitted;
        emitted.reserve(static_cast<std::size_t>(demand));
        for (std::size_t t = 0; t < subset.size(); ++t) {
            std::uint64_t take = (static_cast<std::ptrdiff_t>(t) == partial) ? remainder : k;
            for (std::uint64_t offset = 0; offset < take; ++offset)
                emitted.push_back(subset[t] * k + offset);
        }
        std::uint64_t in_bins = std::min(demand, bins * k);
        for (std::uint64_t leftover = bins * k; leftover < bins * k + (demand - in_bins); ++leftover)
            emitted.push_back(leftover);  // shared tail, increasing order
        if (!occupied.any_of(emitted)) {
            occupied.add(emitted);
            instance(index + 1);
            occupied.remove(emitted);
        }
    }

    BigInt config_total() const {
        BigInt result(1);
        for (auto demand : demands) {
            std::uint64_t full_draws = std::min(demand / k, bins);
            std::uint64_t remainder = demand - full_draws * k;
            bool has_partial = remainder > 0 && full_draws < bins;
            std::uint64_t chosen = full_draws + (has_partial ? 1 : 0);
            result *= binomial(bins, chosen);
            if (has_partial) result *= BigInt(static_cast<unsigned long>(chosen));
        }
        return result;
    }
};

struct ClusterStarBrute {
    const std::vector<std::uint64_t>& demands;
    std::uint64_t m;
    EnumerationBudget& budget;
    Occupied occupied;
    Rational collision_weight = Rational(0);

    void instance(std::size_t index, const Rational& weight) {
        if (index == demands.size()) return;
        std::unordered_set<std::uint64_t> own;
        std::vector<std::uint64_t> emitted;
        runs(index, weight, 1, 0, own, emitted);
    }

    void runs(std::size_t index, const Rational& weight, std::uint64_t run_len,
              std::uint64_t served, std::unordered_set<std::uint64_t>& own,
              std::vector<std::uint64_t>& emitted) {
        std::uint64_t demand = demands[index];
        if (served == demand) {
            if (occupied.any_of(emitted)) {
                collision_weight += weight;  // downstream instances integrate to 1
            } else {
                occupied.add(emitted);
                instance(index + 1, weight);
                occupied.remove(emitted);
            }
            return;
        }
        // Valid starts by direct scan: the run must avoid this instance's
        // previously opened runs (other instances are invisible to it).
        std::vector<std::uint64_t> valid;
        for (std::uint64_t x = 0; x < m; ++x) {
            budget.charge();
            bool clash = false;
            for (std::uint64_t t = 0; t < run_len && !clash; ++t) clash = own.count((x + t) % m) > 0;
            if (!clash) valid.push_back(x);
        }
        if (valid.empty())
            throw Exhausted("brute_force_collision: cluster* can exhaust on this profile");
        Rational branch_weight = weight / Rational(static_cast<unsigned long>(valid.size()));
        std::uint64_t take = std::min(run_len, demand - served);
        for (auto x : valid) {
            budget.charge();
            for (std::uint64_t t = 0; t < run_len; ++t) own.insert((x + t) % m);
            for (std::uint64_t t = 0; t < take; ++t) emitted.push_back((x + t) % m);
            runs(index, branch_weight, run_len * 2, served + take, own, emitted);
            for (std::uint64_t t = 0; t < take; ++t) emitted.pop_back();
            for (std::uint64_t t = 0; t < run_len; ++t) own.erase((x + t) % m);
        }
    }
};

struct BinsStarBrute {
    const std::vector<std::uint64_t>& demands;
    ChunkGeometry geometry;
    EnumerationBudget& budget;
    Occupied occupied;
    std::uint64_t disjoint_count = 0;

    void instance(std::size_t index) {
        if (index == demands.size()) {
            ++disjoint_count;
            return;
        }
        std::vector<std::uint64_t> ids;
        chunks(index, 1, ids);
    }

    void chunks(std::size_t index, std::uint32_t chunk, std::vector<std::uint64_t>& ids) {
        std::uint64_t demand = demands[index];
        std::uint64_t threshold = 1ULL << (chunk - 1);
        if (chunk > geometry.chunks || demand < threshold) {
            if (!occupied.any_of(ids)) {
                occupied.add(ids);
                instance(index + 1);
                occupied.remove(ids);
            }
            return;
        }
        std::uint64_t take = std::min(demand, (threshold << 1) - 1) - threshold + 1;
        for (std::uint64_t bin = 0; bin < geometry.bin_count(chunk); ++bin) {
            budget.charge();
            std::uint64_t base = geometry.chunk_offset(chunk) + bin * geometry.bin_size(chunk);
            for (std::uint64_t t = 0; t < take; ++t) ids.push_back(base + t);
            chunks(index, chunk + 1, ids);
            for (std::uint64_t t = 0; t < take; ++t) ids.pop_back();
        }
    }
};

}  // namespace

Rational brute_force_collision(const AlgorithmKind& kind, const DemandProfile& profile,
                               std::uint64_t m) {
    if (m == 0) throw InvalidParameter("brute_force_collision: universe must be positive");
    for (auto d : profile.entries())
        if (d > m) throw InvalidParameter("brute_force_collision: demand exceeds universe");
    if (profile.size() < 2) return Rational(0);
    const auto& demands = profile.entries();
    EnumerationBudget budget;

    switch (kind.algo) {
        case Algo::Random: {
            RandomBrute brute{demands, m, budget, {}, 0};
            brute.instance(0);
            BigInt total(1);
            for (auto d : demands) total *= binomial(m, d);
            return Rational(1) - make_rational(BigInt(static_cast<unsigned long>(brute.disjoint_count)), total);
        }
        case Algo::Cluster: {
            std::uint64_t tuples = 1;
            for (std::size_t i = 0; i < demands.size(); ++i) {
                if (tuples > kEnumerationBudget / m)
                    throw BudgetExceeded("brute_force_collision: m^n exceeds the budget");
                tuples *= m;
            }
            ClusterBrute brute{demands, m, budget, {}, 0};
            brute.instance(0, tuples / m);
            return make_rational(BigInt(static_cast<unsigned long>(brute.colliding)), int_pow(m, demands.size()));
        }
        case Algo::Bins: {
            std::uint64_t k = kind.bins_k;
            if (k < 1 || k > m) throw InvalidParameter("brute_force_collision: need 1 <= k <= m");
            BinsBrute brute{demands, m, k, m / k, budget, {}, 0};
            brute.instance(0);
            return Rational(1) - make_rational(BigInt(static_cast<unsigned long>(brute.disjoint_count)),
                                               brute.config_total());
        }
        case Algo::ClusterStar: {
            ClusterStarBrute brute{demands, m, budget, {}, Rational(0)};
            brute.instance(0, Rational(1));
            return brute.collision_weight;
        }
        case Algo::BinsStar: {
            ChunkGeometry geometry = kind.bins_star_chunks == 0
                                         ? ChunkGeometry::for_universe(m)
                                         : ChunkGeometry::with_chunks(kind.bins_star_chunks, m);
            for (auto d : demands)
                if (d > geometry.capacity())
                    throw InvalidParameter("brute_force_collision: demand exceeds bins* capacity");
            BinsStarBrute brute{demands, geometry, budget, {}, 0};
            brute.instance(0);
            BigInt total(1);
            for (auto d : demands) {
                for (std::uint32_t chunk = 1; chunk <= geometry.chunks && d >= (1ULL << (chunk - 1));
                     ++chunk)
                    total *= BigInt(static_cast<unsigned long>(geometry.bin_count(chunk)));
            }
            return Rational(1) - make_rational(BigInt(static_cast<unsigned long>(brute.disjoint_count)), total);
        }
    }
    throw InvalidParameter("brute_force_collision: unknown algorithm");
}

}  // namespace idc
