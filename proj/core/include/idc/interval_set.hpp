#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace idc {

// Union of half-open intervals on the circle [0, m). Wrapping intervals are
// split into at most two linear segments internally. Supports the measure,
// membership and k-th-free-point queries needed to sample run starts from
// the complement without rejection.
class CircularIntervalSet {
  public:
    explicit CircularIntervalSet(std::uint64_t universe);

    // Unions [start, start+len) mod m into the set. len may be 0 (no-op) and
    // may equal the universe size (covers everything).
    void insert(std::uint64_t start, std::uint64_t len);

    bool intersects(std::uint64_t start, std::uint64_t len) const;
    bool contains(std::uint64_t point) const;

    std::uint64_t covered() const { return covered_; }
    std::uint64_t free_count() const { return m_ - covered_; }
    std::uint64_t universe() const { return m_; }

    // k-th uncovered point in increasing order, k in [0, free_count()).
    std::uint64_t kth_free(std::uint64_t k) const;

    // All uncovered points in increasing order. Intended for small universes
    // (tests, brute-force oracles).
    std::vector<std::uint64_t> free_points() const;

  private:
    void insert_linear(std::uint64_t lo, std::uint64_t hi);  // [lo, hi), hi <= m
    bool intersects_linear(std::uint64_t lo, std::uint64_t hi) const;

    std::uint64_t m_;
    std::uint64_t covered_ = 0;
    // start -> end, disjoint, non-adjacent, non-wrapping
    std::map<std::uint64_t, std::uint64_t> segments_;
};

}  // namespace idc
