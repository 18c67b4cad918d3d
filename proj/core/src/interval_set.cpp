#include "idc/interval_set.hpp"

#include "idc/errors.hpp"

namespace idc {

CircularIntervalSet::CircularIntervalSet(std::uint64_t universe) : m_(universe) {
    if (universe == 0) throw InvalidParameter("CircularIntervalSet: universe must be positive");
}

void CircularIntervalSet::insert(std::uint64_t start, std::uint64_t len) {
    if (len == 0) return;
    if (len > m_) throw InvalidParameter("CircularIntervalSet::insert: length exceeds universe");
    start %= m_;
    if (start + len <= m_) {
        insert_linear(start, start + len);
    } else {
        insert_linear(start, m_);
        insert_linear(0, start + len - m_);
    }
}

void CircularIntervalSet::insert_linear(std::uint64_t lo, std::uint64_t hi) {
    if (lo >= hi) return;
    // Absorb every segment overlapping or adjacent to [lo, hi).
    auto it = segments_.upper_bound(lo);
    if (it != segments_.begin()) {
        auto prev = std::prev(it);
        if (prev->second >= lo) it = prev;
    }
    while (it != segments_.end() && it->first <= hi) {
        lo = std::min(lo, it->first);
        hi = std::max(hi, it->second);
        covered_ -= it->second - it->first;
        it = segments_.erase(it);
    }
    segments_.emplace(lo, hi);
    covered_ += hi - lo;
}

bool CircularIntervalSet::intersects_linear(std::uint64_t lo, std::uint64_t hi) const {
    if (lo >= hi) return false;
    auto it = segments_.lower_bound(lo);
    if (it != segments_.begin()) {
        auto prev = std::prev(it);
        if (prev->second > lo) return true;
    }
    return it != segments_.end() && it->first < hi;
}

bool CircularIntervalSet::intersects(std::uint64_t start, std::uint64_t len) const {
    if (len == 0) return false;
    if (len > m_) throw InvalidParameter("CircularIntervalSet::intersects: length exceeds universe");
    start %= m_;
    if (start + len <= m_) return intersects_linear(start, start + len);
    return intersects_linear(start, m_) || intersects_linear(0, start + len - m_);
}

bool CircularIntervalSet::contains(std::uint64_t point) const {
    return intersects_linear(point % m_, point % m_ + 1);
}

std::uint64_t CircularIntervalSet::kth_free(std::uint64_t k) const {
    if (k >= free_count()) throw InvalidParameter("CircularIntervalSet::kth_free: index out of range");
    std::uint64_t cursor = 0;
    for (const auto& [lo, hi] : segments_) {
        std::uint64_t gap = lo - cursor;
        if (k < gap) return cursor + k;
        k -= gap;
        cursor = hi;
    }
    return cursor + k;
}

std::vector<std::uint64_t> CircularIntervalSet::free_points() const {
    std::vector<std::uint64_t> out;
    out.reserve(static_cast<std::size_t>(free_count()));
    std::uint64_t cursor = 0;
    for (const auto& [lo, hi] : segments_) {
        for (std::uint64_t v = cursor; v < lo; ++v) out.push_back(v);
        cursor = hi;
    }
    for (std::uint64_t v = cursor; v < m_; ++v) out.push_back(v);
    return out;
}

}  // namespace idc
