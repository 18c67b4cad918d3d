#include "idc/generators.hpp"

#include <bit>
#include <charconv>
#include <cmath>

#include "idc/errors.hpp"

namespace idc {

std::string AlgorithmKind::to_string() const {
    switch (algo) {
        case Algo::Random: return "random";
        case Algo::Cluster: return "cluster";
        case Algo::Bins: return "bins:" + std::to_string(bins_k);
        case Algo::ClusterStar: return "cluster*";
        case Algo::BinsStar:
            return bins_star_chunks == 0 ? "bins*" : "bins*:" + std::to_string(bins_star_chunks);
    }
    return "?";
}

AlgorithmKind AlgorithmKind::parse(std::string_view text) {
    auto parse_u64 = [](std::string_view s) {
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size())
            throw InvalidParameter("AlgorithmKind::parse: bad number");
        return v;
    };
    if (text == "random") return random();
    if (text == "cluster") return cluster();
    if (text == "cluster*" || text == "cluster-star" || text == "cluster_star") return cluster_star();
    if (text == "bins*" || text == "bins-star" || text == "bins_star") return bins_star();
    constexpr std::string_view kBins = "bins:";
    constexpr std::string_view kBinsStar1 = "bins*:";
    constexpr std::string_view kBinsStar2 = "bins-star:";
    if (text.starts_with(kBinsStar1))
        return bins_star_with_chunks(static_cast<std::uint32_t>(parse_u64(text.substr(kBinsStar1.size()))));
    if (text.starts_with(kBinsStar2))
        return bins_star_with_chunks(static_cast<std::uint32_t>(parse_u64(text.substr(kBinsStar2.size()))));
    if (text.starts_with(kBins)) return bins(parse_u64(text.substr(kBins.size())));
    throw InvalidParameter("AlgorithmKind::parse: unknown algorithm '" + std::string(text) + "'");
}

ChunkGeometry ChunkGeometry::for_universe(std::uint64_t m) {
    if (m < 2) throw InvalidParameter("ChunkGeometry: need m >= 2");
    double lm = std::log2(static_cast<double>(m));
    double value = lm - std::log2(lm);
    // The 1e-9 nudge keeps exactly-integer values (m a power of two whose
    // exponent is itself a power of two) from being pushed up by fp noise.
    auto c = static_cast<std::uint32_t>(std::ceil(value - 1e-9));
    if (c < 1) c = 1;
    ChunkGeometry geometry{c};
    while (geometry.chunks > 1 &&
           (geometry.chunks > 63 ||
            static_cast<std::uint64_t>(geometry.chunks) > m / geometry.chunk_size()))
        --geometry.chunks;
    return geometry;
}

ChunkGeometry ChunkGeometry::with_chunks(std::uint32_t c, std::uint64_t m) {
    if (c < 1 || c > 63) throw InvalidParameter("ChunkGeometry: chunk count out of range");
    ChunkGeometry geometry{c};
    if (static_cast<std::uint64_t>(c) > m / geometry.chunk_size())
        throw InvalidParameter("ChunkGeometry: C * 2^(C-1) exceeds the universe");
    return geometry;
}

namespace {

std::uint64_t cluster_star_safe_bound(std::uint64_t m) {
    if (m == 1) return 1;
    double bound = static_cast<double>(m) / (2.0 * std::log2(static_cast<double>(m)));
    auto floor_bound = static_cast<std::uint64_t>(bound);
    return floor_bound == 0 ? 1 : floor_bound;
}

}  // namespace

std::uint64_t Generator::capacity_of(const AlgorithmKind& kind, std::uint64_t m) {
    if (m == 0) throw InvalidParameter("capacity_of: universe must be positive");
    switch (kind.algo) {
        case Algo::Random:
        case Algo::Cluster:
            return m;
        case Algo::Bins:
            if (kind.bins_k < 1 || kind.bins_k > m)
                throw InvalidParameter("capacity_of: bins needs 1 <= k <= m");
            return m;
        case Algo::ClusterStar:
            return cluster_star_safe_bound(m);
        case Algo::BinsStar: {
            ChunkGeometry geometry = kind.bins_star_chunks == 0
                                         ? ChunkGeometry::for_universe(m)
                                         : ChunkGeometry::with_chunks(kind.bins_star_chunks, m);
            return geometry.capacity();
        }
    }
    throw InvalidParameter("capacity_of: unknown algorithm");
}

Generator::Generator(const AlgorithmKind& kind, std::uint64_t m, std::uint64_t seed)
    : kind_(kind), m_(m), rng_(seed), state_(RandomState{}) {
    if (m == 0) throw InvalidParameter("Generator: universe must be positive");
    switch (kind.algo) {
        case Algo::Random:
            state_ = RandomState{};
            break;
        case Algo::Cluster:
            state_ = ClusterState{};
            break;
        case Algo::Bins: {
            if (kind.bins_k < 1 || kind.bins_k > m)
                throw InvalidParameter("Generator: bins needs 1 <= k <= m");
            BinsState st;
            st.bin_total = m / kind.bins_k;
            state_ = std::move(st);
            break;
        }
        case Algo::ClusterStar:
            state_ = ClusterStarState{m};
            break;
        case Algo::BinsStar: {
            BinsStarState st;
            st.geometry = kind.bins_star_chunks == 0
                              ? ChunkGeometry::for_universe(m)
                              : ChunkGeometry::with_chunks(kind.bins_star_chunks, m);
            state_ = st;
            break;
        }
    }
}

std::uint64_t Generator::next_id() {
    switch (kind_.algo) {
        case Algo::Random: {
            if (emitted_ >= m_) throw Exhausted("random: all IDs emitted");
            auto& st = std::get<RandomState>(state_);
            // Lazy Fisher-Yates: memory grows with IDs emitted, not with m.
            std::uint64_t t = emitted_;
            std::uint64_t j = t + rng_.uniform(m_ - t);
            auto value_at = [&st](std::uint64_t pos) {
                auto it = st.swaps.find(pos);
                return it == st.swaps.end() ? pos : it->second;
            };
            std::uint64_t result = value_at(j);
            st.swaps[j] = value_at(t);
            ++emitted_;
            return result;
        }
        case Algo::Cluster: {
            if (emitted_ >= m_) throw Exhausted("cluster: all IDs emitted");
            auto& st = std::get<ClusterState>(state_);
            if (!st.started) {
                st.start = rng_.uniform(m_);
                st.started = true;
            }
            std::uint64_t id = st.start + emitted_;
            if (id >= m_) id -= m_;
            ++emitted_;
            return id;
        }
        case Algo::Bins: {
            if (emitted_ >= m_) throw Exhausted("bins: all IDs emitted");
            auto& st = std::get<BinsState>(state_);
            const std::uint64_t k = kind_.bins_k;
            std::uint64_t bin_phase = st.bin_total * k;
            if (emitted_ >= bin_phase) {
                // Leftover IDs [bin_total*k, m) in increasing order; with all
                // bins consumed the running count is itself the next ID.
                return emitted_++;
            }
            std::uint64_t offset = emitted_ % k;
            if (offset == 0) {
                std::uint64_t t = emitted_ / k;
                std::uint64_t j = t + rng_.uniform(st.bin_total - t);
                auto value_at = [&st](std::uint64_t pos) {
                    auto it = st.swaps.find(pos);
                    return it == st.swaps.end() ? pos : it->second;
                };
                st.current_bin = value_at(j);
                st.swaps[j] = value_at(t);
            }
            ++emitted_;
            return st.current_bin * k + offset;
        }
        case Algo::ClusterStar: {
            auto& st = std::get<ClusterStarState>(state_);
            if (st.run_pos == st.run_len) {
                std::uint64_t r = st.next_run_len;
                if (r > m_) throw Exhausted("cluster*: next run exceeds the universe");
                CircularIntervalSet forbidden = forbidden_starts(r);
                std::uint64_t free = forbidden.free_count();
                if (free == 0) throw Exhausted("cluster*: no feasible start for the next run");
                std::uint64_t x = forbidden.kth_free(rng_.uniform(free));
                st.runs.insert(x, r);
                st.run_list.emplace_back(x, r);
                st.run_start = x;
                st.run_len = r;
                st.run_pos = 0;
                st.next_run_len = r * 2;
            }
            std::uint64_t id = st.run_start + st.run_pos;
            if (id >= m_) id -= m_;
            ++st.run_pos;
            ++emitted_;
            return id;
        }
        case Algo::BinsStar: {
            auto& st = std::get<BinsStarState>(state_);
            if (emitted_ >= st.geometry.capacity())
                throw Exhausted("bins*: the bin of the last chunk is exhausted");
            std::uint64_t request = emitted_ + 1;  // 1-indexed
            auto chunk = static_cast<std::uint32_t>(std::bit_width(request));
            std::uint64_t pos = request - (1ULL << (chunk - 1));
            if (pos == 0) {
                std::uint64_t bin = rng_.uniform(st.geometry.bin_count(chunk));
                st.current_bin_base =
                    st.geometry.chunk_offset(chunk) + bin * st.geometry.bin_size(chunk);
            }
            ++emitted_;
            return st.current_bin_base + pos;
        }
    }
    throw InvalidParameter("next_id: unknown algorithm");
}

CircularIntervalSet Generator::forbidden_starts(std::uint64_t run_len) const {
    const auto& st = std::get<ClusterStarState>(state_);
    CircularIntervalSet forbidden(m_);
    for (const auto& [start, len] : st.run_list) {
        // run(x, r) meets [start, start+len) iff x lies in [start-r+1, start+len).
        std::uint64_t span = len + run_len - 1;
        if (span >= m_) {
            forbidden.insert(0, m_);
            break;
        }
        std::uint64_t from = (start + m_ - (run_len - 1) % m_) % m_;
        forbidden.insert(from, span);
    }
    return forbidden;
}

std::uint64_t Generator::valid_start_count(std::uint64_t run_len) const {
    if (kind_.algo != Algo::ClusterStar)
        throw InvalidParameter("valid_start_count: cluster* instances only");
    if (run_len < 1 || run_len > m_) throw InvalidParameter("valid_start_count: bad run length");
    return forbidden_starts(run_len).free_count();
}

std::vector<std::uint64_t> Generator::valid_starts(std::uint64_t run_len) const {
    if (kind_.algo != Algo::ClusterStar)
        throw InvalidParameter("valid_starts: cluster* instances only");
    if (run_len < 1 || run_len > m_) throw InvalidParameter("valid_starts: bad run length");
    return forbidden_starts(run_len).free_points();
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> Generator::opened_runs() const {
    if (kind_.algo != Algo::ClusterStar)
        throw InvalidParameter("opened_runs: cluster* instances only");
    return std::get<ClusterStarState>(state_).run_list;
}

const ChunkGeometry& Generator::geometry() const {
    if (kind_.algo != Algo::BinsStar) throw InvalidParameter("geometry: bins* instances only");
    return std::get<BinsStarState>(state_).geometry;
}

}  // namespace idc
