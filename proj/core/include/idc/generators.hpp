#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "idc/interval_set.hpp"
#include "idc/rng.hpp"

namespace idc {

enum class Algo : std::uint8_t { Random, Cluster, Bins, ClusterStar, BinsStar };

struct AlgorithmKind {
    Algo algo = Algo::Random;
    std::uint64_t bins_k = 0;            // Bins only
    std::uint32_t bins_star_chunks = 0;  // BinsStar: 0 selects the default geometry

    static AlgorithmKind random() { return {Algo::Random, 0, 0}; }
    static AlgorithmKind cluster() { return {Algo::Cluster, 0, 0}; }
    static AlgorithmKind bins(std::uint64_t k) { return {Algo::Bins, k, 0}; }
    static AlgorithmKind cluster_star() { return {Algo::ClusterStar, 0, 0}; }
    static AlgorithmKind bins_star() { return {Algo::BinsStar, 0, 0}; }
    static AlgorithmKind bins_star_with_chunks(std::uint32_t c) { return {Algo::BinsStar, 0, c}; }

    // Canonical names: random, cluster, bins:<k>, cluster*, bins* (optionally bins*:<chunks>).
    std::string to_string() const;
    static AlgorithmKind parse(std::string_view text);

    bool operator==(const AlgorithmKind&) const = default;
};

// BINS* partition of [0, m): C chunks of 2^(C-1) IDs each; chunk i (1-based)
// is split into 2^(C-i) bins of 2^(i-1) IDs.
struct ChunkGeometry {
    std::uint32_t chunks = 1;

    // C = ceil(log2 m - log2 log2 m). Requires m >= 2.
    static ChunkGeometry for_universe(std::uint64_t m);
    // Any chunk count with C * 2^(C-1) <= m, e.g. to reproduce alternative layouts.
    static ChunkGeometry with_chunks(std::uint32_t c, std::uint64_t m);

    std::uint64_t chunk_size() const { return 1ULL << (chunks - 1); }
    std::uint64_t bin_size(std::uint32_t chunk) const { return 1ULL << (chunk - 1); }
    std::uint64_t bin_count(std::uint32_t chunk) const { return 1ULL << (chunks - chunk); }
    std::uint64_t chunk_offset(std::uint32_t chunk) const { return (chunk - 1) * chunk_size(); }
    std::uint64_t capacity() const { return (1ULL << chunks) - 1; }

    bool operator==(const ChunkGeometry&) const = default;
};

// A seeded instance of one ID-generation algorithm. Emits distinct IDs from
// [0, m); the sequence is a pure function of (kind, m, seed). Single-threaded
// use only; run independent instances on independent seeds (see mix64).
class Generator {
  public:
    Generator(const AlgorithmKind& kind, std::uint64_t m, std::uint64_t seed);

    std::uint64_t next_id();

    std::uint64_t emitted_count() const { return emitted_; }
    std::uint64_t universe() const { return m_; }
    const AlgorithmKind& kind() const { return kind_; }

    // Guaranteed serveable request count. For CLUSTER* this is the safe
    // bound m / (2 log2 m): emission continues past it while run placement
    // stays feasible, and throws Exhausted once it is not.
    std::uint64_t capacity() const { return capacity_of(kind_, m_); }
    static std::uint64_t capacity_of(const AlgorithmKind& kind, std::uint64_t m);

    // CLUSTER* introspection: starts x whose run(x, run_len) avoids every run
    // this instance has opened. Throws InvalidParameter for other kinds.
    std::uint64_t valid_start_count(std::uint64_t run_len) const;
    std::vector<std::uint64_t> valid_starts(std::uint64_t run_len) const;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> opened_runs() const;

    // BinsStar geometry in effect (default or overridden); throws for other kinds.
    const ChunkGeometry& geometry() const;

  private:
    struct RandomState {
        std::unordered_map<std::uint64_t, std::uint64_t> swaps;
    };
    struct ClusterState {
        std::uint64_t start = 0;
        bool started = false;
    };
    struct BinsState {
        std::uint64_t bin_total = 0;
        std::uint64_t current_bin = 0;
        std::unordered_map<std::uint64_t, std::uint64_t> swaps;
    };
    struct ClusterStarState {
        explicit ClusterStarState(std::uint64_t m) : runs(m) {}
        CircularIntervalSet runs;
        std::vector<std::pair<std::uint64_t, std::uint64_t>> run_list;  // (start, len)
        std::uint64_t next_run_len = 1;
        std::uint64_t run_start = 0;
        std::uint64_t run_len = 0;
        std::uint64_t run_pos = 0;
    };
    struct BinsStarState {
        ChunkGeometry geometry;
        std::uint64_t current_bin_base = 0;
    };

    CircularIntervalSet forbidden_starts(std::uint64_t run_len) const;

    AlgorithmKind kind_;
    std::uint64_t m_;
    Xoshiro256ss rng_;
    std::uint64_t emitted_ = 0;
    std::variant<RandomState, ClusterState, BinsState, ClusterStarState, BinsStarState> state_;
};

}  // namespace idc
