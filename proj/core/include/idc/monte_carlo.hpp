#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "idc/game.hpp"

namespace idc {

inline constexpr double kZ95 = 1.959963984540054;

struct WilsonInterval {
    double low = 0.0;
    double high = 1.0;
};

// Score interval; keeps valid coverage for p near 0, which is the regime of
// interest here.
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ95);

struct Estimate {
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
    std::uint64_t master_seed = 0;
};

// p_hat = (#games with a collision) / trials. Trial t plays with seed
// mix64(master_seed, t), so the result is bit-identical for any thread count
// or execution order. threads = 0 picks the hardware concurrency.
Estimate estimate_collision(const AlgorithmKind& kind, std::uint64_t m,
                            const AdversaryKind& adversary, std::uint64_t trials,
                            std::uint64_t master_seed, unsigned threads = 0);

// Empirical inclusion probabilities q_{c,i}: for every id c, the fraction of
// trials whose first `prefix` emissions contain c. Row sums are ~prefix.
std::vector<double> estimate_inclusion(const AlgorithmKind& kind, std::uint64_t m,
                                       std::uint64_t prefix, std::uint64_t trials,
                                       std::uint64_t master_seed, unsigned threads = 0);

struct ScalingFit {
    double slope = 0.0;       // least-squares slope of log p_hat vs log predictor
    double intercept = 0.0;   // intercept of the same fit (natural log)
    double ratio_min = 0.0;   // min of p_hat / predictor: the empirical band
    double ratio_max = 0.0;
};

// Fits the scaling of p_hat against a predictor on a log-log scale. Points
// must sit outside the min(1, .) clamp: every p_hat must be in (0, 0.2], and
// at least 4 points are required.
ScalingFit fit_scaling(std::span<const std::pair<double, double>> points);

}  // namespace idc
