#include "idc/monte_carlo.hpp"

#include <cmath>
#include <limits>
#include <thread>

#include "idc/errors.hpp"

namespace idc {

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
    if (trials == 0 || successes > trials) throw InvalidParameter("wilson_interval: bad counts");
    double n = static_cast<double>(trials);
    double p = static_cast<double>(successes) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = p + z2 / (2.0 * n);
    double spread = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    WilsonInterval w;
    w.low = std::max(0.0, (center - spread) / denom);
    w.high = std::min(1.0, (center + spread) / denom);
    return w;
}

namespace {

unsigned resolve_threads(unsigned threads, std::uint64_t trials) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    if (threads > trials) threads = static_cast<unsigned>(trials);
    return std::max(1u, threads);
}

}  // namespace

Estimate estimate_collision(const AlgorithmKind& kind, std::uint64_t m,
                            const AdversaryKind& adversary, std::uint64_t trials,
                            std::uint64_t master_seed, unsigned threads) {
    if (trials == 0) throw InvalidParameter("estimate_collision: need at least one trial");
    threads = resolve_threads(threads, trials);

    std::vector<std::uint64_t> shard_successes(threads, 0);
    std::vector<std::exception_ptr> failures(threads);
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        workers.emplace_back([&, w]() {
            try {
                std::uint64_t local = 0;
                for (std::uint64_t t = w; t < trials; t += threads)
                    if (play_game_collides(kind, m, adversary, mix64(master_seed, t))) ++local;
                shard_successes[w] = local;
            } catch (...) {
                failures[w] = std::current_exception();
            }
        });
    }
    for (auto& worker : workers) worker.join();
    for (const auto& failure : failures)
        if (failure) std::rethrow_exception(failure);

    std::uint64_t successes = 0;
    for (auto s : shard_successes) successes += s;

    Estimate estimate;
    estimate.successes = successes;
    estimate.trials = trials;
    estimate.master_seed = master_seed;
    estimate.p_hat = static_cast<double>(successes) / static_cast<double>(trials);
    auto interval = wilson_interval(successes, trials);
    estimate.ci_low = interval.low;
    estimate.ci_high = interval.high;
    return estimate;
}

std::vector<double> estimate_inclusion(const AlgorithmKind& kind, std::uint64_t m,
                                       std::uint64_t prefix, std::uint64_t trials,
                                       std::uint64_t master_seed, unsigned threads) {
    if (trials == 0) throw InvalidParameter("estimate_inclusion: need at least one trial");
    if (prefix > Generator::capacity_of(kind, m))
        throw InvalidParameter("estimate_inclusion: prefix exceeds capacity");
    threads = resolve_threads(threads, trials);

    std::vector<std::vector<std::uint64_t>> shard_counts(
        threads, std::vector<std::uint64_t>(static_cast<std::size_t>(m), 0));
    std::vector<std::exception_ptr> failures(threads);
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        workers.emplace_back([&, w]() {
            try {
                auto& counts = shard_counts[w];
                for (std::uint64_t t = w; t < trials; t += threads) {
                    Generator instance(kind, m, mix64(mix64(master_seed, t), 0));
                    for (std::uint64_t i = 0; i < prefix; ++i)
                        ++counts[static_cast<std::size_t>(instance.next_id())];
                }
            } catch (...) {
                failures[w] = std::current_exception();
            }
        });
    }
    for (auto& worker : workers) worker.join();
    for (const auto& failure : failures)
        if (failure) std::rethrow_exception(failure);

    std::vector<double> q(static_cast<std::size_t>(m), 0.0);
    for (const auto& counts : shard_counts)
        for (std::size_t c = 0; c < q.size(); ++c) q[c] += static_cast<double>(counts[c]);
    for (auto& v : q) v /= static_cast<double>(trials);
    return q;
}

ScalingFit fit_scaling(std::span<const std::pair<double, double>> points) {
    if (points.size() < 4) throw InvalidParameter("fit_scaling: need at least 4 points");
    ScalingFit fit;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    fit.ratio_min = std::numeric_limits<double>::infinity();
    fit.ratio_max = 0.0;
    for (const auto& [predictor, p_hat] : points) {
        if (!(predictor > 0)) throw InvalidParameter("fit_scaling: predictors must be positive");
        if (!(p_hat > 0))
            throw InvalidParameter("fit_scaling: zero estimate; increase trials");
        if (p_hat > 0.2)
            throw InvalidParameter("fit_scaling: point inside the min(1,.) clamp regime (p_hat > 0.2)");
        double x = std::log(predictor), y = std::log(p_hat);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        fit.ratio_min = std::min(fit.ratio_min, p_hat / predictor);
        fit.ratio_max = std::max(fit.ratio_max, p_hat / predictor);
    }
    double n = static_cast<double>(points.size());
    double denom = n * sxx - sx * sx;
    if (denom == 0) throw InvalidParameter("fit_scaling: predictor values are degenerate");
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

}  // namespace idc
