#include "idc/game.hpp"

#include <fstream>
#include <memory>
#include <unordered_map>
#include <unordered_set>

#include "idc/errors.hpp"

namespace idc {

namespace {

// Reserved stream index for the adversary's private randomness; generator
// instances use stream indices 0, 1, 2, ...
constexpr std::uint64_t kAdversaryStream = ~0ULL;

Action detect_transition(const DemandProfile& from, const DemandProfile& to) {
    const auto& a = from.entries();
    const auto& b = to.entries();
    if (b.size() == a.size() + 1) {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) throw InvalidSequence("demand sequence: prefix changed while appending");
        if (b.back() != 1) throw InvalidSequence("demand sequence: appended entry must be 1");
        return Action::activate();
    }
    if (b.size() == a.size()) {
        std::optional<std::size_t> bumped;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (b[i] == a[i]) continue;
            if (b[i] != a[i] + 1 || bumped)
                throw InvalidSequence("demand sequence: step must increment exactly one entry by 1");
            bumped = i;
        }
        if (!bumped) throw InvalidSequence("demand sequence: consecutive profiles are equal");
        return Action::request(*bumped);
    }
    throw InvalidSequence("demand sequence: illegal size change");
}

}  // namespace

DemandSequence::DemandSequence(std::vector<DemandProfile> profiles) : profiles_(std::move(profiles)) {
    if (profiles_.empty()) throw InvalidSequence("demand sequence: empty");
    DemandProfile previous;  // D_0 = ()
    transitions_.reserve(profiles_.size());
    for (const auto& profile : profiles_) {
        transitions_.push_back(detect_transition(previous, profile));
        previous = profile;
    }
}

DemandSequence DemandSequence::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("DemandSequence::load: cannot open '" + path + "'");
    std::vector<DemandProfile> profiles;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        profiles.push_back(DemandProfile::parse(line));
    }
    return DemandSequence(std::move(profiles));
}

Action DemandSequence::transition(std::size_t index) const {
    if (index >= transitions_.size()) return Action::stop();
    return transitions_[index];
}

Action semi_adaptive_step(const DemandSequence& sequence, std::size_t index, bool collided) {
    if (collided) return Action::stop();
    return sequence.transition(index);
}

std::pair<std::size_t, std::uint64_t> cluster_killer_policy(std::span<const std::uint64_t> first_ids,
                                                            std::uint64_t m, std::uint64_t n,
                                                            std::uint64_t d) {
    if (first_ids.size() != n || n < 2) throw InvalidParameter("cluster_killer_policy: need the n first IDs");
    if (d < n) throw InvalidParameter("cluster_killer_policy: need d >= n");
    std::uint64_t best_distance = ~0ULL;
    std::size_t target = 0;
    for (std::size_t i = 0; i + 1 < first_ids.size(); ++i) {
        for (std::size_t j = i + 1; j < first_ids.size(); ++j) {
            std::uint64_t forward = (first_ids[j] % m + m - first_ids[i] % m) % m;
            std::uint64_t backward = (first_ids[i] % m + m - first_ids[j] % m) % m;
            std::uint64_t distance = std::min(forward, backward);
            if (distance < best_distance) {
                best_distance = distance;
                // The "smaller" ID is the one whose forward emission reaches
                // the other; on a circle that is direction, not magnitude.
                target = forward <= backward ? i : j;
            }
        }
    }
    return {target, d - n};
}

// ---------------------------------------------------------------------------
// Per-game adversary runtimes.

namespace {

struct AdversaryRuntime {
    virtual ~AdversaryRuntime() = default;
    virtual Action next(const GameView& view) = 0;
    virtual void observe(const Observation&) {}
};

struct ObliviousRuntime final : AdversaryRuntime {
    std::vector<Action> script;
    std::size_t cursor = 0;

    explicit ObliviousRuntime(const Oblivious& spec) {
        const auto& d = spec.profile.entries();
        if (spec.order == RequestOrder::Sequential) {
            for (std::size_t i = 0; i < d.size(); ++i) {
                script.push_back(Action::activate());
                for (std::uint64_t t = 1; t < d[i]; ++t) script.push_back(Action::request(i));
            }
        } else {
            std::vector<std::uint64_t> left(d.begin(), d.end());
            for (std::size_t i = 0; i < d.size(); ++i) --left[i], script.push_back(Action::activate());
            // Activation already served one request per instance; cycle the rest.
            bool pushed = true;
            while (pushed) {
                pushed = false;
                for (std::size_t i = 0; i < d.size(); ++i) {
                    if (left[i] == 0) continue;
                    --left[i];
                    script.push_back(Action::request(i));
                    pushed = true;
                }
            }
        }
    }

    Action next(const GameView&) override {
        return cursor < script.size() ? script[cursor++] : Action::stop();
    }
};

struct KillerRuntime final : AdversaryRuntime {
    std::uint64_t n, d, m;
    KillerMode mode;
    std::size_t issued = 0;
    std::size_t target = 0, partner = 0;
    bool planned = false;

    KillerRuntime(const ClusterKiller& spec, std::uint64_t universe)
        : n(spec.n), d(spec.d), m(universe), mode(spec.mode) {
        if (n < 2 || d < 2 * n) throw InvalidParameter("ClusterKiller: requires n >= 2 and d >= 2n");
    }

    Action next(const GameView& view) override {
        std::size_t step = issued++;
        if (step < n) return Action::activate();
        if (!planned) {
            std::vector<std::uint64_t> first_ids;
            first_ids.reserve(n);
            for (std::size_t i = 0; i < n; ++i) first_ids.push_back(view.history[i].id);
            target = cluster_killer_policy(first_ids, m, n, d).first;
            // The partner is the other endpoint of the chosen pair: the
            // instance whose first ID the target's forward emission chases.
            partner = target;
            std::uint64_t best = ~0ULL;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == target) continue;
                std::uint64_t forward = (first_ids[j] + m - first_ids[target]) % m;
                if (forward < best) best = forward, partner = j;
            }
            planned = true;
        }
        if (step >= d) return Action::stop();
        if (mode == KillerMode::SingleTarget) return Action::request(target);
        return Action::request((step - n) % 2 == 0 ? target : partner);
    }
};

struct FolRuntime final : AdversaryRuntime {
    const DemandSequence sequence;
    std::size_t index = 0;

    explicit FolRuntime(const SemiAdaptiveFollower& spec) : sequence(spec.sequence) {}

    Action next(const GameView& view) override {
        Action action = semi_adaptive_step(sequence, index, view.collided);
        if (action.type != ActionType::Stop) ++index;
        return action;
    }
};

struct ScriptedRuntime final : AdversaryRuntime {
    ScriptedPolicy policy;

    explicit ScriptedRuntime(const Scripted& spec) : policy(spec.policy) {
        if (!policy) throw InvalidParameter("Scripted: empty policy");
    }

    Action next(const GameView& view) override { return policy(view); }
};

// Feeds the policy a simulated observation stream: ids of an untouched game
// (new bins uniform over globally unused bins), with the real collision
// flags passed through.
struct BlindRuntime final : AdversaryRuntime {
    ScriptedPolicy policy;
    std::uint64_t bin_size, bin_total;
    Xoshiro256ss rng;
    std::vector<Observation> fake_history;
    std::vector<std::uint64_t> request_count;      // per instance
    std::vector<std::uint64_t> fake_bin;           // per instance, current bin
    std::unordered_map<std::uint64_t, std::uint64_t> swaps;  // lazy shuffle of bins
    std::uint64_t bins_drawn = 0;

    BlindRuntime(const BlindScripted& spec, const AlgorithmKind& kind, std::uint64_t m,
                 std::uint64_t seed)
        : policy(spec.policy), bin_size(0), bin_total(0), rng(seed) {
        if (!policy) throw InvalidParameter("BlindScripted: empty policy");
        if (kind.algo == Algo::Random) bin_size = 1;
        else if (kind.algo == Algo::Bins) bin_size = kind.bins_k;
        else throw InvalidParameter("BlindScripted: needs a bins-structured algorithm (random, bins:k)");
        bin_total = m / bin_size;
    }

    Action next(const GameView& view) override {
        GameView blinded{fake_history, view.instances, view.collided};
        return policy(blinded);
    }

    void observe(const Observation& real) override {
        if (real.instance >= request_count.size()) {
            request_count.resize(real.instance + 1, 0);
            fake_bin.resize(real.instance + 1, 0);
        }
        std::uint64_t position = request_count[real.instance] % bin_size;
        if (position == 0) {
            if (bins_drawn >= bin_total)
                throw InvalidParameter("BlindScripted: simulated bins exhausted");
            std::uint64_t t = bins_drawn++;
            std::uint64_t j = t + rng.uniform(bin_total - t);
            auto value_at = [this](std::uint64_t pos) {
                auto it = swaps.find(pos);
                return it == swaps.end() ? pos : it->second;
            };
            fake_bin[real.instance] = value_at(j);
            swaps[j] = value_at(t);
        }
        ++request_count[real.instance];
        fake_history.push_back(
            {real.instance, fake_bin[real.instance] * bin_size + position, real.collided});
    }
};

std::unique_ptr<AdversaryRuntime> make_runtime(const AdversaryKind& adversary,
                                               const AlgorithmKind& kind, std::uint64_t m,
                                               std::uint64_t adversary_seed) {
    return std::visit(
        [&](const auto& spec) -> std::unique_ptr<AdversaryRuntime> {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, Oblivious>) return std::make_unique<ObliviousRuntime>(spec);
            else if constexpr (std::is_same_v<T, ClusterKiller>) return std::make_unique<KillerRuntime>(spec, m);
            else if constexpr (std::is_same_v<T, SemiAdaptiveFollower>) return std::make_unique<FolRuntime>(spec);
            else if constexpr (std::is_same_v<T, Scripted>) return std::make_unique<ScriptedRuntime>(spec);
            else return std::make_unique<BlindRuntime>(spec, kind, m, adversary_seed);
        },
        adversary);
}

template <bool Record>
Transcript run_game(const AlgorithmKind& kind, std::uint64_t m, const AdversaryKind& adversary,
                    std::uint64_t seed, bool stop_at_collision) {
    auto runtime = make_runtime(adversary, kind, m, mix64(seed, kAdversaryStream));
    const std::uint64_t capacity = Generator::capacity_of(kind, m);

    std::vector<Generator> instances;
    std::vector<std::uint64_t> counts;
    std::unordered_set<std::uint64_t> emitted;
    std::vector<Observation> history;
    Transcript transcript;

    for (;;) {
        GameView view{history, instances.size(), transcript.collided};
        Action action = runtime->next(view);
        if (action.type == ActionType::Stop) break;

        std::size_t j;
        if (action.type == ActionType::ActivateNew) {
            j = instances.size();
            instances.emplace_back(kind, m, mix64(seed, j));
            counts.push_back(0);
        } else {
            j = action.instance;
            if (j >= instances.size())
                throw InvalidParameter("play_game: request to a dormant instance");
        }
        if (counts[j] >= capacity)
            throw CapacityExceeded("play_game: adversary exceeds per-instance capacity for " +
                                   kind.to_string());

        std::uint64_t id = instances[j].next_id();
        ++counts[j];
        bool duplicate = !emitted.insert(id).second;
        if (duplicate && !transcript.collided) {
            transcript.collided = true;
            transcript.collision_step = history.size();
        }
        Observation observation{j, id, duplicate};
        history.push_back(observation);
        runtime->observe(observation);
        if constexpr (Record) transcript.steps.push_back({action, observation});
        if (stop_at_collision && transcript.collided) return transcript;
    }
    transcript.final_profile = DemandProfile(std::move(counts));
    return transcript;
}

}  // namespace

Transcript play_game(const AlgorithmKind& kind, std::uint64_t m, const AdversaryKind& adversary,
                     std::uint64_t seed) {
    return run_game<true>(kind, m, adversary, seed, false);
}

bool play_game_collides(const AlgorithmKind& kind, std::uint64_t m, const AdversaryKind& adversary,
                        std::uint64_t seed) {
    return run_game<false>(kind, m, adversary, seed, true).collided;
}

AdversaryKind blind_variant(const AdversaryKind& adversary) {
    if (const auto* scripted = std::get_if<Scripted>(&adversary))
        return BlindScripted{scripted->policy};
    throw InvalidParameter("blind_variant: only scripted adversaries can be blinded");
}

AdversaryKind parse_adversary(const std::string& text) {
    auto fail = [&]() -> AdversaryKind {
        throw InvalidParameter("parse_adversary: cannot parse '" + text + "'");
    };
    if (text.starts_with("oblivious:")) {
        std::string rest = text.substr(10);
        RequestOrder order = RequestOrder::Sequential;
        if (auto colon = rest.find(':'); colon != std::string::npos) {
            std::string suffix = rest.substr(colon + 1);
            rest = rest.substr(0, colon);
            if (suffix == "rr" || suffix == "roundrobin") order = RequestOrder::RoundRobin;
            else if (suffix != "seq" && suffix != "sequential") return fail();
        }
        return Oblivious{DemandProfile::parse(rest), order};
    }
    if (text.starts_with("killer:")) {
        std::string rest = text.substr(7);
        ClusterKiller killer;
        bool have_n = false, have_d = false;
        std::size_t pos = 0;
        while (pos < rest.size()) {
            std::size_t comma = rest.find(',', pos);
            if (comma == std::string::npos) comma = rest.size();
            std::string field = rest.substr(pos, comma - pos);
            if (field.starts_with("n=")) killer.n = std::stoull(field.substr(2)), have_n = true;
            else if (field.starts_with("d=")) killer.d = std::stoull(field.substr(2)), have_d = true;
            else if (field == "rr") killer.mode = KillerMode::PairRoundRobin;
            else if (field == "single") killer.mode = KillerMode::SingleTarget;
            else return fail();
            pos = comma + 1;
        }
        if (!have_n || !have_d || killer.n < 2 || killer.d < 2 * killer.n) return fail();
        return killer;
    }
    if (text.starts_with("fol:")) {
        return SemiAdaptiveFollower{DemandSequence::load(text.substr(4))};
    }
    return fail();
}

std::string adversary_to_string(const AdversaryKind& adversary) {
    return std::visit(
        [](const auto& spec) -> std::string {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, Oblivious>) {
                std::string out = "oblivious:" + spec.profile.to_string();
                if (spec.order == RequestOrder::RoundRobin) out += ":rr";
                return out;
            } else if constexpr (std::is_same_v<T, ClusterKiller>) {
                std::string out = "killer:n=" + std::to_string(spec.n) + ",d=" + std::to_string(spec.d);
                if (spec.mode == KillerMode::PairRoundRobin) out += ",rr";
                return out;
            } else if constexpr (std::is_same_v<T, SemiAdaptiveFollower>) {
                return "fol:len=" + std::to_string(spec.sequence.length()) + ",final=" +
                       spec.sequence.profiles().back().to_string();
            } else if constexpr (std::is_same_v<T, Scripted>) {
                return "scripted";
            } else {
                return "blind-scripted";
            }
        },
        adversary);
}

}  // namespace idc
