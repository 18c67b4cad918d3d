#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "idc/demand_profile.hpp"
#include "idc/generators.hpp"

namespace idc {

enum class ActionType : std::uint8_t { ActivateNew, RequestExisting, Stop };

struct Action {
    ActionType type = ActionType::Stop;
    std::size_t instance = 0;  // RequestExisting only

    static Action activate() { return {ActionType::ActivateNew, 0}; }
    static Action request(std::size_t j) { return {ActionType::RequestExisting, j}; }
    static Action stop() { return {ActionType::Stop, 0}; }

    bool operator==(const Action&) const = default;
};

struct Observation {
    std::size_t instance = 0;
    std::uint64_t id = 0;
    bool collided = false;  // this ID had already been emitted by some instance

    bool operator==(const Observation&) const = default;
};

struct GameStep {
    Action action;
    Observation observation;
};

struct Transcript {
    std::vector<GameStep> steps;
    DemandProfile final_profile;
    std::optional<std::size_t> collision_step;
    bool collided = false;
};

// What an adaptive adversary can see before choosing its next action.
struct GameView {
    std::span<const Observation> history;
    std::size_t instances = 0;
    bool collided = false;
};

enum class RequestOrder : std::uint8_t { Sequential, RoundRobin };

struct Oblivious {
    DemandProfile profile;
    RequestOrder order = RequestOrder::Sequential;
};

enum class KillerMode : std::uint8_t {
    SingleTarget,    // dump all extra requests on the closer instance of the closest pair
    PairRoundRobin,  // probe the closest pair alternately
};

// Adaptive attack on sequential allocators: sample one ID from each of n
// instances, find the circularly closest pair, then spend the remaining
// d - n requests driving it into a collision. Requires n >= 2, d >= 2n.
struct ClusterKiller {
    std::uint64_t n = 2;
    std::uint64_t d = 4;
    KillerMode mode = KillerMode::SingleTarget;
};

// D_0 = () followed by profiles that grow by appending a 1 or incrementing
// one entry. Construction validates the transition rule.
class DemandSequence {
  public:
    explicit DemandSequence(std::vector<DemandProfile> profiles);

    // One profile per line, comma-separated entries; D_0 = () is implicit.
    static DemandSequence load(const std::string& path);

    const std::vector<DemandProfile>& profiles() const { return profiles_; }
    std::size_t length() const { return profiles_.size(); }

    // The action that turns D_index into D_{index+1} (index 0 activates the
    // first instance).
    Action transition(std::size_t index) const;

  private:
    std::vector<DemandProfile> profiles_;
    std::vector<Action> transitions_;
};

// fol(S): follows the demand sequence while no collision has occurred and
// stops immediately on one. Only downward-closed profile sets are supported,
// which is exactly the regime where stopping immediately is optimal.
struct SemiAdaptiveFollower {
    DemandSequence sequence;
};

using ScriptedPolicy = std::function<Action(const GameView&)>;

// Table- or function-driven adversary for tests; may branch on any part of
// the observation history.
struct Scripted {
    ScriptedPolicy policy;
};

// The same decision structure, but fed a simulated observation stream: the
// policy sees ids drawn as if from an untouched game (distinct uniformly
// random bins) and only the collision flags are real. Playable against
// bins-structured algorithms (random, bins:k).
struct BlindScripted {
    ScriptedPolicy policy;
};

using AdversaryKind = std::variant<Oblivious, ClusterKiller, SemiAdaptiveFollower, Scripted, BlindScripted>;

// Scripted -> BlindScripted; other kinds are rejected.
AdversaryKind blind_variant(const AdversaryKind& adversary);

// Closest circular pair of first IDs; returns the instance that reaches the
// other end by emitting forward, plus the extra request count d - n. Ties
// among equally close pairs break toward the lowest instance index pair.
std::pair<std::size_t, std::uint64_t> cluster_killer_policy(std::span<const std::uint64_t> first_ids,
                                                            std::uint64_t m, std::uint64_t n,
                                                            std::uint64_t d);

// Next action of fol(S) given the current position and collision status.
Action semi_adaptive_step(const DemandSequence& sequence, std::size_t index, bool collided);

// Plays one full game. Deterministic in (kind, m, adversary, seed); instance
// i uses seed mix64(seed, i), the adversary's private stream uses
// mix64(seed, 2^64 - 1). Collision detection is global across instances.
Transcript play_game(const AlgorithmKind& kind, std::uint64_t m, const AdversaryKind& adversary,
                     std::uint64_t seed);

// Same game, but only reports whether a collision occurred. This is the
// Monte-Carlo hot path: no transcript is recorded.
bool play_game_collides(const AlgorithmKind& kind, std::uint64_t m, const AdversaryKind& adversary,
                        std::uint64_t seed);

// CLI/config forms: "oblivious:3,2" (append ":rr" for round-robin order),
// "killer:n=8,d=64" (append ",rr" to probe the pair alternately),
// "fol:<sequence file>".
AdversaryKind parse_adversary(const std::string& text);
std::string adversary_to_string(const AdversaryKind& adversary);

}  // namespace idc
