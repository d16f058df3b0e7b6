#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "efgame/automorphism.hpp"
#include "efgame/oracle.hpp"
#include "efgame/ordinal.hpp"
#include "efgame/structures.hpp"

namespace efg {

inline constexpr std::uint64_t kUnboundedMoveSize = UINT64_MAX;

/// The sets A_{beta,1}, A_{beta,2} chosen by AIS at one stage.
struct AisMove {
    std::vector<Element> left;
    std::vector<Element> right;

    std::size_t size() const noexcept { return left.size() + right.size(); }
    bool operator==(const AisMove&) const = default;
};

/// A finite injective map kept in insertion order.
class PartialMap {
public:
    /// Adds l -> r. Returns false (and changes nothing) if l or r is already
    /// paired with something else.
    bool add(const Element& l, const Element& r);

    std::optional<Element> image(const Element& l) const;
    std::optional<Element> preimage(const Element& r) const;
    const std::vector<ElementPair>& pairs() const noexcept { return pairs_; }
    std::size_t size() const noexcept { return pairs_.size(); }

private:
    std::vector<ElementPair> pairs_;
    std::unordered_map<Element, Element> forward_;
    std::unordered_map<Element, Element> backward_;
};

struct GameConfig {
    StructureHandle left;
    StructureHandle right;
    Ordinal length;
    std::uint64_t move_size_bound = 1;
    std::vector<ElementPair> initial_map;

    /// Throws InconsistentState unless initial_map is a partial isomorphism.
    static GameConfig make(StructureHandle left, StructureHandle right, Ordinal length,
                           std::uint64_t move_size_bound, std::vector<ElementPair> initial_map);
};

/// ISO's answer to one move: the new nu (for strategies of the form f_nu) and
/// the image or preimage of every element AIS picked, in AIS order (left
/// elements first), each as a (left, right) pair.
struct IsoResponse {
    std::optional<NuDescriptor> nu;
    std::vector<ElementPair> answers;
};

struct MoveRecord {
    Ordinal stage;
    AisMove ais;
    IsoResponse iso;
};

struct GamePosition {
    Ordinal stage;
    std::optional<NuDescriptor> iso_state;
    PartialMap map;
    std::vector<MoveRecord> history;
};

class IsoPlayer {
public:
    virtual ~IsoPlayer() = default;

    /// The state ISO starts a fresh game with (nullopt for map-only players).
    virtual std::optional<NuDescriptor> initial_state(const GameConfig& config) const = 0;
    virtual IsoResponse respond(const GameConfig& config, const GamePosition& pos, const AisMove& move) = 0;
    /// Throws InconsistentState unless `state` is something this player could
    /// hold at `stage` with `map` already committed.
    virtual void validate_state(const GameConfig& config, const Ordinal& stage, const NuDescriptor& state,
                                const PartialMap& map) const = 0;
};

class AisPlayer {
public:
    virtual ~AisPlayer() = default;
    virtual AisMove choose(const GameConfig& config, const GamePosition& pos) = 0;
};

GamePosition new_game(const GameConfig& config, const IsoPlayer& iso);

/// One move. Throws IllegalAisMove when no move is left (stage >= length),
/// the move is too large or names an element outside its structure; throws
/// IsoStuck when ISO's answer does not extend the position to a partial
/// isomorphism covering the move. With `strict`, ISO's new state is also run
/// through its own validator.
GamePosition game_step(const GameConfig& config, GamePosition pos, const AisMove& move, IsoPlayer& iso,
                       bool strict = false);

/// A playable position at `stage` holding `state`. With a prior position the
/// state must extend the prior one and keep its map. Throws InconsistentState.
GamePosition resume_at(const GameConfig& config, const Ordinal& stage, const NuDescriptor& state,
                       const IsoPlayer& iso, const GamePosition* prior = nullptr);

}  // namespace efg
