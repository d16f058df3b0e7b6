#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "efgame/game.hpp"

namespace efg {

/// m-pair: (M, (0,x1)) against (M, (0,x0)).
/// n-pair: (N, (0,x0)) against (N, (0,x1)).
enum class GameKind { MPair, NPair };

std::string to_string(GameKind kind);
/// Throws ParseError on anything but "m-pair" / "n-pair".
GameKind parse_game_kind(std::string_view text);

GameConfig make_game_config(GameKind kind, Ordinal length, std::uint64_t move_size_bound = 1);

/// nu on [0,1) with nu(0) = x0+x1; palette = length when length > 0.
NuDescriptor initial_nu(const Ordinal& length);

/// ISO's strategy for either pair. Each move at stage xi extends nu by one
/// segment [gamma, gamma') past every level AIS mentioned, filled by an
/// injection drawing from U_xi (basis vectors for m-pair, consecutive pairs
/// x_2e + x_2e+1 for n-pair); the elements are then answered by f_nu.
class NuStrategy : public IsoPlayer {
public:
    explicit NuStrategy(GameKind kind) : kind_(kind) {}

    GameKind kind() const noexcept { return kind_; }

    std::optional<NuDescriptor> initial_state(const GameConfig& config) const override;
    IsoResponse respond(const GameConfig& config, const GamePosition& pos, const AisMove& move) override;
    void validate_state(const GameConfig& config, const Ordinal& stage, const NuDescriptor& state,
                        const PartialMap& map) const override;

private:
    GameKind kind_;
};

/// Answers a set move one element at a time through the base player, all at
/// the same stage. Moves of size <= 1 go straight to the base player.
class SetMoveAdapter : public IsoPlayer {
public:
    explicit SetMoveAdapter(IsoPlayer& base) : base_(base) {}

    std::optional<NuDescriptor> initial_state(const GameConfig& config) const override;
    IsoResponse respond(const GameConfig& config, const GamePosition& pos, const AisMove& move) override;
    void validate_state(const GameConfig& config, const Ordinal& stage, const NuDescriptor& state,
                        const PartialMap& map) const override;

private:
    IsoPlayer& base_;
};

/// Seeded random spoiler. Levels stay below w^3, supports below 32; it
/// reuses levels and elements already on the board to provoke clashes.
class RandomAis : public AisPlayer {
public:
    explicit RandomAis(std::uint64_t seed, std::uint64_t max_set_size = 1)
        : rng_(seed), max_set_size_(max_set_size) {}

    AisMove choose(const GameConfig& config, const GamePosition& pos) override;

    std::mt19937_64& rng() noexcept { return rng_; }

private:
    std::mt19937_64 rng_;
    std::uint64_t max_set_size_;
};

/// Uniform-enough integer in [0, n) from a 64-bit engine; n > 0.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n);

/// A state the strategy could hold at `stage` (a limit stage, say) that
/// extends `prior` (held at `prior_stage`): new segments up to at least
/// `stage`, each colored by a color in [prior_stage, stage) not used before,
/// plus possibly one override drawn from yet another such color.
NuDescriptor synthesize_resume_state(GameKind kind, const Ordinal& length, const Ordinal& prior_stage,
                                     const NuDescriptor& prior, const Ordinal& stage, std::mt19937_64& rng);

}  // namespace efg
