#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "efgame/game.hpp"
#include "efgame/strategies.hpp"

namespace efg {

inline constexpr std::string_view kEngineVersion = "efgame/1.0";

/// Everything needed to reproduce a play of one of the two pairs.
struct SessionSetup {
    GameKind game = GameKind::MPair;
    Ordinal length;
    std::uint64_t move_bound = 1;
    std::uint64_t seed = 0;
    bool strict = false;
    bool sequenced = false;  // answer set moves through SetMoveAdapter
    Ordinal start_stage;
    NuDescriptor start_nu;
};

/// "# key: value" lines: engine, game, length, move-bound, seed, strict, iso,
/// left, right, start, start-nu.
std::vector<std::string> header_lines(const SessionSetup& setup, const GameConfig& config);

/// "L[e, ...] R[e, ...]"
std::string format_ais(const AisMove& move);
AisMove parse_ais(std::string_view text);

/// "<stage> | AIS: L[..] R[..] | ISO: sup=..; +segment; @override; l => r; .. | check: OK"
std::string format_move(const MoveRecord& record, const std::optional<NuDescriptor>& before);
std::string format_failure(const Ordinal& stage, const AisMove& move, std::string_view message);

struct MoveLine {
    Ordinal stage;
    AisMove ais;
};
MoveLine parse_move_line(std::string_view line);

struct SelfplayOptions {
    SessionSetup setup;            // start_stage / start_nu are filled in by run_selfplay
    std::uint64_t moves = 0;
    std::uint64_t set_size = 1;  // largest set AIS picks; 1 = single elements
    std::optional<Ordinal> resume_stage;
};

struct SelfplayResult {
    std::string transcript;
    bool ok = true;
    std::string failure;
    std::uint64_t moves_played = 0;
    GamePosition final_position;
};

/// Random AIS against the pair's strategy. Stops early at the end of the
/// game or on the first failed move (recorded as a "check: FAIL" line).
SelfplayResult run_selfplay(SelfplayOptions options);

struct ReplayResult {
    bool ok = true;
    std::size_t line = 0;  // 1-based line of the first problem
    std::string message;
};

/// Re-executes every move of a transcript and requires each regenerated
/// line to match byte for byte.
ReplayResult replay_transcript(std::string_view text);

}  // namespace efg
