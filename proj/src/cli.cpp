#include "efgame/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>

#include "efgame/errors.hpp"
#include "efgame/oracle.hpp"
#include "efgame/strategies.hpp"
#include "efgame/transcript.hpp"
#include "efgame/verify.hpp"

namespace efg {

namespace {

struct UsageError : Error {
    using Error::Error;
};

Ordinal ordinal_flag(const std::string& flag, const std::string& text) {
    try {
        return Ordinal::parse(text);
    } catch (const ParseError& e) {
        throw UsageError(flag + ": " + e.what());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + path + "'");
    f << text;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

// selfplay --bounds: set=N, sequenced=0|1
struct PlayBounds {
    std::uint64_t set_size = 1;
    bool sequenced = false;
};

PlayBounds parse_play_bounds(std::string_view text) {
    PlayBounds b;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string_view::npos) end = text.size();
        const std::string item(text.substr(start, end - start));
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos) throw UsageError("--bounds: '" + item + "' needs k=v");
        const std::string key = item.substr(0, eq);
        std::uint64_t v = 0;
        try {
            std::size_t used = 0;
            v = std::stoull(item.substr(eq + 1), &used);
            if (used != item.size() - eq - 1) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("--bounds: '" + key + "' needs a natural value");
        }
        if (key == "set") {
            if (v == 0 || v > 64) throw UsageError("--bounds: set must lie in 1..64");
            b.set_size = v;
        } else if (key == "sequenced") {
            b.sequenced = v != 0;
        } else {
            throw UsageError("--bounds: unknown key '" + key + "'");
        }
        start = end + 1;
    }
    return b;
}

int cmd_verify(const std::string& bounds_text, const std::string& report_path, std::ostream& out) {
    VerifyBounds bounds;
    try {
        bounds = parse_bounds(bounds_text);
    } catch (const ParseError& e) {
        throw UsageError(std::string("--bounds: ") + e.what());
    }
    std::ostringstream report;
    const VerifyOutcome outcome = run_verify(bounds, report);
    out << report.str();
    if (!report_path.empty()) {
        write_file(report_path, report.str());
        out << "report: " << report_path << '\n';
    }
    return outcome.pass() ? kExitPass : kExitFailure;
}

struct SelfplayArgs {
    std::string game = "m-pair";
    std::uint64_t seed = 0;
    std::string length = "w^3*1";
    std::uint64_t moves = 64;
    std::string resume_stage;
    std::string transcript;
    bool strict = false;
    std::string bounds;
};

int cmd_selfplay(const SelfplayArgs& a, std::ostream& out, std::ostream& err) {
    SelfplayOptions opt;
    try {
        opt.setup.game = parse_game_kind(a.game);
    } catch (const ParseError& e) {
        throw UsageError(std::string("--game: ") + e.what());
    }
    opt.setup.length = ordinal_flag("--length", a.length);
    if (opt.setup.length.is_zero()) throw UsageError("--length must be positive");
    opt.setup.seed = a.seed;
    opt.setup.strict = a.strict;
    const PlayBounds pb = parse_play_bounds(a.bounds);
    opt.setup.sequenced = pb.sequenced;
    opt.set_size = pb.set_size;
    opt.moves = a.moves;
    if (!a.resume_stage.empty()) {
        opt.resume_stage = ordinal_flag("--resume-stage", a.resume_stage);
        if (!(*opt.resume_stage < opt.setup.length)) throw UsageError("--resume-stage must lie below --length");
    }
    const SelfplayResult r = run_selfplay(std::move(opt));
    std::ostream& summary = a.transcript.empty() ? err : out;
    if (a.transcript.empty()) out << r.transcript;
    else write_file(a.transcript, r.transcript);
    if (r.ok) {
        summary << "selfplay: " << r.moves_played << " moves, all checks passed\n";
        return kExitPass;
    }
    summary << "selfplay: failed after " << r.moves_played << " moves: " << r.failure << '\n';
    return kExitFailure;
}

int cmd_replay(const std::string& path, std::ostream& out) {
    const std::string text = read_file(path);
    const ReplayResult r = replay_transcript(text);
    if (r.ok) {
        out << "replay: OK\n";
        return kExitPass;
    }
    out << "replay: line " << r.line << ": " << r.message << '\n';
    return kExitFailure;
}

int cmd_partition(const std::string& length_text, const std::string& color_text, std::uint64_t count,
                  const std::optional<std::uint64_t>& locate, std::ostream& out) {
    const Ordinal length = ordinal_flag("--length", length_text);
    if (length.is_zero()) throw UsageError("--length must be positive");
    const OmegaPartition part(length);
    if (locate) {
        const auto [eps, k] = part.locate(*locate);
        out << *locate << " is element " << k << " of U_" << eps.to_string() << '\n';
        return kExitPass;
    }
    const Ordinal color = ordinal_flag("--color", color_text);
    if (!(color < length)) throw UsageError("--color must lie below --length");
    out << "U_" << color.to_string() << ":";
    for (auto n : part.enumerate(color, count)) out << ' ' << n;
    out << '\n';
    return kExitPass;
}

// One REPL line: "[L:|R:] e, e, ..."; left when no side is given.
struct ReplMove {
    AisMove move;
    std::string error;
};

ReplMove parse_repl_move(std::string_view line) {
    ReplMove r;
    bool left = true;
    std::size_t base = 0;
    if (line.size() >= 2 && (line[0] == 'L' || line[0] == 'R') && line[1] == ':') {
        left = line[0] == 'L';
        base = 2;
    }
    std::vector<Element>& side = left ? r.move.left : r.move.right;
    int depth = 0;
    std::size_t start = base;
    for (std::size_t i = base; i <= line.size(); ++i) {
        const bool end = i == line.size();
        if (!end) {
            if (line[i] == '(') ++depth;
            else if (line[i] == ')') --depth;
        }
        if (!end && !(line[i] == ',' && depth == 0)) continue;
        std::string_view piece = line.substr(start, i - start);
        std::size_t lead = 0;
        while (lead < piece.size() && piece[lead] == ' ') ++lead;
        piece = trim(piece);
        if (!piece.empty()) {
            try {
                side.push_back(parse_element(piece));
            } catch (const ParseError& e) {
                const std::size_t column = start + lead + std::min(e.position(), piece.size());
                r.error = std::string(line) + "\n" + std::string(column, ' ') + "^ " + e.what();
                return r;
            } catch (const Error& e) {
                r.error = std::string(piece) + ": " + e.what();
                return r;
            }
        }
        start = i + 1;
    }
    if (side.empty()) r.error = "no element given";
    return r;
}

struct PlayArgs {
    std::string game = "m-pair";
    std::string length = "w^3*1";
    std::string transcript;
    bool strict = false;
};

int cmd_play(const PlayArgs& a, std::istream& in, std::ostream& out) {
    GameKind kind;
    try {
        kind = parse_game_kind(a.game);
    } catch (const ParseError& e) {
        throw UsageError(std::string("--game: ") + e.what());
    }
    const Ordinal length = ordinal_flag("--length", a.length);
    if (length.is_zero()) throw UsageError("--length must be positive");
    const std::uint64_t bound = 8;
    const GameConfig config = make_game_config(kind, length, bound);
    NuStrategy strategy(kind);
    SetMoveAdapter iso(strategy);
    GamePosition pos = new_game(config, iso);
    SessionSetup setup{kind, length, bound, 0, a.strict, true, Ordinal{}, *pos.iso_state};
    std::vector<std::string> lines = header_lines(setup, config);

    out << "efgame play: " << to_string(kind) << ", length " << length.to_string()
        << ". Enter elements as 'L: e, e' or 'R: e'; 'map' shows the map, 'quit' ends.\n";
    std::string raw;
    while (pos.stage < config.length) {
        out << "stage " << pos.stage.to_string() << "> " << std::flush;
        if (!std::getline(in, raw)) break;
        const std::string_view line = trim(raw);
        if (line.empty()) continue;
        if (line == "quit" || line == "exit") break;
        if (line == "map") {
            for (const auto& [l, r] : pos.map.pairs()) out << "  " << to_string(l) << " => " << to_string(r) << '\n';
            continue;
        }
        if (line == "nu") {
            out << "  " << pos.iso_state->to_string() << '\n';
            continue;
        }
        const ReplMove rm = parse_repl_move(line);
        if (!rm.error.empty()) {
            out << "parse error: " << rm.error << '\n';
            continue;
        }
        const std::optional<NuDescriptor> before = pos.iso_state;
        const Ordinal stage = pos.stage;
        try {
            pos = game_step(config, std::move(pos), rm.move, iso, a.strict);
        } catch (const IllegalAisMove& e) {
            out << "illegal move: " << e.what() << '\n';
            continue;
        } catch (const Error& e) {
            out << "ISO is stuck: " << e.what() << '\n';
            lines.push_back(format_failure(stage, rm.move, e.what()));
            if (!a.transcript.empty()) {
                std::string text;
                for (const auto& l : lines) text += l + "\n";
                write_file(a.transcript, text);
            }
            return kExitFailure;
        }
        const MoveRecord& rec = pos.history.back();
        for (const auto& [l, r] : rec.iso.answers) out << "  " << to_string(l) << " => " << to_string(r) << '\n';
        lines.push_back(format_move(rec, before));
    }
    const AuditReport audit = audit_game_map(config.left, config.right, pos.map.pairs());
    if (!a.transcript.empty()) {
        std::string text;
        for (const auto& l : lines) text += l + "\n";
        write_file(a.transcript, text);
    }
    if (!audit.ok()) {
        out << "audit: FAIL " << audit.violations.front() << '\n';
        return kExitFailure;
    }
    out << "audit: OK, " << pos.map.size() << " pairs\n";
    return kExitPass;
}

int cmd_demo(std::ostream& out) {
    const GameConfig config = make_game_config(GameKind::NPair, Ordinal::omega_power(3), 1);
    NuStrategy iso(GameKind::NPair);
    GamePosition pos = new_game(config, iso);
    const std::vector<std::pair<bool, std::string>> script{
        {true, "A(0; x5)"},
        {false, "A(w^1*1; x2+x3)"},
        {true, "B(w^1*1; 4)"},
        {false, "A(w^2*1; x0)"},
        {true, "B(w^0*2; 3)"},
    };
    out << "n-pair, length " << config.length.to_string() << "\n";
    for (const auto& [left, text] : script) {
        AisMove move;
        (left ? move.left : move.right).push_back(parse_element(text));
        const std::optional<NuDescriptor> before = pos.iso_state;
        pos = game_step(config, std::move(pos), move, iso, true);
        out << format_move(pos.history.back(), before) << '\n';
    }
    const AuditReport audit = audit_game_map(config.left, config.right, pos.map.pairs());
    out << "audit: " << (audit.ok() ? "OK" : "FAIL") << ", " << pos.map.size() << " pairs\n";
    return audit.ok() ? kExitPass : kExitFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Ehrenfeucht-Fraisse games on GF(2)-layered structures"};
    app.name("efgame");
    app.require_subcommand(1);

    std::string bounds_text;
    std::string report_path;
    auto* verify = app.add_subcommand("verify", "Run the oracle grids");
    verify->add_option("--bounds", bounds_text, "k=v,... over support,gamma,prules,nus,converse,rigidity,seed,fault");
    verify->add_option("--transcript", report_path, "Also write the report here");

    SelfplayArgs sp;
    auto* selfplay = app.add_subcommand("selfplay", "Random spoiler against the pair's strategy");
    selfplay->add_option("--game", sp.game, "m-pair or n-pair");
    selfplay->add_option("--seed", sp.seed);
    selfplay->add_option("--length", sp.length, "Game length, an ordinal below w^w");
    selfplay->add_option("--moves", sp.moves);
    selfplay->add_option("--resume-stage", sp.resume_stage, "Start from a synthesized position at this stage");
    selfplay->add_option("--transcript", sp.transcript, "Transcript path (stdout when absent)");
    selfplay->add_flag("--strict", sp.strict, "Run the strategy's own validator after every move");
    selfplay->add_option("--bounds", sp.bounds, "set=N (largest set move), sequenced=0|1");

    PlayArgs pa;
    auto* play = app.add_subcommand("play", "Interactive play with you as the spoiler");
    play->add_option("--game", pa.game, "m-pair or n-pair");
    play->add_option("--length", pa.length);
    play->add_option("--transcript", pa.transcript);
    play->add_flag("--strict", pa.strict);

    std::string replay_path;
    auto* replay = app.add_subcommand("replay", "Re-execute a transcript");
    auto* replay_flag = replay->add_option("--transcript", replay_path);
    replay->add_option("path", replay_path)->excludes(replay_flag);

    std::string part_length = "w^3*1";
    std::string part_color = "0";
    std::uint64_t part_count = 16;
    std::optional<std::uint64_t> part_locate;
    auto* partition = app.add_subcommand("partition", "List pieces of the partition of the naturals");
    partition->add_option("--length", part_length);
    partition->add_option("--color", part_color);
    partition->add_option("--count", part_count);
    partition->add_option("--locate", part_locate, "Report the piece holding this natural");

    auto* demo = app.add_subcommand("demo", "A short scripted game");

    std::vector<const char*> argv{"efgame"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (*verify) return cmd_verify(bounds_text, report_path, out);
        if (*selfplay) return cmd_selfplay(sp, out, err);
        if (*play) return cmd_play(pa, in, out);
        if (*replay) {
            if (replay_path.empty()) throw UsageError("replay needs a transcript path");
            return cmd_replay(replay_path, out);
        }
        if (*partition) return cmd_partition(part_length, part_color, part_count, part_locate, out);
        if (*demo) return cmd_demo(out);
    } catch (const UsageError& e) {
        err << "efgame: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "efgame: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace efg
