#include "efgame/transcript.hpp"

#include <charconv>
#include <map>
#include <memory>
#include <sstream>

#include "efgame/errors.hpp"

namespace efg {

namespace {

std::string structure_text(const StructureHandle& s) {
    std::string out = s.is_expanded() ? "N" : "M";
    if (s.distinguished) out += "; a=" + to_string(Element(*s.distinguished));
    return out;
}

std::string join_elements(const std::vector<Element>& v) {
    std::string out;
    for (const auto& e : v) {
        if (!out.empty()) out += ", ";
        out += to_string(e);
    }
    return out;
}

// Splits on `sep` outside parentheses and brackets.
std::vector<std::string_view> split_top(std::string_view s, std::string_view sep) {
    std::vector<std::string_view> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (c == '(' || c == '[' || c == '{') ++depth;
        else if (c == ')' || c == ']' || c == '}') --depth;
        else if (depth == 0 && s.compare(i, sep.size(), sep) == 0) {
            out.push_back(s.substr(start, i - start));
            start = i + sep.size();
            i = start - 1;
        }
    }
    out.push_back(s.substr(start));
    return out;
}

std::vector<Element> parse_list(std::string_view body) {
    std::vector<Element> out;
    if (body.empty()) return out;
    for (auto piece : split_top(body, ", ")) out.push_back(parse_element(piece));
    return out;
}

std::uint64_t parse_u64(std::string_view s) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) throw ParseError("expected a natural, got '" + std::string(s) + "'", 0);
    return v;
}

}  // namespace

std::vector<std::string> header_lines(const SessionSetup& setup, const GameConfig& config) {
    return {
        "# engine: " + std::string(kEngineVersion),
        "# game: " + to_string(setup.game),
        "# length: " + setup.length.to_string(),
        "# move-bound: " + std::to_string(setup.move_bound),
        "# seed: " + std::to_string(setup.seed),
        std::string("# strict: ") + (setup.strict ? "1" : "0"),
        std::string("# iso: ") + (setup.sequenced ? "sequenced" : "native"),
        "# left: " + structure_text(config.left),
        "# right: " + structure_text(config.right),
        "# start: " + setup.start_stage.to_string(),
        "# start-nu: " + setup.start_nu.to_string(),
    };
}

std::string format_ais(const AisMove& move) {
    return "L[" + join_elements(move.left) + "] R[" + join_elements(move.right) + "]";
}

AisMove parse_ais(std::string_view text) {
    if (text.size() < 6 || text.substr(0, 2) != "L[") throw ParseError("AIS field must start with 'L['", 0);
    std::size_t i = 2;
    int depth = 0;
    for (; i < text.size(); ++i) {
        if (text[i] == '(') ++depth;
        else if (text[i] == ')') --depth;
        else if (text[i] == ']' && depth == 0) break;
    }
    if (i >= text.size()) throw ParseError("unterminated left list", 2);
    AisMove move;
    move.left = parse_list(text.substr(2, i - 2));
    const std::string_view rest = text.substr(i + 1);
    if (rest.size() < 4 || rest.substr(0, 3) != " R[" || rest.back() != ']')
        throw ParseError("AIS field needs ' R[...]'", i + 1);
    move.right = parse_list(rest.substr(3, rest.size() - 4));
    return move;
}

std::string format_move(const MoveRecord& record, const std::optional<NuDescriptor>& before) {
    std::vector<std::string> delta;
    if (record.iso.nu) {
        const NuDescriptor& nu = *record.iso.nu;
        delta.push_back("sup=" + nu.domain_sup().to_string());
        const std::size_t old_count = before ? before->segments().size() : 0;
        for (std::size_t i = 0; i < nu.segments().size(); ++i) {
            const bool old = i < old_count && before->segments()[i] == nu.segments()[i];
            if (!old) delta.push_back("+" + to_string(nu.segments()[i]));
        }
        for (const auto& [a, g] : nu.overrides()) {
            const bool old = before && before->overrides().count(a) && before->overrides().at(a) == g;
            if (!old) delta.push_back("@" + a.to_string() + "=" + g.to_string());
        }
    }
    for (const auto& [l, r] : record.iso.answers) delta.push_back(to_string(l) + " => " + to_string(r));
    std::string iso;
    for (const auto& d : delta) {
        if (!iso.empty()) iso += "; ";
        iso += d;
    }
    if (iso.empty()) iso = "-";
    return record.stage.to_string() + " | AIS: " + format_ais(record.ais) + " | ISO: " + iso + " | check: OK";
}

std::string format_failure(const Ordinal& stage, const AisMove& move, std::string_view message) {
    return stage.to_string() + " | AIS: " + format_ais(move) + " | ISO: - | check: FAIL " + std::string(message);
}

MoveLine parse_move_line(std::string_view line) {
    const auto fields = split_top(line, " | ");
    if (fields.size() != 4) throw ParseError("move line needs four '|'-separated fields", 0);
    if (fields[1].substr(0, 5) != "AIS: ") throw ParseError("second field must start with 'AIS: '", 0);
    return MoveLine{Ordinal::parse(fields[0]), parse_ais(fields[1].substr(5))};
}

namespace {

struct Session {
    GameConfig config;
    std::unique_ptr<NuStrategy> strategy;
    std::unique_ptr<SetMoveAdapter> adapter;
    GamePosition pos;

    IsoPlayer& iso() { return adapter ? static_cast<IsoPlayer&>(*adapter) : *strategy; }
};

Session open_session(const SessionSetup& setup) {
    Session s{make_game_config(setup.game, setup.length, setup.move_bound),
              std::make_unique<NuStrategy>(setup.game), nullptr, {}};
    if (setup.sequenced) s.adapter = std::make_unique<SetMoveAdapter>(*s.strategy);
    if (setup.start_stage.is_zero() && setup.start_nu == initial_nu(setup.length))
        s.pos = new_game(s.config, s.iso());
    else
        s.pos = resume_at(s.config, setup.start_stage, setup.start_nu, s.iso());
    return s;
}

// One move; returns the transcript line and whether the move succeeded.
std::pair<std::string, bool> play_line(Session& s, const AisMove& move, bool strict, std::string* failure) {
    const std::optional<NuDescriptor> before = s.pos.iso_state;
    const Ordinal stage = s.pos.stage;
    try {
        s.pos = game_step(s.config, std::move(s.pos), move, s.iso(), strict);
    } catch (const Error& e) {
        if (failure) *failure = e.what();
        return {format_failure(stage, move, e.what()), false};
    }
    return {format_move(s.pos.history.back(), before), true};
}

}  // namespace

SelfplayResult run_selfplay(SelfplayOptions options) {
    SessionSetup& setup = options.setup;
    setup.move_bound = std::max<std::uint64_t>(setup.move_bound, options.set_size);
    setup.start_stage = Ordinal{};
    setup.start_nu = initial_nu(setup.length);
    if (options.resume_stage && !options.resume_stage->is_zero()) {
        std::mt19937_64 rng(setup.seed ^ 0x5eed5eed5eed5eedULL);
        setup.start_nu =
            synthesize_resume_state(setup.game, setup.length, Ordinal{}, setup.start_nu, *options.resume_stage, rng);
        setup.start_stage = *options.resume_stage;
    }
    SelfplayResult result;
    Session s = open_session(setup);
    std::ostringstream out;
    for (const auto& h : header_lines(setup, s.config)) out << h << '\n';
    RandomAis ais(setup.seed, options.set_size);
    for (std::uint64_t i = 0; i < options.moves && s.pos.stage < s.config.length; ++i) {
        const AisMove move = ais.choose(s.config, s.pos);
        auto [line, ok] = play_line(s, move, setup.strict, &result.failure);
        out << line << '\n';
        if (!ok) {
            result.ok = false;
            break;
        }
        ++result.moves_played;
    }
    result.transcript = out.str();
    result.final_position = std::move(s.pos);
    return result;
}

ReplayResult replay_transcript(std::string_view text) {
    std::vector<std::string_view> lines;
    for (std::size_t start = 0; start < text.size();) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    std::map<std::string, std::string, std::less<>> header;
    std::size_t first_move = 0;
    while (first_move < lines.size() && !lines[first_move].empty() && lines[first_move][0] == '#') {
        const auto l = lines[first_move];
        const auto colon = l.find(": ");
        if (l.size() < 2 || colon == std::string_view::npos) return {false, first_move + 1, "malformed header line"};
        header.emplace(std::string(l.substr(2, colon - 2)), std::string(l.substr(colon + 2)));
        ++first_move;
    }
    auto field = [&](const char* key) -> const std::string& {
        auto it = header.find(key);
        if (it == header.end()) throw ParseError(std::string("header lacks '") + key + "'", 0);
        return it->second;
    };
    const auto engine = header.find("engine");
    if (engine == header.end()) return {false, 1, "transcript has no engine header"};
    if (engine->second != kEngineVersion)
        return {false, 1,
                "transcript written by engine '" + engine->second + "', this is " + std::string(kEngineVersion) +
                    "; refusing to replay"};

    Session session{};
    SessionSetup setup;
    try {
        setup.game = parse_game_kind(field("game"));
        setup.length = Ordinal::parse(field("length"));
        setup.move_bound = parse_u64(field("move-bound"));
        setup.seed = parse_u64(field("seed"));
        setup.strict = field("strict") == "1";
        setup.sequenced = field("iso") == "sequenced";
        setup.start_stage = Ordinal::parse(field("start"));
        setup.start_nu = NuDescriptor::parse(field("start-nu"));
        session = open_session(setup);
    } catch (const Error& e) {
        return {false, 1, std::string("cannot set up the game: ") + e.what()};
    }
    const auto expected_header = header_lines(setup, session.config);
    if (expected_header.size() != first_move) return {false, first_move + 1, "unexpected number of header lines"};
    for (std::size_t i = 0; i < first_move; ++i)
        if (lines[i] != expected_header[i])
            return {false, i + 1, "header differs: expected '" + expected_header[i] + "'"};

    for (std::size_t i = first_move; i < lines.size(); ++i) {
        const std::string_view line = lines[i];
        if (line.empty() && i + 1 == lines.size()) break;
        MoveLine parsed;
        try {
            parsed = parse_move_line(line);
        } catch (const Error& e) {
            return {false, i + 1, std::string("unreadable move line: ") + e.what()};
        }
        if (parsed.stage != session.pos.stage)
            return {false, i + 1, "stage " + parsed.stage.to_string() + " where " + session.pos.stage.to_string() +
                                      " was expected"};
        auto [regenerated, ok] = play_line(session, parsed.ais, setup.strict, nullptr);
        if (regenerated != line) return {false, i + 1, "line differs; regenerated: " + regenerated};
        if (!ok) return {false, i + 1, "recorded failure reproduced"};
    }
    return {};
}

}  // namespace efg
