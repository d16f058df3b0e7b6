#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "efgame/errors.hpp"
#include "efgame/game.hpp"
#include "efgame/strategies.hpp"
#include "efgame/transcript.hpp"
#include "support.hpp"

using efg::AElement;
using efg::AisMove;
using efg::BElement;
using efg::Element;
using efg::GameKind;
using efg::GroupElement;
using efg::NuDescriptor;
using efg::Ordinal;
using namespace testing;

namespace {

Ordinal w(std::uint64_t e = 1, std::uint64_t c = 1) { return Ordinal::omega_power(e, c); }
Ordinal n(std::uint64_t k) { return Ordinal::finite(k); }
GroupElement x(std::initializer_list<efg::Index> idx) { return GroupElement::from_indices(idx); }
AElement a(Ordinal level, GroupElement v) { return AElement{std::move(level), std::move(v)}; }

AisMove left(std::vector<Element> es) { return AisMove{std::move(es), {}}; }

// Replays `moves` random moves and hands every position to `check`.
template <class Check>
void random_play(GameKind kind, std::uint64_t seed, int moves, bool strict, Check check) {
    const efg::GameConfig config = efg::make_game_config(kind, w(3));
    efg::NuStrategy iso(kind);
    efg::RandomAis ais(seed);
    efg::GamePosition pos = efg::new_game(config, iso);
    for (int i = 0; i < moves; ++i) {
        pos = efg::game_step(config, std::move(pos), ais.choose(config, pos), iso, strict);
        check(config, pos);
    }
}

std::string strip_headers(const std::string& t) {
    std::string out;
    std::size_t start = 0;
    while (start < t.size()) {
        const std::size_t end = t.find('\n', start);
        const std::string line = t.substr(start, end - start);
        if (line.empty() || line[0] != '#') out += line + "\n";
        start = end + 1;
    }
    return out;
}

}  // namespace

TEST_CASE("partial maps") {
    efg::PartialMap m;
    CHECK(m.add(a(n(0), x({1})), a(n(0), x({2}))));
    CHECK(m.add(a(n(0), x({1})), a(n(0), x({2}))));
    CHECK_FALSE(m.add(a(n(0), x({1})), a(n(0), x({3}))));
    CHECK_FALSE(m.add(a(n(0), x({4})), a(n(0), x({2}))));
    CHECK(m.size() == 1);
    CHECK(m.preimage(a(n(0), x({2}))) == Element(a(n(0), x({1}))));
}

TEST_CASE("configs reject bad initial maps") {
    const auto m = efg::StructureHandle::plain_m();
    CHECK_THROWS_AS(efg::GameConfig::make(m, m, n(3), 1, {{a(n(0), {}), a(n(0), {})}, {a(n(1), {}), a(n(0), x({4}))}}),
                    efg::InconsistentState);
    CHECK_THROWS_AS(efg::GameConfig::make(m, m, n(3), 1, {{a(n(0), {}), a(n(0), {})}, {a(n(0), {}), a(n(0), x({4}))}}),
                    efg::InconsistentState);
    CHECK_THROWS_AS(efg::GameConfig::make(m, m, n(3), 0, {}), efg::InconsistentState);
    CHECK_NOTHROW(efg::GameConfig::make(m, m, n(3), 1, {{a(n(0), {}), a(n(0), x({4}))}}));
}

TEST_CASE("length zero leaves no move") {
    const efg::GameConfig config = efg::make_game_config(GameKind::MPair, Ordinal{});
    efg::NuStrategy iso(GameKind::MPair);
    efg::GamePosition pos = efg::new_game(config, iso);
    CHECK(pos.map.size() == config.initial_map.size());
    CHECK(efg::audit_game_map(config.left, config.right, pos.map.pairs()).ok());
    CHECK_THROWS_AS(efg::game_step(config, pos, left({a(n(0), {})}), iso), efg::IllegalAisMove);
}

TEST_CASE("a single move of the m-pair") {
    const efg::GameConfig config = efg::make_game_config(GameKind::MPair, w(3));
    efg::NuStrategy iso(GameKind::MPair);
    efg::GamePosition pos = efg::new_game(config, iso);
    const NuDescriptor before = *pos.iso_state;
    pos = efg::game_step(config, std::move(pos), left({a(n(0), x({5}))}), iso);
    CHECK(pos.map.image(a(n(0), x({5}))) == Element(a(n(0), x({0, 1, 5}))));
    CHECK(pos.map.image(a(n(0), x({5}))) == efg::f_apply(*pos.iso_state, a(n(0), x({5}))));
    CHECK(efg::nu_extend(before, *pos.iso_state));
    CHECK(pos.stage == n(1));
}

TEST_CASE("illegal moves") {
    const efg::GameConfig config = efg::make_game_config(GameKind::MPair, w(3));
    efg::NuStrategy iso(GameKind::MPair);
    const efg::GamePosition pos = efg::new_game(config, iso);
    CHECK_THROWS_AS(efg::game_step(config, pos, left({a(n(0), x({1})), a(n(1), {}), a(n(2), {})}), iso),
                    efg::IllegalAisMove);
    const auto cut = efg::StructureHandle::plain_m().restricted(n(2));
    const efg::GameConfig bounded = efg::GameConfig::make(cut, cut, n(5), 1, {});
    efg::NuStrategy plain(GameKind::MPair);
    CHECK_THROWS_AS(efg::game_step(bounded, efg::new_game(bounded, plain), left({a(n(2), {})}), plain),
                    efg::IllegalAisMove);
    const efg::GameConfig small = efg::make_game_config(GameKind::MPair, n(1));
    efg::GamePosition p = efg::new_game(small, iso);
    p = efg::game_step(small, std::move(p), left({a(n(0), x({2}))}), iso);
    CHECK_THROWS_AS(efg::game_step(small, p, left({a(n(0), x({3}))}), iso), efg::IllegalAisMove);
}

TEST_CASE("the m-pair strategy") {
    const efg::GameConfig config = efg::make_game_config(GameKind::MPair, w(3));
    efg::NuStrategy iso(GameKind::MPair);
    efg::GamePosition pos = efg::new_game(config, iso);
    pos = efg::game_step(config, std::move(pos), left({a(w(), x({3}))}), iso);
    const NuDescriptor& nu = *pos.iso_state;
    CHECK(nu.domain_sup() == w() + n(1));
    const GroupElement drawn = nu.eval(w());
    REQUIRE(drawn.support().size() == 1);
    CHECK(efg::OmegaPartition(w(3)).member(Ordinal{}, drawn.support()[0]));
    CHECK(pos.map.image(a(w(), x({3}))) == Element(a(w(), x({3}) + drawn)));

    const AElement a1 = *config.left.distinguished;
    const AElement a2 = *config.right.distinguished;
    CHECK(a1 == a(n(0), x({1})));
    CHECK(a2 == a(n(0), x({0})));
    for (std::uint64_t seed = 0; seed < 10; ++seed)
        random_play(GameKind::MPair, seed, 30, true, [&](const efg::GameConfig& c, const efg::GamePosition& p) {
            CHECK(efg::f_apply(*p.iso_state, a1) == Element(a2));
            CHECK(efg::audit_game_map(c.left, c.right, p.map.pairs()).ok());
        });
}

TEST_CASE("the n-pair strategy") {
    for (std::uint64_t seed = 0; seed < 10; ++seed)
        random_play(GameKind::NPair, seed, 30, false, [](const efg::GameConfig& c, const efg::GamePosition& p) {
            const NuDescriptor& nu = *p.iso_state;
            CHECK(efg::lambda_recognizer(nu, nu.domain_sup()));
            CHECK(efg::star_condition(*c.left.p, nu, nu.domain_sup()));
            CHECK(efg::audit_game_map(c.left, c.right, p.map.pairs()).ok());
            // R1 between every pair of chosen A elements, checked directly
            for (const auto& [l1, r1] : p.map.pairs())
                for (const auto& [l2, r2] : p.map.pairs()) {
                    if (!efg::is_a(l1) || !efg::is_a(l2)) continue;
                    CHECK(efg::eval_R1(c.left, std::get<AElement>(l1), std::get<AElement>(l2)) ==
                          efg::eval_R1(c.right, std::get<AElement>(r1), std::get<AElement>(r2)));
                }
        });
}

TEST_CASE("set moves") {
    const efg::GameConfig config = efg::make_game_config(GameKind::MPair, w(3), 4);
    efg::NuStrategy base(GameKind::MPair);
    efg::SetMoveAdapter iso(base);
    efg::GamePosition pos = efg::new_game(config, iso);
    pos = efg::game_step(config, std::move(pos), left({a(n(0), x({2})), a(w(), x({3}))}), iso);
    CHECK(pos.history.size() == 1);
    CHECK(pos.map.image(a(n(0), x({2}))).has_value());
    CHECK(pos.map.image(a(w(), x({3}))).has_value());
    CHECK(pos.stage == n(1));

    const std::size_t before = pos.map.size();
    pos = efg::game_step(config, std::move(pos), AisMove{}, iso);
    CHECK(pos.stage == n(2));
    CHECK(pos.map.size() == before);

    // singleton moves through the adapter answer exactly like the base strategy
    efg::NuStrategy direct(GameKind::MPair);
    efg::GamePosition p1 = efg::new_game(config, iso);
    efg::GamePosition p2 = efg::new_game(config, direct);
    efg::RandomAis ais(77);
    for (int i = 0; i < 20; ++i) {
        const AisMove move = ais.choose(config, p1);
        p1 = efg::game_step(config, std::move(p1), move, iso);
        p2 = efg::game_step(config, std::move(p2), move, direct);
        CHECK(p1.iso_state == p2.iso_state);
        CHECK(p1.map.pairs() == p2.map.pairs());
    }
}

TEST_CASE("resuming") {
    const efg::GameConfig config = efg::make_game_config(GameKind::MPair, w(3));
    efg::NuStrategy iso(GameKind::MPair);
    std::mt19937_64 rng(5);
    const NuDescriptor state = efg::synthesize_resume_state(GameKind::MPair, w(3), Ordinal{}, efg::initial_nu(w(3)), w(), rng);
    CHECK_FALSE(state.domain_sup() < w());
    efg::GamePosition pos = efg::resume_at(config, w(), state, iso);
    efg::RandomAis ais(6);
    for (int i = 0; i < 10; ++i) pos = efg::game_step(config, std::move(pos), ais.choose(config, pos), iso, true);
    CHECK(pos.stage == w() + n(10));

    const efg::GamePosition fresh = efg::resume_at(config, Ordinal{}, efg::initial_nu(w(3)), iso);
    const efg::GamePosition started = efg::new_game(config, iso);
    CHECK(fresh.stage == started.stage);
    CHECK(fresh.iso_state == started.iso_state);
    CHECK(fresh.map.pairs() == started.map.pairs());

    // a repeated value breaks the strategy's invariants
    const GroupElement v = state.eval(n(3));
    CHECK_THROWS_AS(efg::resume_at(config, w(), state.with_override(n(5), v), iso), efg::InconsistentState);
    CHECK_THROWS_AS(efg::resume_at(config, w(4), state, iso), efg::InconsistentState);
    CHECK_THROWS_AS(efg::resume_at(config, w(), efg::initial_nu(w(3)).with_override(Ordinal{}, x({1})), iso),
                    efg::InconsistentState);

    // with a prior position the prior map survives
    efg::GamePosition prior = efg::new_game(config, iso);
    for (int i = 0; i < 5; ++i) prior = efg::game_step(config, std::move(prior), ais.choose(config, prior), iso);
    const NuDescriptor later =
        efg::synthesize_resume_state(GameKind::MPair, w(3), prior.stage, *prior.iso_state, w(1, 2) + n(1), rng);
    const efg::GamePosition resumed = efg::resume_at(config, w(1, 2) + n(1), later, iso, &prior);
    CHECK(resumed.map.pairs() == prior.map.pairs());
    CHECK(efg::nu_extend(*prior.iso_state, later));
    CHECK_THROWS_AS(efg::resume_at(config, w(), efg::initial_nu(w(3)), iso, &prior), efg::InconsistentState);
}

TEST_CASE("selfplay transcripts") {
    efg::SelfplayOptions opt;
    opt.setup.game = GameKind::NPair;
    opt.setup.length = w(3);
    opt.setup.seed = 7;
    opt.moves = 64;
    const efg::SelfplayResult r = efg::run_selfplay(opt);
    CHECK(r.ok);
    CHECK(r.moves_played == 64);
    CHECK(r.transcript.rfind("# engine: efgame/1.0\n", 0) == 0);
    CHECK(efg::run_selfplay(opt).transcript == r.transcript);
    CHECK(efg::replay_transcript(r.transcript).ok);

    opt.moves = 0;
    const efg::SelfplayResult empty = efg::run_selfplay(opt);
    CHECK(empty.ok);
    CHECK(strip_headers(empty.transcript).empty());
    CHECK(efg::replay_transcript(empty.transcript).ok);

    opt.moves = 5;
    opt.setup.length = n(3);
    CHECK(efg::run_selfplay(opt).moves_played == 3);
}

TEST_CASE("transcript lines") {
    const AisMove move{{a(n(0), x({1})), BElement::make(w(), 2, {{n(1), efg::Coset{2, 1}}})}, {a(w(2), {})}};
    CHECK(efg::parse_ais(efg::format_ais(move)) == move);
    CHECK(efg::format_ais(AisMove{}) == "L[] R[]");
    const efg::MoveLine line = efg::parse_move_line("w^1*1 | AIS: L[A(0; x1)] R[] | ISO: - | check: OK");
    CHECK(line.stage == w());
    CHECK(line.ais.left.size() == 1);
    CHECK_THROWS_AS(efg::parse_move_line("0 | AIS: L[] | check: OK"), efg::ParseError);
}

TEST_CASE("replay catches edits") {
    efg::SelfplayOptions opt;
    opt.setup.game = GameKind::MPair;
    opt.setup.length = w(3);
    opt.setup.seed = 3;
    opt.moves = 12;
    const std::string t = efg::run_selfplay(opt).transcript;
    const std::size_t first_move = t.find("\n0 | ") + 1;
    std::mt19937_64 rng(8);
    for (int i = 0; i < 200; ++i) {
        std::string mutated = t;
        const std::size_t pos = first_move + pick(rng, t.size() - first_move);
        if (mutated[pos] == '\n') continue;
        mutated[pos] = mutated[pos] == 'x' ? 'y' : static_cast<char>(mutated[pos] ^ 1);
        CHECK_FALSE(efg::replay_transcript(mutated).ok);
    }
    // an edited answer is reported at its own line
    const std::size_t arrow = t.find(" => ");
    std::string edited = t;
    edited.insert(t.find(')', arrow), "+x999");
    const efg::ReplayResult r = efg::replay_transcript(edited);
    CHECK_FALSE(r.ok);
    CHECK(r.line == static_cast<std::size_t>(std::count(t.begin(), t.begin() + arrow, '\n') + 1));

    std::string other = t;
    other.replace(other.find("efgame/1.0"), 10, "efgame/0.9");
    const efg::ReplayResult v = efg::replay_transcript(other);
    CHECK_FALSE(v.ok);
    CHECK(v.message.find("refusing") != std::string::npos);
}

TEST_CASE("resumed and set-move plays replay") {
    efg::SelfplayOptions opt;
    opt.setup.game = GameKind::MPair;
    opt.setup.length = w(3);
    opt.setup.seed = 11;
    opt.moves = 20;
    opt.resume_stage = w(2);
    const efg::SelfplayResult r = efg::run_selfplay(opt);
    CHECK(r.ok);
    CHECK(efg::replay_transcript(r.transcript).ok);

    opt.resume_stage.reset();
    opt.set_size = 8;
    opt.setup.sequenced = true;
    const efg::SelfplayResult s = efg::run_selfplay(opt);
    CHECK(s.ok);
    CHECK(efg::replay_transcript(s.transcript).ok);
}
