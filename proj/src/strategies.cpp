#include "efgame/strategies.hpp"

#include <algorithm>
#include <set>

#include "efgame/errors.hpp"

namespace efg {

namespace {

const GroupElement& pair01() {
    static const GroupElement g = GroupElement::from_indices({0, 1});
    return g;
}

std::optional<Ordinal> color_of(const NuRule& r) {
    if (const auto* b = std::get_if<BasisInjection>(&r)) return b->slot.color;
    if (const auto* p = std::get_if<PairInjection>(&r)) return p->slot.color;
    return std::nullopt;
}

// s with dyadic_slot(s) at this offset, if the slot is dyadic.
std::optional<unsigned> dyadic_level(const SlotClass& slot) {
    for (unsigned s = 0; s <= 60; ++s) {
        const SlotClass d = dyadic_slot(s, slot.color);
        if (d.offset == slot.offset && d.stride == slot.stride) return s;
    }
    return std::nullopt;
}

const SlotClass* slot_of(const NuRule& r) {
    if (const auto* b = std::get_if<BasisInjection>(&r)) return &b->slot;
    if (const auto* p = std::get_if<PairInjection>(&r)) return &p->slot;
    return nullptr;
}

NuRule injection(GameKind kind, SlotClass slot, Ordinal origin, Ordinal frame) {
    if (kind == GameKind::MPair) return BasisInjection{std::move(slot), std::move(origin), std::move(frame)};
    return PairInjection{std::move(slot), std::move(origin), std::move(frame)};
}

Ordinal random_ordinal(std::mt19937_64& rng, std::uint64_t max_degree, std::uint64_t max_coeff,
                       std::uint64_t max_finite) {
    std::vector<Ordinal::Term> terms;
    for (std::uint64_t e = max_degree; e >= 1; --e) {
        const std::uint64_t c = draw_below(rng, max_coeff + 1);
        if (c > 0) terms.push_back({e, c});
    }
    const std::uint64_t f = draw_below(rng, max_finite + 1);
    if (f > 0) terms.push_back({0, f});
    return Ordinal::from_terms(std::move(terms));
}

}  // namespace

std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n) {
    if (n == 0) throw OutOfRange("draw_below needs a positive bound");
    return rng() % n;
}

std::string to_string(GameKind kind) {
    return kind == GameKind::MPair ? "m-pair" : "n-pair";
}

GameKind parse_game_kind(std::string_view text) {
    if (text == "m-pair") return GameKind::MPair;
    if (text == "n-pair") return GameKind::NPair;
    throw ParseError("unknown game '" + std::string(text) + "' (expected m-pair or n-pair)", 0);
}

GameConfig make_game_config(GameKind kind, Ordinal length, std::uint64_t move_size_bound) {
    const AElement x0{Ordinal{}, GroupElement::basis(0)};
    const AElement x1{Ordinal{}, GroupElement::basis(1)};
    const StructureHandle base = kind == GameKind::MPair ? StructureHandle::plain_m() : make_N();
    const AElement a1 = kind == GameKind::MPair ? x1 : x0;
    const AElement a2 = kind == GameKind::MPair ? x0 : x1;
    return GameConfig::make(base.pointed(a1), base.pointed(a2), std::move(length), move_size_bound, {{a1, a2}});
}

NuDescriptor initial_nu(const Ordinal& length) {
    std::optional<Ordinal> palette;
    if (!length.is_zero()) palette = length;
    return NuDescriptor(Ordinal::finite(1), {Segment{Ordinal{}, Ordinal::finite(1), ConstantRule{}}},
                        {{Ordinal{}, pair01()}}, palette);
}

std::optional<NuDescriptor> NuStrategy::initial_state(const GameConfig& config) const {
    return initial_nu(config.length);
}

IsoResponse NuStrategy::respond(const GameConfig&, const GamePosition& pos, const AisMove& move) {
    if (!pos.iso_state) throw InconsistentState("strategy needs a nu state");
    const NuDescriptor& nu = *pos.iso_state;
    if (!nu.palette()) throw InconsistentState("state has no palette");
    const Ordinal& color = pos.stage;

    Ordinal gamma = nu.domain_sup().successor();
    for (const auto* side : {&move.left, &move.right})
        for (const auto& e : *side) gamma = std::max(gamma, level_of(e).successor());

    unsigned s = 0;
    for (const auto& seg : nu.segments()) {
        const auto c = color_of(seg.rule);
        if (!c || *c != color) continue;
        const auto level = dyadic_level(*slot_of(seg.rule));
        if (!level) throw InconsistentState("segment with a non-dyadic slot in the current color");
        s = std::max(s, *level + 1);
    }
    const Ordinal& lo = nu.domain_sup();
    IsoResponse resp;
    resp.nu = nu.append(gamma, injection(kind_, dyadic_slot(s, color), lo, ord_sub(lo, gamma)));
    for (const auto& e : move.left) resp.answers.emplace_back(e, f_apply(*resp.nu, e));
    for (const auto& e : move.right) resp.answers.emplace_back(f_apply(*resp.nu, e), e);
    return resp;
}

void NuStrategy::validate_state(const GameConfig& config, const Ordinal& stage, const NuDescriptor& nu,
                                const PartialMap& map) const {
    auto fail = [](const std::string& why) { throw InconsistentState(why); };
    if (nu.domain_sup().is_zero()) fail("nu has an empty domain");
    if (!nu.is_valid()) fail("nu is not valid");
    if (nu.eval(Ordinal{}) != pair01()) fail("nu(0) must be x0+x1");
    if (!config.length.is_zero() && nu.palette() != std::optional<Ordinal>(config.length))
        fail("palette must equal the game length");

    // A value drawn from color c with c < stage can never be drawn again.
    auto check_value = [&](const Ordinal& at, const GroupElement& v) {
        std::uint64_t m;
        if (kind_ == GameKind::MPair) {
            if (v.support().size() != 1) fail("nu(" + at.to_string() + ") = " + v.to_string() + " is not a basis vector");
            m = v.support()[0];
        } else {
            const auto e = pair_index_of(v);
            if (!e) fail("nu(" + at.to_string() + ") = " + v.to_string() + " is not a consecutive pair");
            m = *e;
        }
        if (!nu.palette()) fail("nu has explicit values but no palette");
        const auto [c, k] = OmegaPartition(*nu.palette()).locate(m);
        if (!(c < stage) || k < 2)
            fail("nu(" + at.to_string() + ") = " + v.to_string() + " draws from a color still in use");
    };
    for (const auto& [a, v] : nu.overrides())
        if (!a.is_zero()) check_value(a, v);
    for (const auto& seg : nu.segments()) {
        if (const auto* c = std::get_if<ConstantRule>(&seg.rule)) {
            const Ordinal len = ord_sub(seg.lo, seg.hi);
            if (!len.is_finite()) fail("constant segment " + to_string(seg) + " is infinite");
            for (std::uint64_t i = 0; i < len.finite_part(); ++i) {
                const Ordinal a = seg.lo + Ordinal::finite(i);
                if (!a.is_zero() && !nu.overrides().count(a)) check_value(a, c->value);
            }
            continue;
        }
        const bool basis = std::holds_alternative<BasisInjection>(seg.rule);
        if (basis != (kind_ == GameKind::MPair)) fail("segment " + to_string(seg) + " has the wrong kind");
        const auto color = color_of(seg.rule);
        if (!color) fail("segment " + to_string(seg) + " is uncolored");
        if (!(*color < stage)) fail("segment " + to_string(seg) + " uses a color not yet reached");
        if (!dyadic_level(*slot_of(seg.rule))) fail("segment " + to_string(seg) + " has a non-dyadic slot");
    }
    try {
        if (auto rep = find_repetition(nu))
            fail("nu repeats a value at " + rep->first.to_string() + " and " + rep->second.to_string());
        if (kind_ == GameKind::NPair) {
            if (!lambda_recognizer(nu, nu.domain_sup())) fail("nu is not in Lambda");
            if (!star_condition(n_descriptor(), nu, nu.domain_sup())) fail("nu breaks the star condition");
        }
    } catch (const Undecided& e) {
        fail(std::string("undecided: ") + e.what());
    }
    for (const auto& [l, r] : map.pairs()) {
        try {
            if (f_apply(nu, l) != r) fail("map pair " + to_string(l) + " => " + to_string(r) + " disagrees with f_nu");
        } catch (const InconsistentState&) {
            throw;
        } catch (const Error& e) {
            fail("map pair " + to_string(l) + " => " + to_string(r) + ": " + e.what());
        }
    }
}

std::optional<NuDescriptor> SetMoveAdapter::initial_state(const GameConfig& config) const {
    return base_.initial_state(config);
}

IsoResponse SetMoveAdapter::respond(const GameConfig& config, const GamePosition& pos, const AisMove& move) {
    if (move.size() <= 1) return base_.respond(config, pos, move);
    GamePosition scratch{pos.stage, pos.iso_state, pos.map, {}};
    IsoResponse out;
    auto one = [&](AisMove single) {
        IsoResponse r = base_.respond(config, scratch, single);
        for (const auto& [l, rr] : r.answers) {
            if (!scratch.map.add(l, rr))
                throw IsoStuck("sequenced answer " + to_string(l) + " => " + to_string(rr) + " contradicts the map");
            out.answers.emplace_back(l, rr);
        }
        if (r.nu) scratch.iso_state = r.nu;
        out.nu = r.nu;
    };
    for (const auto& e : move.left) one(AisMove{{e}, {}});
    for (const auto& e : move.right) one(AisMove{{}, {e}});
    return out;
}

void SetMoveAdapter::validate_state(const GameConfig& config, const Ordinal& stage, const NuDescriptor& state,
                                    const PartialMap& map) const {
    base_.validate_state(config, stage, state, map);
}

AisMove RandomAis::choose(const GameConfig&, const GamePosition& pos) {
    std::vector<Ordinal> levels{Ordinal{}};
    std::vector<Ordinal> a_levels{Ordinal{}};
    for (const auto& [l, r] : pos.map.pairs()) {
        levels.push_back(level_of(l));
        if (is_a(l)) a_levels.push_back(level_of(l));
    }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    std::sort(a_levels.begin(), a_levels.end());
    a_levels.erase(std::unique(a_levels.begin(), a_levels.end()), a_levels.end());

    auto pick = [&](const std::vector<Ordinal>& v) { return v[draw_below(rng_, v.size())]; };
    auto fresh_level = [&]() {
        if (draw_below(rng_, 3) == 0) return Ordinal::finite(draw_below(rng_, 6));
        return random_ordinal(rng_, 2, 2, 4);
    };
    auto element = [&](bool left) -> Element {
        const auto& pairs = pos.map.pairs();
        if (!pairs.empty() && draw_below(rng_, 8) == 0) {
            const auto& p = pairs[draw_below(rng_, pairs.size())];
            return left ? p.first : p.second;
        }
        const Ordinal level = draw_below(rng_, 2) == 0 ? pick(levels) : fresh_level();
        if (draw_below(rng_, 2) == 0) {
            std::vector<Index> idx;
            const std::uint64_t n = draw_below(rng_, 5);
            for (std::uint64_t i = 0; i < n; ++i) idx.push_back(draw_below(rng_, 32));
            return AElement{level, GroupElement::from_indices(std::move(idx))};
        }
        std::map<Ordinal, Coset> devs;
        const std::uint64_t n = draw_below(rng_, 4);
        for (std::uint64_t i = 0; i < n; ++i) {
            Ordinal at = draw_below(rng_, 2) == 0 ? pick(a_levels) : fresh_level();
            if (!(at < level)) continue;
            devs[at] = Coset{draw_below(rng_, 32), static_cast<unsigned>(draw_below(rng_, 2))};
        }
        return BElement::make(level, draw_below(rng_, 32), std::move(devs));
    };
    AisMove move;
    const std::uint64_t count =
        max_set_size_ <= 1 ? 1 : draw_below(rng_, std::min<std::uint64_t>(max_set_size_, 64) + 1);
    for (std::uint64_t i = 0; i < count; ++i) {
        const bool left = draw_below(rng_, 2) == 0;
        Element e = element(left);
        auto& side = left ? move.left : move.right;
        if (std::find(side.begin(), side.end(), e) == side.end()) side.push_back(std::move(e));
    }
    return move;
}

NuDescriptor synthesize_resume_state(GameKind kind, const Ordinal& length, const Ordinal& prior_stage,
                                     const NuDescriptor& prior, const Ordinal& stage, std::mt19937_64& rng) {
    if (stage < prior_stage) throw InconsistentState("cannot synthesize a state for an earlier stage");
    if (!(stage < length) && stage != length) throw InconsistentState("stage lies beyond the game length");
    if (stage == prior_stage) return prior;
    if (!prior.palette()) throw InconsistentState("prior state has no palette");

    std::set<Ordinal> used;
    auto fresh_color = [&]() -> Ordinal {
        for (int attempt = 0; attempt < 10000; ++attempt) {
            Ordinal c = prior_stage + random_ordinal(rng, stage.degree(), 2, 8);
            if (c < stage && used.insert(c).second) return c;
        }
        throw InconsistentState("no unused color below " + stage.to_string());
    };

    NuDescriptor nu = prior;
    const std::uint64_t pieces = 1 + draw_below(rng, 3);
    for (std::uint64_t i = 0; i < pieces; ++i) {
        const Ordinal lo = nu.domain_sup();
        Ordinal hi = lo + random_ordinal(rng, 2, 1, 5);
        if (hi == lo) hi = lo.successor();
        if (i + 1 == pieces && hi < stage) hi = stage;
        nu = nu.append(hi, injection(kind, dyadic_slot(0, fresh_color()), lo, ord_sub(lo, hi)));
    }
    if (draw_below(rng, 2) == 0) {
        const Ordinal at = prior.domain_sup();
        const std::uint64_t m = OmegaPartition(*prior.palette()).element(fresh_color(), 2 + draw_below(rng, 50));
        const GroupElement v =
            kind == GameKind::MPair ? GroupElement::basis(m) : GroupElement::from_indices({2 * m, 2 * m + 1});
        nu = nu.with_override(at, v);
    }
    return nu;
}

}  // namespace efg
