#include "efgame/game.hpp"

#include <algorithm>

#include "efgame/errors.hpp"

namespace efg {

bool PartialMap::add(const Element& l, const Element& r) {
    auto f = forward_.find(l);
    auto b = backward_.find(r);
    if (f != forward_.end() || b != backward_.end())
        return f != forward_.end() && b != backward_.end() && f->second == r && b->second == l;
    forward_.emplace(l, r);
    backward_.emplace(r, l);
    pairs_.emplace_back(l, r);
    return true;
}

std::optional<Element> PartialMap::image(const Element& l) const {
    auto it = forward_.find(l);
    if (it == forward_.end()) return std::nullopt;
    return it->second;
}

std::optional<Element> PartialMap::preimage(const Element& r) const {
    auto it = backward_.find(r);
    if (it == backward_.end()) return std::nullopt;
    return it->second;
}

GameConfig GameConfig::make(StructureHandle left, StructureHandle right, Ordinal length,
                            std::uint64_t move_size_bound, std::vector<ElementPair> initial_map) {
    left.validate();
    right.validate();
    if (move_size_bound == 0) throw InconsistentState("move size bound must be positive");
    GameConfig c{std::move(left), std::move(right), std::move(length), move_size_bound, std::move(initial_map)};
    PartialMap m;
    for (const auto& [l, r] : c.initial_map)
        if (!m.add(l, r)) throw InconsistentState("initial map is not an injective function");
    const AuditReport audit = audit_game_map(c.left, c.right, c.initial_map);
    if (!audit.ok()) throw InconsistentState("initial map is not a partial isomorphism: " + audit.violations.front());
    return c;
}

GamePosition new_game(const GameConfig& config, const IsoPlayer& iso) {
    GamePosition pos;
    pos.iso_state = iso.initial_state(config);
    for (const auto& [l, r] : config.initial_map) pos.map.add(l, r);
    return pos;
}

GamePosition game_step(const GameConfig& config, GamePosition pos, const AisMove& move, IsoPlayer& iso,
                       bool strict) {
    if (!(pos.stage < config.length))
        throw IllegalAisMove("the game of length " + config.length.to_string() + " is over at stage " +
                             pos.stage.to_string());
    if (move.size() > config.move_size_bound)
        throw IllegalAisMove("move of size " + std::to_string(move.size()) + " exceeds the bound " +
                             std::to_string(config.move_size_bound));
    for (const auto& e : move.left)
        if (!element_in_structure(config.left, e)) throw IllegalAisMove(to_string(e) + " is not in the left structure");
    for (const auto& e : move.right)
        if (!element_in_structure(config.right, e)) throw IllegalAisMove(to_string(e) + " is not in the right structure");

    IsoResponse resp;
    try {
        resp = iso.respond(config, pos, move);
    } catch (const IsoStuck&) {
        throw;
    } catch (const Error& e) {
        throw IsoStuck(std::string("ISO has no answer: ") + e.what());
    }

    if (pos.iso_state.has_value() != resp.nu.has_value()) throw IsoStuck("ISO changed its kind of state");
    if (resp.nu) {
        try {
            if (!nu_extend(*pos.iso_state, *resp.nu)) throw IsoStuck("new nu does not extend the previous one");
        } catch (const Undecided& e) {
            throw IsoStuck(std::string("cannot confirm the extension: ") + e.what());
        }
        if (!resp.nu->is_valid()) throw IsoStuck("new nu is not valid");
        if (strict) {
            try {
                iso.validate_state(config, pos.stage.successor(), *resp.nu, pos.map);
            } catch (const InconsistentState& e) {
                throw IsoStuck(std::string("strict check failed: ") + e.what());
            }
        }
    }
    const std::size_t first_new = pos.map.size();
    for (const auto& [l, r] : resp.answers)
        if (!pos.map.add(l, r))
            throw IsoStuck("answer " + to_string(l) + " => " + to_string(r) + " contradicts the map");
    for (const auto& e : move.left)
        if (!pos.map.image(e)) throw IsoStuck(to_string(e) + " left unanswered");
    for (const auto& e : move.right)
        if (!pos.map.preimage(e)) throw IsoStuck(to_string(e) + " left unanswered");
    if (pos.map.size() > first_new) {
        const AuditReport audit = audit_game_map(config.left, config.right, pos.map.pairs(), first_new);
        if (!audit.ok()) throw IsoStuck("not a partial isomorphism: " + audit.violations.front());
    }
    if (resp.nu) pos.iso_state = resp.nu;
    pos.history.push_back(MoveRecord{pos.stage, move, std::move(resp)});
    pos.stage = pos.stage.successor();
    return pos;
}

GamePosition resume_at(const GameConfig& config, const Ordinal& stage, const NuDescriptor& state,
                       const IsoPlayer& iso, const GamePosition* prior) {
    if (config.length < stage)
        throw InconsistentState("stage " + stage.to_string() + " lies beyond the game length");
    GamePosition pos;
    if (prior) {
        if (stage < prior->stage) throw InconsistentState("cannot resume before the prior position");
        if (!prior->iso_state) throw InconsistentState("prior position carries no state");
        try {
            if (!nu_extend(*prior->iso_state, state))
                throw InconsistentState("state does not extend the prior position's state");
        } catch (const Undecided& e) {
            throw InconsistentState(std::string("cannot confirm the extension: ") + e.what());
        }
        pos = *prior;
    } else {
        for (const auto& [l, r] : config.initial_map) pos.map.add(l, r);
    }
    iso.validate_state(config, stage, state, pos.map);
    pos.stage = stage;
    pos.iso_state = state;
    return pos;
}

}  // namespace efg
