#include "efgame/structures.hpp"

#include <cctype>
#include <string>
#include <vector>

#include "efgame/errors.hpp"

namespace efg {

BElement BElement::make(Ordinal level, Index base, std::map<Ordinal, Coset> deviations) {
    for (const auto& [beta, c] : deviations)
        if (!(beta < level))
            throw OutOfRange("deviation at " + beta.to_string() + " outside B-level " + level.to_string());
    BElement b;
    if (level.is_finite()) {
        const std::uint64_t len = level.finite_part();
        const Coset old_default{base, 0};
        for (std::uint64_t i = 0; i < len; ++i) {
            const Ordinal beta = Ordinal::finite(i);
            auto it = deviations.find(beta);
            const Coset c = it == deviations.end() ? old_default : it->second;
            if (c != Coset{0, 0}) b.deviations_.emplace(beta, c);
        }
        b.base_ = 0;
    } else {
        for (auto& [beta, c] : deviations)
            if (c != Coset{base, 0}) b.deviations_.emplace(beta, c);
        b.base_ = base;
    }
    b.level_ = std::move(level);
    return b;
}

Coset BElement::at(const Ordinal& beta) const {
    if (!(beta < level_))
        throw OutOfRange("coordinate " + beta.to_string() + " outside B-level " + level_.to_string());
    auto it = deviations_.find(beta);
    return it == deviations_.end() ? Coset{base_, 0} : it->second;
}

const Ordinal& level_of(const Element& e) {
    if (const auto* a = std::get_if<AElement>(&e)) return a->level;
    return std::get<BElement>(e).level();
}

bool is_a(const Element& e) {
    return std::holds_alternative<AElement>(e);
}

bool is_b(const Element& e) {
    return std::holds_alternative<BElement>(e);
}

std::string to_string(const Element& e) {
    if (const auto* a = std::get_if<AElement>(&e))
        return "A(" + a->level.to_string() + "; " + a->value.to_string() + ")";
    const auto& b = std::get<BElement>(e);
    std::string out = "B(" + b.level().to_string() + "; " + std::to_string(b.base());
    if (!b.deviations().empty()) {
        out += "; ";
        bool first = true;
        for (const auto& [beta, c] : b.deviations()) {
            if (!first) out += ", ";
            first = false;
            out += beta.to_string() + "↦" + c.to_string();
        }
    }
    return out + ")";
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Splits on `sep` and remembers where each piece began in the original text.
std::vector<std::pair<std::string_view, std::size_t>> split(std::string_view s, char sep, std::size_t base) {
    std::vector<std::pair<std::string_view, std::size_t>> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.emplace_back(s.substr(start, i - start), base + start);
            start = i + 1;
        }
    }
    return out;
}

template <typename F>
auto rebase(F&& f, std::string_view piece, std::size_t offset) {
    const auto t = trim(piece);
    const std::size_t lead = static_cast<std::size_t>(t.data() - piece.data());
    try {
        return f(t);
    } catch (const ParseError& e) {
        throw ParseError("malformed element component '" + std::string(t) + "'", offset + lead + e.position());
    }
}

}  // namespace

Element parse_element(std::string_view text) {
    const std::string_view s = trim(text);
    const std::size_t lead = static_cast<std::size_t>(s.data() - text.data());
    if (s.size() < 3 || (s[0] != 'A' && s[0] != 'B') || s[1] != '(')
        throw ParseError("element must start with 'A(' or 'B('", lead);
    if (s.back() != ')') throw ParseError("element must end with ')'", lead + s.size());
    const std::string_view body = s.substr(2, s.size() - 3);
    const auto parts = split(body, ';', lead + 2);
    auto ordinal = [](std::string_view t) { return Ordinal::parse(t); };
    if (s[0] == 'A') {
        if (parts.size() != 2) throw ParseError("A-element needs 'level; value'", lead + 2);
        Ordinal level = rebase(ordinal, parts[0].first, parts[0].second);
        GroupElement value = rebase([](std::string_view t) { return GroupElement::parse(t); }, parts[1].first,
                                    parts[1].second);
        return AElement{std::move(level), std::move(value)};
    }
    if (parts.size() != 2 && parts.size() != 3)
        throw ParseError("B-element needs 'level; base' or 'level; base; deviations'", lead + 2);
    Ordinal level = rebase(ordinal, parts[0].first, parts[0].second);
    const Index base = rebase(
        [](std::string_view t) {
            if (t.empty()) throw ParseError("expected a base index", 0);
            Index v = 0;
            for (std::size_t i = 0; i < t.size(); ++i) {
                if (!std::isdigit(static_cast<unsigned char>(t[i]))) throw ParseError("expected a digit", i);
                v = v * 10 + static_cast<Index>(t[i] - '0');
            }
            return v;
        },
        parts[1].first, parts[1].second);
    std::map<Ordinal, Coset> deviations;
    if (parts.size() == 3 && !trim(parts[2].first).empty()) {
        for (const auto& [entry, off] : split(parts[2].first, ',', parts[2].second)) {
            std::string_view e = entry;
            std::size_t arrow = e.find("↦");
            std::size_t arrow_len = 3;
            if (arrow == std::string_view::npos) {
                arrow = e.find("->");
                arrow_len = 2;
            }
            if (arrow == std::string_view::npos) throw ParseError("deviation needs 'beta↦G<l>_<n>'", off);
            Ordinal beta = rebase(ordinal, e.substr(0, arrow), off);
            Coset c = rebase([](std::string_view t) { return Coset::parse(t); }, e.substr(arrow + arrow_len),
                             off + arrow + arrow_len);
            if (!deviations.emplace(std::move(beta), c).second) throw ParseError("duplicate deviation", off);
        }
    }
    try {
        return BElement::make(std::move(level), base, std::move(deviations));
    } catch (const OutOfRange& e) {
        throw ParseError(e.what(), lead);
    }
}

PDescriptor::PDescriptor(BetaRule beta_default, GroupHom hom_default, std::map<Ordinal, Ordinal> beta_overrides,
                         std::map<Ordinal, GroupHom> hom_overrides)
    : beta_default_(beta_default),
      hom_default_(std::move(hom_default)),
      beta_overrides_(std::move(beta_overrides)),
      hom_overrides_(std::move(hom_overrides)) {
    for (const auto& [alpha, beta] : beta_overrides_)
        if (alpha < beta) throw OutOfRange("beta_alpha must not exceed alpha (at " + alpha.to_string() + ")");
}

Ordinal PDescriptor::beta(const Ordinal& alpha) const {
    if (auto it = beta_overrides_.find(alpha); it != beta_overrides_.end()) return it->second;
    return beta_default_ == BetaRule::Zero ? Ordinal{} : alpha;
}

const GroupHom& PDescriptor::hom(const Ordinal& alpha) const {
    if (auto it = hom_overrides_.find(alpha); it != hom_overrides_.end()) return it->second;
    return hom_default_;
}

IndexMap parity_index_map() {
    return IndexMap{2, 0, {0, 1}};
}

PDescriptor n_descriptor() {
    return PDescriptor(PDescriptor::BetaRule::Zero, GroupHom::hat(parity_index_map()));
}

StructureHandle StructureHandle::plain_m() {
    return StructureHandle{};
}

StructureHandle StructureHandle::expanded(PDescriptor p) {
    StructureHandle s;
    s.kind = Kind::Expanded;
    s.p = std::move(p);
    return s;
}

StructureHandle StructureHandle::restricted(Ordinal gamma) const {
    StructureHandle s = *this;
    s.cutoff = std::move(gamma);
    return s;
}

StructureHandle StructureHandle::pointed(AElement a) const {
    StructureHandle s = *this;
    s.distinguished = std::move(a);
    return s;
}

void StructureHandle::validate() const {
    if (kind == Kind::PlainM && p) throw OutOfRange("plain M carries no expansion descriptor");
    if (kind == Kind::Expanded && !p) throw OutOfRange("expanded structure requires a descriptor");
}

StructureHandle make_N() {
    return StructureHandle::expanded(n_descriptor());
}

bool element_in_structure(const StructureHandle& s, const Element& e) {
    return !s.cutoff || level_of(e) < *s.cutoff;
}

bool eval_P1(const StructureHandle&, const Element& e) {
    return is_a(e);
}

bool eval_P2(const StructureHandle&, const Element& e) {
    return is_b(e);
}

bool eval_E1(const StructureHandle&, const Element& a, const Element& b, bool strict) {
    if (!is_a(a) || !is_a(b)) {
        if (strict && is_a(a) != is_a(b)) throw SortMismatch("E1 applied across sorts");
        return false;
    }
    return level_of(a) <= level_of(b);
}

bool eval_E2(const StructureHandle&, const Element& a, const Element& b, bool strict) {
    if (!is_b(a) || !is_b(b)) {
        if (strict && is_b(a) != is_b(b)) throw SortMismatch("E2 applied across sorts");
        return false;
    }
    return level_of(a) <= level_of(b);
}

Element eval_F(const StructureHandle&, const GroupElement& y, const Element& e) {
    if (const auto* a = std::get_if<AElement>(&e)) return AElement{a->level, a->value + y};
    return e;
}

bool eval_R(const StructureHandle&, const BElement& eta, const AElement& a) {
    if (!(a.level < eta.level())) return false;
    return coset_member(a.value, eta.at(a.level));
}

bool eval_R1(const StructureHandle& s, const AElement& e2, const AElement& e1) {
    if (!s.is_expanded() || !s.p) throw OutOfRange("R1 is only interpreted in expanded structures");
    if (e2.level != s.p->beta(e1.level)) return false;
    return hom_apply(s.p->hom(e1.level), e1.value) == e2.value;
}

}  // namespace efg

std::size_t std::hash<efg::Element>::operator()(const efg::Element& e) const noexcept {
    std::size_t h = std::hash<efg::Ordinal>{}(efg::level_of(e));
    if (const auto* a = std::get_if<efg::AElement>(&e)) {
        h ^= std::hash<efg::GroupElement>{}(a->value) * 31 + 1;
    } else {
        const auto& b = std::get<efg::BElement>(e);
        h ^= (b.base() + 0x51ed27) * 0x9e3779b97f4a7c15ULL;
        for (const auto& [beta, c] : b.deviations())
            h = h * 1099511628211ULL ^ (std::hash<efg::Ordinal>{}(beta) + c.n * 2 + c.level);
    }
    return h;
}
