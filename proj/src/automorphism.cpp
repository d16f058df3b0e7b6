#include "efgame/automorphism.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <unordered_map>

#include "efgame/errors.hpp"

namespace efg {

namespace {

// Finite intervals longer than this are not enumerated point by point.
constexpr std::uint64_t kEnumerationCap = 1'000'000;
// Points inspected when hunting for a counterexample on an infinite piece.
constexpr std::uint64_t kWitnessSearch = 4096;

std::uint64_t slot_position(const SlotClass& slot, std::uint64_t c) {
    std::uint64_t prod, out;
    if (__builtin_mul_overflow(slot.stride, c, &prod) || __builtin_add_overflow(slot.offset, prod, &out))
        throw OutOfRange("slot position overflow");
    return out;
}

// c with slot position k, if k lies in the class.
std::optional<std::uint64_t> slot_code(const SlotClass& slot, std::uint64_t k) {
    if (k < slot.offset || slot.stride == 0) return k == slot.offset && slot.stride == 0
                                                       ? std::optional<std::uint64_t>(0)
                                                       : std::nullopt;
    if ((k - slot.offset) % slot.stride != 0) return std::nullopt;
    return (k - slot.offset) / slot.stride;
}

std::uint64_t drawn(const SlotClass& slot, std::uint64_t k, const std::optional<Ordinal>& palette) {
    if (!slot.color) return k;
    return OmegaPartition(*palette).element(*slot.color, k);
}

// Slot position k whose drawn natural is m, if m comes from this slot's color.
std::optional<std::uint64_t> undrawn(const SlotClass& slot, std::uint64_t m, const std::optional<Ordinal>& palette) {
    if (!slot.color) return m;
    const auto [color, k] = OmegaPartition(*palette).locate(m);
    if (color != *slot.color) return std::nullopt;
    return k;
}

template <typename Inj>
constexpr bool is_injection_v = std::is_same_v<Inj, BasisInjection> || std::is_same_v<Inj, PairInjection>;

const SlotClass* slot_of(const NuRule& r) {
    if (const auto* b = std::get_if<BasisInjection>(&r)) return &b->slot;
    if (const auto* p = std::get_if<PairInjection>(&r)) return &p->slot;
    return nullptr;
}

const Ordinal* origin_of(const NuRule& r) {
    if (const auto* b = std::get_if<BasisInjection>(&r)) return &b->origin;
    if (const auto* p = std::get_if<PairInjection>(&r)) return &p->origin;
    return nullptr;
}

const Ordinal* frame_of(const NuRule& r) {
    if (const auto* b = std::get_if<BasisInjection>(&r)) return &b->frame;
    if (const auto* p = std::get_if<PairInjection>(&r)) return &p->frame;
    return nullptr;
}

GroupElement pair_element(std::uint64_t e) {
    if (e > (UINT64_MAX - 1) / 2) throw OutOfRange("pair index overflow");
    return GroupElement::from_indices({2 * e, 2 * e + 1});
}

// The point of an injection segment that draws natural m (basis index, or
// pair index), ignoring overrides and the segment's own bounds.
std::optional<Ordinal> injection_point(const NuRule& rule, std::uint64_t m, const std::optional<Ordinal>& palette) {
    const SlotClass& slot = *slot_of(rule);
    const auto k = undrawn(slot, m, palette);
    if (!k) return std::nullopt;
    const auto c = slot_code(slot, *k);
    if (!c) return std::nullopt;
    const auto t = frame_decode(*frame_of(rule), *c);
    if (!t) return std::nullopt;
    return *origin_of(rule) + *t;
}

// Points of [lo, hi): all of them when finite, the first `limit` in frame
// order otherwise.
std::vector<Ordinal> piece_points(const Ordinal& lo, const Ordinal& hi, std::uint64_t limit) {
    const Ordinal len = ord_sub(lo, hi);
    std::vector<Ordinal> out;
    if (len.is_finite()) {
        const std::uint64_t n = std::min(len.finite_part(), limit);
        for (std::uint64_t i = 0; i < n; ++i) out.push_back(lo + Ordinal::finite(i));
    } else {
        for (std::uint64_t c = 0; c < limit; ++c) out.push_back(lo + segment_decode(len, c));
    }
    return out;
}

bool finite_enumerable(const Ordinal& lo, const Ordinal& hi) {
    const Ordinal len = ord_sub(lo, hi);
    return len.is_finite() && len.finite_part() <= kEnumerationCap;
}

}  // namespace

SlotClass dyadic_slot(unsigned s, std::optional<Ordinal> color) {
    if (s > 60) throw OutOfRange("dyadic slot class too large");
    return SlotClass{std::move(color), (std::uint64_t{1} << s) + 1, std::uint64_t{1} << (s + 1)};
}

std::uint64_t frame_code(const Ordinal& frame, const Ordinal& offset) {
    if (!(offset < frame)) throw OutOfRange("offset " + offset.to_string() + " outside frame " + frame.to_string());
    if (frame.is_finite()) return offset.finite_part();
    return segment_code(frame, offset);
}

std::optional<Ordinal> frame_decode(const Ordinal& frame, std::uint64_t code) {
    if (frame.is_finite()) {
        if (code >= frame.finite_part()) return std::nullopt;
        return Ordinal::finite(code);
    }
    return segment_decode(frame, code);
}

std::uint64_t injection_index(const SlotClass& slot, const Ordinal& origin, const Ordinal& frame,
                              const Ordinal& alpha, const std::optional<Ordinal>& palette) {
    const std::uint64_t c = frame_code(frame, ord_sub(origin, alpha));
    return drawn(slot, slot_position(slot, c), palette);
}

NuDescriptor::NuDescriptor(Ordinal sup, std::vector<Segment> segments, std::map<Ordinal, GroupElement> overrides,
                           std::optional<Ordinal> palette)
    : sup_(std::move(sup)),
      segments_(std::move(segments)),
      overrides_(std::move(overrides)),
      palette_(std::move(palette)) {
    Ordinal cursor;
    for (const auto& s : segments_) {
        if (s.lo != cursor) throw OutOfRange("segments must tile the domain (gap or overlap at " + s.lo.to_string() + ")");
        if (!(s.lo < s.hi)) throw OutOfRange("empty segment at " + s.lo.to_string());
        if (const auto* origin = origin_of(s.rule)) {
            const Ordinal& frame = *frame_of(s.rule);
            if (s.lo < *origin || *origin + frame < s.hi)
                throw OutOfRange("injection segment " + efg::to_string(s) + " leaves its frame");
            const SlotClass& slot = *slot_of(s.rule);
            if (slot.stride == 0) throw OutOfRange("slot stride must be positive");
            if (slot.color) {
                if (!palette_) throw OutOfRange("colored rule without a palette");
                if (!(*slot.color < *palette_)) throw OutOfRange("color outside the palette");
            }
        }
        cursor = s.hi;
    }
    if (cursor != sup_) throw OutOfRange("segments end at " + cursor.to_string() + ", domain is " + sup_.to_string());
    for (const auto& [alpha, g] : overrides_)
        if (!(alpha < sup_)) throw OutOfRange("override at " + alpha.to_string() + " outside the domain");
    if (palette_ && palette_->is_zero()) throw OutOfRange("palette must be nonempty");
}

const Segment& NuDescriptor::segment_at(const Ordinal& alpha) const {
    auto it = std::upper_bound(segments_.begin(), segments_.end(), alpha,
                               [](const Ordinal& a, const Segment& s) { return a < s.hi; });
    if (it == segments_.end()) throw OutOfDomain(alpha.to_string() + " is outside dom(nu) = [0," + sup_.to_string() + ")");
    return *it;
}

GroupElement NuDescriptor::eval(const Ordinal& alpha) const {
    if (!(alpha < sup_)) throw OutOfDomain(alpha.to_string() + " is outside dom(nu) = [0," + sup_.to_string() + ")");
    if (auto it = overrides_.find(alpha); it != overrides_.end()) return it->second;
    const Segment& s = segment_at(alpha);
    return std::visit(
        [&](const auto& r) -> GroupElement {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, ConstantRule>) {
                return r.value;
            } else if constexpr (std::is_same_v<R, BasisInjection>) {
                return GroupElement::basis(injection_index(r.slot, r.origin, r.frame, alpha, palette_));
            } else {
                return pair_element(injection_index(r.slot, r.origin, r.frame, alpha, palette_));
            }
        },
        s.rule);
}

Preimage NuDescriptor::supp_preimage(Index n, const Ordinal& beta) const {
    if (sup_ < beta) throw OutOfDomain("preimage bound " + beta.to_string() + " exceeds dom(nu)");
    Preimage out;
    for (const auto& [alpha, g] : overrides_)
        if (alpha < beta && g.contains(n)) out.points.push_back(alpha);
    for (const auto& s : segments_) {
        if (!(s.lo < beta)) break;
        const Ordinal end = std::min(s.hi, beta);
        if (const auto* c = std::get_if<ConstantRule>(&s.rule)) {
            if (!c->value.contains(n)) continue;
            const Ordinal len = ord_sub(s.lo, end);
            if (!len.is_finite()) {
                out.infinite = true;
                out.points.clear();
                return out;
            }
            if (len.finite_part() > kEnumerationCap) throw OutOfRange("finite preimage too large to list");
            for (std::uint64_t i = 0; i < len.finite_part(); ++i) {
                Ordinal a = s.lo + Ordinal::finite(i);
                if (!overrides_.count(a)) out.points.push_back(std::move(a));
            }
            continue;
        }
        const std::uint64_t m = std::holds_alternative<BasisInjection>(s.rule) ? n : n / 2;
        const auto a = injection_point(s.rule, m, palette_);
        if (a && s.lo <= *a && *a < end && !overrides_.count(*a)) out.points.push_back(*a);
    }
    std::sort(out.points.begin(), out.points.end());
    return out;
}

bool NuDescriptor::is_valid() const {
    const Ordinal omega = Ordinal::omega_power(1);
    for (const auto& s : segments_) {
        const auto* c = std::get_if<ConstantRule>(&s.rule);
        if (!c || c->value.is_zero()) continue;
        const Ordinal lo_omega = s.lo + omega;
        if (lo_omega < s.hi) return false;
        if (lo_omega == s.hi && s.hi < sup_) return false;
    }
    return true;
}

NuDescriptor NuDescriptor::restrict_to(const Ordinal& gamma) const {
    if (sup_ < gamma) throw OutOfDomain("cannot restrict to " + gamma.to_string() + " beyond dom(nu)");
    std::vector<Segment> segs;
    for (const auto& s : segments_) {
        if (!(s.lo < gamma)) break;
        Segment t = s;
        if (gamma < t.hi) t.hi = gamma;
        segs.push_back(std::move(t));
    }
    std::map<Ordinal, GroupElement> ovr;
    for (const auto& [a, g] : overrides_)
        if (a < gamma) ovr.emplace(a, g);
    return NuDescriptor(gamma, std::move(segs), std::move(ovr), palette_);
}

NuDescriptor NuDescriptor::append(Ordinal hi, NuRule rule) const {
    auto segs = segments_;
    segs.push_back(Segment{sup_, hi, std::move(rule)});
    return NuDescriptor(std::move(hi), std::move(segs), overrides_, palette_);
}

NuDescriptor NuDescriptor::with_override(const Ordinal& alpha, GroupElement value) const {
    auto ovr = overrides_;
    ovr[alpha] = std::move(value);
    return NuDescriptor(sup_, segments_, std::move(ovr), palette_);
}

namespace {

std::string slot_args(const SlotClass& slot, const Ordinal& origin, const Ordinal& frame) {
    return (slot.color ? slot.color->to_string() : std::string("-")) + "," + std::to_string(slot.offset) + "," +
           std::to_string(slot.stride) + "," + origin.to_string() + "," + frame.to_string();
}

}  // namespace

std::string to_string(const NuRule& r) {
    return std::visit(
        [](const auto& x) -> std::string {
            using R = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<R, ConstantRule>) return "CONST(" + x.value.to_string() + ")";
            else if constexpr (std::is_same_v<R, BasisInjection>) return "BINJ(" + slot_args(x.slot, x.origin, x.frame) + ")";
            else return "PINJ(" + slot_args(x.slot, x.origin, x.frame) + ")";
        },
        r);
}

std::string to_string(const Segment& s) {
    return "[" + s.lo.to_string() + "," + s.hi.to_string() + ")=" + to_string(s.rule);
}

std::string NuDescriptor::to_string() const {
    std::string out = "{sup=" + sup_.to_string() + "; palette=" + (palette_ ? palette_->to_string() : "-");
    for (const auto& s : segments_) out += "; " + efg::to_string(s);
    for (const auto& [a, g] : overrides_) out += "; @" + a.to_string() + "=" + g.to_string();
    return out + "}";
}

namespace {

std::string_view trim_view(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_on(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i)
        if (i == s.size() || s[i] == sep) {
            out.push_back(trim_view(s.substr(start, i - start)));
            start = i + 1;
        }
    return out;
}

std::uint64_t parse_natural(std::string_view s) {
    if (s.empty()) throw ParseError("expected a natural", 0);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) throw ParseError("expected a digit", i);
        v = v * 10 + static_cast<std::uint64_t>(s[i] - '0');
    }
    return v;
}

NuRule parse_rule(std::string_view text) {
    const auto open = text.find('(');
    if (open == std::string_view::npos || text.back() != ')') throw ParseError("malformed rule", 0);
    const auto tag = text.substr(0, open);
    const auto args = text.substr(open + 1, text.size() - open - 2);
    if (tag == "CONST") return ConstantRule{GroupElement::parse(trim_view(args))};
    const auto parts = split_on(args, ',');
    if (parts.size() != 5) throw ParseError("injection rule needs 5 arguments", open);
    SlotClass slot;
    if (parts[0] != "-") slot.color = Ordinal::parse(parts[0]);
    slot.offset = parse_natural(parts[1]);
    slot.stride = parse_natural(parts[2]);
    Ordinal origin = Ordinal::parse(parts[3]);
    Ordinal frame = Ordinal::parse(parts[4]);
    if (tag == "BINJ") return BasisInjection{slot, origin, frame};
    if (tag == "PINJ") return PairInjection{slot, origin, frame};
    throw ParseError("unknown rule tag '" + std::string(tag) + "'", 0);
}

}  // namespace

NuDescriptor NuDescriptor::parse(std::string_view text) {
    text = trim_view(text);
    if (text.size() < 2 || text.front() != '{' || text.back() != '}') throw ParseError("descriptor must be braced", 0);
    std::optional<Ordinal> sup;
    std::optional<Ordinal> palette;
    std::vector<Segment> segs;
    std::map<Ordinal, GroupElement> ovr;
    for (auto item : split_on(text.substr(1, text.size() - 2), ';')) {
        if (item.rfind("sup=", 0) == 0) {
            sup = Ordinal::parse(item.substr(4));
        } else if (item.rfind("palette=", 0) == 0) {
            if (item.substr(8) != "-") palette = Ordinal::parse(item.substr(8));
        } else if (!item.empty() && item.front() == '@') {
            const auto eq = item.find('=');
            if (eq == std::string_view::npos) throw ParseError("override needs '='", 0);
            ovr.emplace(Ordinal::parse(item.substr(1, eq - 1)), GroupElement::parse(item.substr(eq + 1)));
        } else if (!item.empty() && item.front() == '[') {
            const auto comma = item.find(',');
            const auto close = item.find(")=");
            if (comma == std::string_view::npos || close == std::string_view::npos || close < comma)
                throw ParseError("segment needs '[lo,hi)=RULE'", 0);
            segs.push_back(Segment{Ordinal::parse(item.substr(1, comma - 1)),
                                   Ordinal::parse(item.substr(comma + 1, close - comma - 1)),
                                   parse_rule(item.substr(close + 2))});
        } else {
            throw ParseError("unknown descriptor item '" + std::string(item) + "'", 0);
        }
    }
    if (!sup) throw ParseError("descriptor lacks sup", 0);
    try {
        return NuDescriptor(*sup, std::move(segs), std::move(ovr), std::move(palette));
    } catch (const OutOfRange& e) {
        throw ParseError(std::string("inconsistent descriptor: ") + e.what(), 0);
    }
}

GroupElement nu_eval(const NuDescriptor& nu, const Ordinal& alpha) {
    return nu.eval(alpha);
}

Preimage supp_preimage(const NuDescriptor& nu, Index n, const Ordinal& beta) {
    return nu.supp_preimage(n, beta);
}

Element f_apply(const NuDescriptor& nu, const Element& e) {
    if (const auto* a = std::get_if<AElement>(&e)) {
        if (!(a->level < nu.domain_sup()))
            throw OutOfDomain("A-level " + a->level.to_string() + " outside dom(nu)");
        return AElement{a->level, a->value + nu.eval(a->level)};
    }
    const auto& eta = std::get<BElement>(e);
    if (nu.domain_sup() < eta.level()) throw OutOfDomain("B-level " + eta.level().to_string() + " exceeds dom(nu)");
    const Preimage hits = nu.supp_preimage(eta.base(), eta.level());
    if (hits.infinite)
        throw IllegalImage("image of " + to_string(e) + " leaves G0_" + std::to_string(eta.base()) +
                           " at infinitely many coordinates");
    std::map<Ordinal, Coset> devs;
    for (const auto& [beta, c] : eta.deviations()) devs.emplace(beta, coset_translate(nu.eval(beta), c));
    for (const auto& alpha : hits.points)
        if (!eta.deviations().count(alpha)) devs.emplace(alpha, Coset{eta.base(), 1});
    return BElement::make(eta.level(), eta.base(), std::move(devs));
}

bool f_involution_check(const NuDescriptor& nu, const Element& e) {
    return f_apply(nu, f_apply(nu, e)) == e;
}

namespace {

bool rules_identical(const NuRule& a, const NuRule& b, const NuDescriptor& na, const NuDescriptor& nb) {
    if (!(a == b)) return false;
    const SlotClass* slot = slot_of(a);
    return !slot || !slot->color || na.palette() == nb.palette();
}

}  // namespace

bool nu_extend(const NuDescriptor& nu1, const NuDescriptor& nu2) {
    const Ordinal& sup = nu1.domain_sup();
    if (nu2.domain_sup() < sup) return false;
    std::set<Ordinal> cuts{Ordinal{}, sup};
    for (const auto* nu : {&nu1, &nu2})
        for (const auto& s : nu->segments()) {
            if (s.lo < sup) cuts.insert(s.lo);
            if (s.hi < sup) cuts.insert(s.hi);
        }
    std::set<Ordinal> special;
    for (const auto* nu : {&nu1, &nu2})
        for (const auto& [a, g] : nu->overrides())
            if (a < sup) special.insert(a);
    for (const auto& a : special)
        if (nu1.eval(a) != nu2.eval(a)) return false;

    for (auto it = cuts.begin(); std::next(it) != cuts.end(); ++it) {
        const Ordinal& lo = *it;
        const Ordinal& hi = *std::next(it);
        auto find = [&](const NuDescriptor& nu) -> const Segment& {
            for (const auto& s : nu.segments())
                if (s.lo <= lo && lo < s.hi) return s;
            throw OutOfDomain("no segment covers " + lo.to_string());
        };
        const Segment& s1 = find(nu1);
        const Segment& s2 = find(nu2);
        if (rules_identical(s1.rule, s2.rule, nu1, nu2)) continue;
        if (finite_enumerable(lo, hi)) {
            for (const auto& a : piece_points(lo, hi, kEnumerationCap))
                if (!special.count(a) && nu1.eval(a) != nu2.eval(a)) return false;
            continue;
        }
        // Infinite piece, finitely many exempt points.
        const bool c1 = std::holds_alternative<ConstantRule>(s1.rule);
        const bool c2 = std::holds_alternative<ConstantRule>(s2.rule);
        if (c1 || c2 || s1.rule.index() != s2.rule.index()) {
            if (c1 && c2) return std::get<ConstantRule>(s1.rule) == std::get<ConstantRule>(s2.rule);
            return false;
        }
        for (const auto& a : piece_points(lo, hi, kWitnessSearch))
            if (!special.count(a) && nu1.eval(a) != nu2.eval(a)) return false;
        throw Undecided("cannot compare " + to_string(s1.rule) + " with " + to_string(s2.rule) + " on [" +
                        lo.to_string() + "," + hi.to_string() + ")");
    }
    return true;
}

namespace {

GroupElement periodic_image(const GroupHom& g, Index n) {
    std::vector<Index> idx;
    for (const auto& t : g.terms()) idx.push_back(t.residues[n % t.period]);
    return GroupElement::from_indices(std::move(idx));
}

}  // namespace

bool star_condition(const PDescriptor& p, const NuDescriptor& nu, const Ordinal& gamma) {
    if (nu.domain_sup() < gamma) throw OutOfDomain("star condition bound exceeds dom(nu)");
    auto point_ok = [&](const Ordinal& a) {
        return hom_apply(p.hom(a), nu.eval(a)) == nu.eval(p.beta(a));
    };
    std::set<Ordinal> special;
    for (const auto& [a, g] : nu.overrides())
        if (a < gamma) special.insert(a);
    for (const auto& [a, b] : p.beta_overrides())
        if (a < gamma) special.insert(a);
    for (const auto& [a, h] : p.hom_overrides())
        if (a < gamma) special.insert(a);
    for (const auto& a : special)
        if (!point_ok(a)) return false;

    const GroupHom& g = p.hom_default();
    const bool beta_zero = p.beta_default() == PDescriptor::BetaRule::Zero;

    for (const auto& s : nu.segments()) {
        if (!(s.lo < gamma)) break;
        const Ordinal end = std::min(s.hi, gamma);
        if (finite_enumerable(s.lo, end)) {
            for (const auto& a : piece_points(s.lo, end, kEnumerationCap))
                if (!special.count(a) && !point_ok(a)) return false;
            continue;
        }
        // Infinite piece: the default rules apply at all but finitely many points.
        if (const auto* c = std::get_if<ConstantRule>(&s.rule)) {
            const GroupElement target = beta_zero ? nu.eval(Ordinal{}) : c->value;
            if (hom_apply(g, c->value) != target) return false;
            continue;
        }
        if (!beta_zero && g.is_identity()) continue;

        bool decided = false;
        if (beta_zero && g.is_periodic()) {
            const GroupElement target = nu.eval(Ordinal{});
            // Points whose value meets an index with an explicit image.
            for (const auto& [idx, img] : g.overrides()) {
                const std::uint64_t m = std::holds_alternative<BasisInjection>(s.rule) ? idx : idx / 2;
                const auto a = injection_point(s.rule, m, nu.palette());
                if (a && s.lo <= *a && *a < end && !special.count(*a) && !point_ok(*a)) return false;
            }
            const std::uint64_t period = g.period();
            bool all_residues = true;
            if (std::holds_alternative<BasisInjection>(s.rule)) {
                for (std::uint64_t r = 0; r < period && all_residues; ++r)
                    all_residues = periodic_image(g, r) == target;
            } else {
                for (std::uint64_t r = 0; r < period && all_residues; r += 1) {
                    if ((r % 2) != 0 && period % 2 == 0) continue;  // 2e mod period is even when period is even
                    all_residues = periodic_image(g, r) + periodic_image(g, r + 1) == target;
                }
            }
            decided = all_residues;
        }
        if (decided) continue;
        for (const auto& a : piece_points(s.lo, end, kWitnessSearch))
            if (!special.count(a) && !point_ok(a)) return false;
        throw Undecided("star condition on " + to_string(s) + " is outside the decidable fragment");
    }
    return true;
}

std::optional<std::uint64_t> pair_index_of(const GroupElement& g) {
    const auto& s = g.support();
    if (s.size() != 2 || s[0] % 2 != 0 || s[1] != s[0] + 1) return std::nullopt;
    return s[0] / 2;
}

namespace {

struct ExplicitValue {
    Ordinal at;
    GroupElement value;
};

// Non-overridden points of a segment: all of them when fewer than `want`
// exist, otherwise `want` of them.
std::vector<Ordinal> free_points(const Segment& s, const std::map<Ordinal, GroupElement>& ovr, std::size_t want) {
    std::vector<Ordinal> out;
    const Ordinal len = ord_sub(s.lo, s.hi);
    std::uint64_t limit = want + ovr.size() + 1;
    if (len.is_finite()) limit = std::min<std::uint64_t>(limit, len.finite_part());
    for (auto& a : piece_points(s.lo, s.hi, limit)) {
        if (ovr.count(a)) continue;
        out.push_back(std::move(a));
        if (out.size() >= want) break;
    }
    return out;
}

struct Progression {
    std::uint64_t offset;
    std::uint64_t stride;
    std::optional<std::uint64_t> count;  // number of terms; nullopt = infinite
};

std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
    std::int64_t g = m, x = 0, x1 = 1, a1 = a % m;
    if (a1 < 0) a1 += m;
    std::int64_t b = a1;
    while (b != 0) {
        const std::int64_t q = g / b;
        std::tie(g, b) = std::make_pair(b, g - q * b);
        std::tie(x, x1) = std::make_pair(x1, x - q * x1);
    }
    return ((x % m) + m) % m;
}

// First common term and spacing of two arithmetic progressions.
std::optional<std::pair<unsigned __int128, unsigned __int128>> intersect(const Progression& p, const Progression& q) {
    using u128 = unsigned __int128;
    const std::uint64_t g = std::gcd(p.stride, q.stride);
    const std::uint64_t a = p.offset, b = q.offset;
    const std::uint64_t diff = a > b ? a - b : b - a;
    if (diff % g != 0) return std::nullopt;
    const u128 lcm = static_cast<u128>(p.stride / g) * q.stride;
    // Solve a + p.stride * t = b (mod q.stride).
    const std::uint64_t m = q.stride / g;
    std::uint64_t t = 0;
    if (m > 1) {
        const std::int64_t inv = mod_inverse(static_cast<std::int64_t>((p.stride / g) % m), static_cast<std::int64_t>(m));
        const std::int64_t rhs = static_cast<std::int64_t>(((b % q.stride + q.stride) - a % q.stride) % q.stride / g % m);
        t = static_cast<std::uint64_t>((static_cast<__int128>(rhs) * inv) % static_cast<std::int64_t>(m));
    }
    u128 x = static_cast<u128>(a) + static_cast<u128>(p.stride) * t;
    const u128 floor_v = std::max(a, b);
    if (x < floor_v) x += ((floor_v - x + lcm - 1) / lcm) * lcm;
    auto last = [](const Progression& r) -> std::optional<u128> {
        if (!r.count) return std::nullopt;
        if (*r.count == 0) return static_cast<u128>(0);
        return static_cast<u128>(r.offset) + static_cast<u128>(r.stride) * (*r.count - 1);
    };
    const auto lp = last(p), lq = last(q);
    if ((p.count && *p.count == 0) || (q.count && *q.count == 0)) return std::nullopt;
    std::optional<u128> top;
    if (lp) top = *lp;
    if (lq) top = top ? std::min(*top, *lq) : *lq;
    if (top && x > *top) return std::nullopt;
    return std::make_pair(x, lcm);
}

Progression progression_of(const NuRule& r) {
    const SlotClass& slot = *slot_of(r);
    const Ordinal& frame = *frame_of(r);
    Progression p{slot.offset, slot.stride, std::nullopt};
    if (frame.is_finite()) p.count = frame.finite_part();
    return p;
}

}  // namespace

std::optional<std::pair<Ordinal, Ordinal>> find_repetition(const NuDescriptor& nu) {
    const auto& ovr = nu.overrides();
    std::vector<ExplicitValue> explicit_values;
    for (const auto& [a, g] : ovr) explicit_values.push_back({a, g});
    std::vector<const Segment*> families;
    for (const auto& s : nu.segments()) {
        if (const auto* c = std::get_if<ConstantRule>(&s.rule)) {
            const auto pts = free_points(s, ovr, 2);
            if (pts.size() >= 2) return std::make_pair(pts[0], pts[1]);
            if (pts.size() == 1) explicit_values.push_back({pts[0], c->value});
        } else {
            families.push_back(&s);
        }
    }
    std::unordered_map<GroupElement, Ordinal> seen;
    for (const auto& ev : explicit_values) {
        auto [it, fresh] = seen.emplace(ev.value, ev.at);
        if (!fresh) return std::make_pair(it->second, ev.at);
    }
    auto free_in = [&](const Segment& s, const Ordinal& a) { return s.lo <= a && a < s.hi && !ovr.count(a); };
    for (const auto& ev : explicit_values) {
        for (const Segment* s : families) {
            std::optional<std::uint64_t> m;
            if (std::holds_alternative<BasisInjection>(s->rule)) {
                if (ev.value.support().size() == 1) m = ev.value.support()[0];
            } else {
                m = pair_index_of(ev.value);
            }
            if (!m) continue;
            const auto a = injection_point(s->rule, *m, nu.palette());
            if (a && free_in(*s, *a)) return std::make_pair(ev.at, *a);
        }
    }
    for (std::size_t i = 0; i < families.size(); ++i) {
        for (std::size_t j = i + 1; j < families.size(); ++j) {
            const Segment& s1 = *families[i];
            const Segment& s2 = *families[j];
            if (s1.rule.index() != s2.rule.index()) continue;
            const SlotClass& k1 = *slot_of(s1.rule);
            const SlotClass& k2 = *slot_of(s2.rule);
            const bool m_basis = std::holds_alternative<BasisInjection>(s1.rule);
            if (k1.color.has_value() != k2.color.has_value()) {
                // Compare through the drawn naturals when one side is finite.
                const Segment* fin = finite_enumerable(s1.lo, s1.hi) ? &s1 : finite_enumerable(s2.lo, s2.hi) ? &s2 : nullptr;
                if (!fin) throw Undecided("colored and uncolored injection families on infinite ranges");
                const Segment* other = fin == &s1 ? &s2 : &s1;
                for (const auto& a : piece_points(fin->lo, fin->hi, kEnumerationCap)) {
                    if (ovr.count(a)) continue;
                    const GroupElement v = nu.eval(a);
                    const std::uint64_t m = m_basis ? v.support()[0] : *pair_index_of(v);
                    const auto b = injection_point(other->rule, m, nu.palette());
                    if (b && free_in(*other, *b)) return std::make_pair(a, *b);
                }
                continue;
            }
            if (k1.color && *k1.color != *k2.color) continue;
            const auto hit = intersect(progression_of(s1.rule), progression_of(s2.rule));
            if (!hit) continue;
            const auto [first, spacing] = *hit;
            const Progression p1 = progression_of(s1.rule), p2 = progression_of(s2.rule);
            bool finite_hits = p1.count.has_value() || p2.count.has_value();
            for (std::uint64_t t = 0; t < (finite_hits ? kEnumerationCap : kWitnessSearch); ++t) {
                const unsigned __int128 k = first + spacing * t;
                if (k > UINT64_MAX) break;
                const auto kk = static_cast<std::uint64_t>(k);
                const auto c1 = slot_code(k1, kk);
                const auto c2 = slot_code(k2, kk);
                if (!c1 || !c2) break;
                const auto t1 = frame_decode(*frame_of(s1.rule), *c1);
                const auto t2 = frame_decode(*frame_of(s2.rule), *c2);
                if (!t1 || !t2) break;
                const Ordinal a1 = *origin_of(s1.rule) + *t1;
                const Ordinal a2 = *origin_of(s2.rule) + *t2;
                if (free_in(s1, a1) && free_in(s2, a2)) return std::make_pair(a1, a2);
            }
            const bool whole1 = s1.lo == *origin_of(s1.rule) && s1.hi == *origin_of(s1.rule) + *frame_of(s1.rule);
            const bool whole2 = s2.lo == *origin_of(s2.rule) && s2.hi == *origin_of(s2.rule) + *frame_of(s2.rule);
            if (!finite_hits && !(whole1 && whole2))
                throw Undecided("injection families " + to_string(s1) + " and " + to_string(s2) +
                                " overlap in slot space beyond the search bound");
        }
    }
    return std::nullopt;
}

bool lambda_recognizer(const NuDescriptor& nu, const Ordinal& gamma) {
    const NuDescriptor r = nu.restrict_to(gamma);
    if (gamma.is_zero()) return true;
    if (r.eval(Ordinal{}) != GroupElement::from_indices({0, 1})) return false;
    for (const auto& [a, g] : r.overrides())
        if (!a.is_zero() && !pair_index_of(g)) return false;
    for (const auto& s : r.segments()) {
        if (std::holds_alternative<PairInjection>(s.rule)) continue;
        const auto pts = free_points(s, r.overrides(), 2);
        const bool has_nonzero_point =
            std::any_of(pts.begin(), pts.end(), [](const Ordinal& a) { return !a.is_zero(); });
        if (!has_nonzero_point) continue;
        if (std::holds_alternative<BasisInjection>(s.rule)) return false;
        if (!pair_index_of(std::get<ConstantRule>(s.rule).value)) return false;
    }
    return !find_repetition(r).has_value();
}

}  // namespace efg
