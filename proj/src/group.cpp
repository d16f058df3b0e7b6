#include "efgame/group.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "efgame/errors.hpp"

namespace efg {

GroupElement GroupElement::basis(Index n) {
    GroupElement g;
    g.support_.push_back(n);
    return g;
}

GroupElement GroupElement::from_indices(std::vector<Index> indices) {
    std::sort(indices.begin(), indices.end());
    GroupElement g;
    for (std::size_t i = 0; i < indices.size();) {
        std::size_t j = i;
        while (j < indices.size() && indices[j] == indices[i]) ++j;
        if ((j - i) % 2 == 1) g.support_.push_back(indices[i]);
        i = j;
    }
    return g;
}

GroupElement GroupElement::from_mask(std::uint64_t mask) {
    GroupElement g;
    for (Index n = 0; mask != 0; ++n, mask >>= 1)
        if (mask & 1U) g.support_.push_back(n);
    return g;
}

bool GroupElement::contains(Index n) const noexcept {
    return std::binary_search(support_.begin(), support_.end(), n);
}

std::uint64_t GroupElement::mask() const {
    std::uint64_t m = 0;
    for (auto n : support_) {
        if (n >= 64) throw OutOfRange("support index " + std::to_string(n) + " does not fit a mask");
        m |= std::uint64_t{1} << n;
    }
    return m;
}

GroupElement& GroupElement::operator+=(const GroupElement& other) {
    std::vector<Index> out;
    out.reserve(support_.size() + other.support_.size());
    std::set_symmetric_difference(support_.begin(), support_.end(), other.support_.begin(),
                                  other.support_.end(), std::back_inserter(out));
    support_ = std::move(out);
    return *this;
}

std::string GroupElement::to_string() const {
    if (support_.empty()) return "0";
    std::string out;
    for (auto n : support_) {
        if (!out.empty()) out += '+';
        out += 'x' + std::to_string(n);
    }
    return out;
}

namespace {

Index parse_index(std::string_view s, std::size_t& pos) {
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
        throw ParseError("expected an index", pos);
    Index v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
        const Index digit = static_cast<Index>(s[pos] - '0');
        if (v > (UINT64_MAX - digit) / 10) throw ParseError("index overflow", pos);
        v = v * 10 + digit;
        ++pos;
    }
    return v;
}

}  // namespace

GroupElement GroupElement::parse(std::string_view text) {
    if (text == "0") return {};
    std::vector<Index> indices;
    std::size_t pos = 0;
    while (true) {
        if (pos >= text.size() || text[pos] != 'x') throw ParseError("expected 'x<n>'", pos);
        ++pos;
        indices.push_back(parse_index(text, pos));
        if (pos == text.size()) break;
        if (text[pos] != '+') throw ParseError("expected '+'", pos);
        ++pos;
    }
    return from_indices(std::move(indices));
}

std::string Coset::to_string() const {
    return "G" + std::to_string(level) + "_" + std::to_string(n);
}

Coset Coset::parse(std::string_view text) {
    std::size_t pos = 0;
    if (text.size() < 4 || text[0] != 'G') throw ParseError("expected 'G<l>_<n>'", 0);
    pos = 1;
    if (text[pos] != '0' && text[pos] != '1') throw ParseError("coset level must be 0 or 1", pos);
    const unsigned level = static_cast<unsigned>(text[pos] - '0');
    ++pos;
    if (text[pos] != '_') throw ParseError("expected '_'", pos);
    ++pos;
    const Index n = parse_index(text, pos);
    if (pos != text.size()) throw ParseError("trailing characters after coset", pos);
    return Coset{n, level};
}

GroupElement add(const GroupElement& a, const GroupElement& b) {
    return a + b;
}

Coset coset_translate(const GroupElement& x, const Coset& c) {
    return Coset{c.n, c.level ^ (x.contains(c.n) ? 1U : 0U)};
}

bool coset_member(const GroupElement& x, const Coset& c) {
    return (x.contains(c.n) ? 1U : 0U) == c.level;
}

Index IndexMap::operator()(Index n) const {
    return slope * (n / period) + residues[n % period];
}

GroupHom::GroupHom(std::vector<IndexMap> terms, std::map<Index, GroupElement> overrides)
    : terms_(std::move(terms)), overrides_(std::move(overrides)) {
    for (const auto& t : terms_)
        if (t.period == 0 || t.residues.size() != t.period)
            throw OutOfRange("index map needs period >= 1 and one residue per class");
}

GroupHom GroupHom::identity() {
    return GroupHom({IndexMap{}});
}

GroupHom GroupHom::zero() {
    return GroupHom(std::vector<IndexMap>{});
}

GroupHom GroupHom::hat(IndexMap h) {
    return GroupHom({std::move(h)});
}

GroupElement GroupHom::image(Index n) const {
    if (auto it = overrides_.find(n); it != overrides_.end()) return it->second;
    std::vector<Index> indices;
    indices.reserve(terms_.size());
    for (const auto& t : terms_) indices.push_back(t(n));
    return GroupElement::from_indices(std::move(indices));
}

GroupElement GroupHom::apply(const GroupElement& x) const {
    GroupElement out;
    for (auto n : x.support()) out += image(n);
    return out;
}

std::vector<Index> GroupHom::preimage(Index m, Index bound) const {
    std::vector<Index> candidates;
    for (const auto& [n, img] : overrides_)
        if (n < bound && img.contains(m)) candidates.push_back(n);
    for (const auto& t : terms_) {
        for (std::uint64_t r = 0; r < t.period; ++r) {
            const Index res = t.residues[r];
            if (t.slope == 0) {
                if (res != m) continue;
                for (Index n = r; n < bound; n += t.period) candidates.push_back(n);
            } else if (m >= res && (m - res) % t.slope == 0) {
                const unsigned __int128 n =
                    static_cast<unsigned __int128>((m - res) / t.slope) * t.period + r;
                if (n < bound) candidates.push_back(static_cast<Index>(n));
            }
        }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    std::vector<Index> out;
    for (auto n : candidates)
        if (image(n).contains(m)) out.push_back(n);
    return out;
}

bool GroupHom::is_identity() const {
    if (terms_.size() != 1 || !(terms_[0] == IndexMap{})) return false;
    return std::all_of(overrides_.begin(), overrides_.end(),
                       [](const auto& kv) { return kv.second == GroupElement::basis(kv.first); });
}

bool GroupHom::is_periodic() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const IndexMap& t) { return t.slope == 0; });
}

std::uint64_t GroupHom::period() const {
    std::uint64_t p = 1;
    for (const auto& t : terms_) p = std::lcm(p, t.period);
    return p;
}

GroupElement hom_apply(const GroupHom& g, const GroupElement& x) {
    return g.apply(x);
}

}  // namespace efg
