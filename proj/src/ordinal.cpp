#include "efgame/ordinal.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "efgame/errors.hpp"

namespace efg {

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out;
    if (__builtin_add_overflow(a, b, &out)) throw OutOfRange("natural overflow in addition");
    return out;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out;
    if (__builtin_mul_overflow(a, b, &out)) throw OutOfRange("natural overflow in multiplication");
    return out;
}

}  // namespace

Ordinal Ordinal::finite(std::uint64_t n) {
    return omega_power(0, n);
}

Ordinal Ordinal::omega_power(std::uint64_t exponent, std::uint64_t coeff) {
    Ordinal o;
    if (coeff != 0) o.terms_.push_back({exponent, coeff});
    return o;
}

Ordinal Ordinal::from_terms(std::vector<Term> terms) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (terms[i].coeff == 0) throw OutOfRange("CNF coefficient must be positive");
        if (i > 0 && terms[i - 1].exponent <= terms[i].exponent)
            throw OutOfRange("CNF exponents must be strictly decreasing");
    }
    Ordinal o;
    o.terms_ = std::move(terms);
    return o;
}

bool Ordinal::is_finite() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent == 0);
}

bool Ordinal::is_limit() const noexcept {
    return !terms_.empty() && terms_.back().exponent > 0;
}

bool Ordinal::is_successor() const noexcept {
    return !terms_.empty() && terms_.back().exponent == 0;
}

std::uint64_t Ordinal::finite_part() const noexcept {
    return coeff_at(0);
}

std::uint64_t Ordinal::as_finite() const {
    if (!is_finite()) throw OutOfRange("ordinal " + to_string() + " is not finite");
    return finite_part();
}

std::uint64_t Ordinal::degree() const noexcept {
    return terms_.empty() ? 0 : terms_.front().exponent;
}

std::uint64_t Ordinal::coeff_at(std::uint64_t exponent) const noexcept {
    for (const auto& t : terms_)
        if (t.exponent == exponent) return t.coeff;
    return 0;
}

Ordinal Ordinal::successor() const {
    return *this + finite(1);
}

std::string Ordinal::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& t : terms_) {
        if (!out.empty()) out += '+';
        out += "w^" + std::to_string(t.exponent) + "*" + std::to_string(t.coeff);
    }
    return out;
}

namespace {

struct OrdinalParser {
    std::string_view s;
    std::size_t pos = 0;

    bool at_end() const { return pos >= s.size(); }
    char peek() const { return at_end() ? '\0' : s[pos]; }

    std::uint64_t natural() {
        if (at_end() || !std::isdigit(static_cast<unsigned char>(peek())))
            throw ParseError("expected a natural number", pos);
        std::uint64_t v = 0;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
            v = checked_add(checked_mul(v, 10), static_cast<std::uint64_t>(peek() - '0'));
            ++pos;
        }
        return v;
    }

    Ordinal term() {
        if (peek() == 'w') {
            ++pos;
            std::uint64_t exponent = 1;
            std::uint64_t coeff = 1;
            if (peek() == '^') {
                ++pos;
                exponent = natural();
            }
            if (peek() == '*') {
                ++pos;
                coeff = natural();
            }
            return Ordinal::omega_power(exponent, coeff);
        }
        return Ordinal::finite(natural());
    }

    Ordinal parse() {
        if (s.empty()) throw ParseError("empty ordinal", 0);
        Ordinal acc = term();
        while (!at_end()) {
            if (peek() != '+') throw ParseError("unexpected character in ordinal", pos);
            ++pos;
            acc = acc + term();
        }
        return acc;
    }
};

}  // namespace

Ordinal Ordinal::parse(std::string_view text) {
    OrdinalParser p{text};
    return p.parse();
}

Ordinal operator+(const Ordinal& a, const Ordinal& b) {
    if (b.terms_.empty()) return a;
    const auto lead = b.terms_.front();
    Ordinal out;
    std::uint64_t carried = 0;
    for (const auto& t : a.terms_) {
        if (t.exponent > lead.exponent) out.terms_.push_back(t);
        else if (t.exponent == lead.exponent) carried = t.coeff;
        else break;
    }
    out.terms_.push_back({lead.exponent, checked_add(carried, lead.coeff)});
    out.terms_.insert(out.terms_.end(), b.terms_.begin() + 1, b.terms_.end());
    return out;
}

std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
    const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& x = a.terms_[i];
        const auto& y = b.terms_[i];
        if (x.exponent != y.exponent) return x.exponent <=> y.exponent;
        if (x.coeff != y.coeff) return x.coeff <=> y.coeff;
    }
    return a.terms_.size() <=> b.terms_.size();
}

Cmp ord_compare(const Ordinal& a, const Ordinal& b) {
    const auto c = a <=> b;
    if (c < 0) return Cmp::LT;
    if (c > 0) return Cmp::GT;
    return Cmp::EQ;
}

Ordinal ord_add(const Ordinal& a, const Ordinal& b) {
    return a + b;
}

Ordinal ord_successor(const Ordinal& a) {
    return a.successor();
}

bool ord_is_limit(const Ordinal& a) {
    return a.is_limit();
}

Ordinal ord_sub(const Ordinal& a, const Ordinal& c) {
    if (c < a) throw OutOfRange("ord_sub: " + a.to_string() + " exceeds " + c.to_string());
    const auto& at = a.terms();
    const auto& ct = c.terms();
    std::size_t i = 0;
    while (i < at.size() && i < ct.size() && at[i] == ct[i]) ++i;
    if (i == ct.size()) return Ordinal{};  // a == c
    std::vector<Ordinal::Term> rest;
    if (i < at.size() && at[i].exponent == ct[i].exponent) {
        // a <= c forces at[i].coeff < ct[i].coeff here.
        rest.push_back({ct[i].exponent, ct[i].coeff - at[i].coeff});
        ++i;
        rest.insert(rest.end(), ct.begin() + static_cast<std::ptrdiff_t>(i), ct.end());
    } else {
        rest.insert(rest.end(), ct.begin() + static_cast<std::ptrdiff_t>(i), ct.end());
    }
    return Ordinal::from_terms(std::move(rest));
}

std::uint64_t cantor_pair(std::uint64_t x, std::uint64_t y) {
    const std::uint64_t s = checked_add(x, y);
    const unsigned __int128 tri = static_cast<unsigned __int128>(s) * (s + 1) / 2 + y;
    if (tri > static_cast<unsigned __int128>(UINT64_MAX)) throw OutOfRange("cantor_pair overflow");
    return static_cast<std::uint64_t>(tri);
}

std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t z) {
    auto tri = [](std::uint64_t w) {
        return static_cast<unsigned __int128>(w) * (w + 1) / 2;
    };
    auto w = static_cast<std::uint64_t>((std::sqrt(8.0L * static_cast<long double>(z) + 1.0L) - 1.0L) / 2.0L);
    while (w > 0 && tri(w) > z) --w;
    while (tri(w + 1) <= z) ++w;
    const auto y = static_cast<std::uint64_t>(z - tri(w));
    return {w - y, y};
}

std::uint64_t tuple_encode(const std::vector<std::uint64_t>& components) {
    if (components.empty()) return 0;
    std::uint64_t code = components.back();
    for (std::size_t i = components.size() - 1; i-- > 0;) code = cantor_pair(components[i], code);
    return code;
}

std::vector<std::uint64_t> tuple_decode(std::size_t len, std::uint64_t code) {
    std::vector<std::uint64_t> out;
    out.reserve(len);
    for (std::size_t i = 0; i + 1 < len; ++i) {
        const auto [head, rest] = cantor_unpair(code);
        out.push_back(head);
        code = rest;
    }
    if (len > 0) out.push_back(code);
    return out;
}

namespace {

struct BlockLayout {
    std::uint64_t blocks = 0;           // m
    std::uint64_t infinite_blocks = 0;  // p
};

BlockLayout layout_of(const Ordinal& zeta) {
    BlockLayout l;
    for (const auto& t : zeta.terms()) {
        l.blocks = checked_add(l.blocks, t.coeff);
        if (t.exponent > 0) l.infinite_blocks = checked_add(l.infinite_blocks, t.coeff);
    }
    return l;
}

// Start ordinal and type exponent of block number j (0-based).
std::pair<Ordinal, std::uint64_t> block_at(const Ordinal& zeta, std::uint64_t j) {
    Ordinal prefix;
    for (const auto& t : zeta.terms()) {
        if (j < t.coeff) return {prefix + Ordinal::omega_power(t.exponent, j), t.exponent};
        j -= t.coeff;
        prefix = prefix + Ordinal::omega_power(t.exponent, t.coeff);
    }
    throw OutOfRange("block index beyond ordinal");
}

void require_infinite(const Ordinal& zeta) {
    if (zeta.is_finite()) throw OutOfRange("segment coding needs an infinite ordinal, got " + zeta.to_string());
}

}  // namespace

std::uint64_t segment_code(const Ordinal& zeta, const Ordinal& alpha) {
    require_infinite(zeta);
    if (!(alpha < zeta)) throw OutOfRange(alpha.to_string() + " is not below " + zeta.to_string());
    const BlockLayout l = layout_of(zeta);
    Ordinal prefix;
    std::uint64_t first_block = 0;
    for (const auto& t : zeta.terms()) {
        const Ordinal span = Ordinal::omega_power(t.exponent, t.coeff);
        if (alpha < prefix + span) {
            const Ordinal rel = ord_sub(prefix, alpha);
            const std::uint64_t q = rel.coeff_at(t.exponent);
            const std::uint64_t block = first_block + q;
            if (t.exponent == 0) return block;
            const Ordinal offset = ord_sub(Ordinal::omega_power(t.exponent, q), rel);
            std::vector<std::uint64_t> digits(t.exponent);
            for (std::uint64_t i = 0; i < t.exponent; ++i) digits[i] = offset.coeff_at(t.exponent - 1 - i);
            const std::uint64_t r = tuple_encode(digits);
            if (r == 0) return block;
            return checked_add(l.blocks, checked_add(checked_mul(r - 1, l.infinite_blocks), block));
        }
        prefix = prefix + span;
        first_block += t.coeff;
    }
    throw OutOfRange("unreachable: alpha below zeta but not inside any block");
}

Ordinal segment_decode(const Ordinal& zeta, std::uint64_t n) {
    require_infinite(zeta);
    const BlockLayout l = layout_of(zeta);
    if (n < l.blocks) return block_at(zeta, n).first;
    const std::uint64_t r = 1 + (n - l.blocks) / l.infinite_blocks;
    const std::uint64_t j = (n - l.blocks) % l.infinite_blocks;
    const auto [start, exponent] = block_at(zeta, j);
    const auto digits = tuple_decode(exponent, r);
    Ordinal offset;
    for (std::uint64_t i = 0; i < exponent; ++i)
        offset = offset + Ordinal::omega_power(exponent - 1 - i, digits[i]);
    return start + offset;
}

OmegaPartition::OmegaPartition(Ordinal length) : length_(std::move(length)) {
    if (length_.is_zero()) throw OutOfRange("a partition of omega needs at least one piece");
}

void OmegaPartition::require_index(const Ordinal& eps) const {
    if (!(eps < length_))
        throw OutOfRange("partition index " + eps.to_string() + " not below " + length_.to_string());
}

std::pair<Ordinal, std::uint64_t> OmegaPartition::locate(std::uint64_t n) const {
    if (length_.is_finite()) {
        const std::uint64_t m = length_.finite_part();
        return {Ordinal::finite(n % m), n / m};
    }
    const auto [i, k] = cantor_unpair(n);
    return {segment_decode(length_, i), k};
}

std::uint64_t OmegaPartition::element(const Ordinal& eps, std::uint64_t k) const {
    require_index(eps);
    if (length_.is_finite())
        return checked_add(checked_mul(k, length_.finite_part()), eps.finite_part());
    return cantor_pair(segment_code(length_, eps), k);
}

bool OmegaPartition::member(const Ordinal& eps, std::uint64_t n) const {
    require_index(eps);
    return locate(n).first == eps;
}

std::vector<std::uint64_t> OmegaPartition::enumerate(const Ordinal& eps, std::size_t count) const {
    require_index(eps);
    std::vector<std::uint64_t> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) out.push_back(element(eps, k));
    return out;
}

bool partition_member(const OmegaPartition& p, const Ordinal& eps, std::uint64_t n) {
    return p.member(eps, n);
}

std::vector<std::uint64_t> partition_enumerate(const OmegaPartition& p, const Ordinal& eps,
                                               std::size_t count) {
    return p.enumerate(eps, count);
}

}  // namespace efg
