#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace efg {

/// Ordinals below omega^omega in Cantor normal form.
///
/// The value is w^e1*c1 + ... + w^ek*ck with e1 > ... > ek and every ci >= 1.
/// The empty term list is 0. Every exponent is a natural number, so every
/// representable value lies below the universe cap w^w (see kOrdinalCap).
class Ordinal {
public:
    struct Term {
        std::uint64_t exponent;
        std::uint64_t coeff;
        bool operator==(const Term&) const = default;
    };

    Ordinal() = default;

    static Ordinal finite(std::uint64_t n);
    /// w^e * c (c = 0 gives 0).
    static Ordinal omega_power(std::uint64_t exponent, std::uint64_t coeff = 1);
    /// Throws OutOfRange unless the terms are already in normal form.
    static Ordinal from_terms(std::vector<Term> terms);

    const std::vector<Term>& terms() const noexcept { return terms_; }

    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_finite() const noexcept;
    bool is_limit() const noexcept;
    bool is_successor() const noexcept;
    /// Coefficient of w^0.
    std::uint64_t finite_part() const noexcept;
    /// The natural number this ordinal denotes; throws OutOfRange if infinite.
    std::uint64_t as_finite() const;
    /// Leading exponent (0 for finite ordinals, including 0).
    std::uint64_t degree() const noexcept;
    std::uint64_t coeff_at(std::uint64_t exponent) const noexcept;

    Ordinal successor() const;

    /// Wire form "w^e1*c1+...+w^0*ck"; zero is "0".
    std::string to_string() const;
    /// Accepts the wire form and also the shorthand "w", "w^2", "w*3", "w^2*2+5"
    /// and plain naturals. Summands are combined with ordinal addition.
    static Ordinal parse(std::string_view text);

    friend Ordinal operator+(const Ordinal& a, const Ordinal& b);
    friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);
    friend bool operator==(const Ordinal& a, const Ordinal& b) = default;

private:
    std::vector<Term> terms_;
};

inline constexpr std::string_view kOrdinalCap = "w^w";

enum class Cmp { LT, EQ, GT };

Cmp ord_compare(const Ordinal& a, const Ordinal& b);
Ordinal ord_add(const Ordinal& a, const Ordinal& b);
Ordinal ord_successor(const Ordinal& a);
bool ord_is_limit(const Ordinal& a);

/// The unique d with a + d = c. Requires a <= c (OutOfRange otherwise).
Ordinal ord_sub(const Ordinal& a, const Ordinal& c);

// Cantor pairing pi(x, y) = (x+y)(x+y+1)/2 + y. Throws OutOfRange on overflow.
std::uint64_t cantor_pair(std::uint64_t x, std::uint64_t y);
std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t z);

// Bijection N^len <-> N by iterated pairing: (a0, rest) -> pi(a0, code(rest)).
std::uint64_t tuple_encode(const std::vector<std::uint64_t>& components);
std::vector<std::uint64_t> tuple_decode(std::size_t len, std::uint64_t code);

/// Bijection [0, zeta) -> N for infinite zeta.
///
/// zeta is split into its CNF blocks in order: each term w^e*c contributes c
/// consecutive blocks of order type w^e (a single point when e = 0). An
/// element of a block w^e (e >= 1) has an offset with e CNF digits, which
/// tuple_encode turns into a block index r. Round 0 hands out codes
/// 0..m-1 to the first element of every block (m = number of blocks); round
/// r >= 1 serves the infinite blocks round-robin. Consequences:
/// segment_decode(w, n) = n and segment_decode(zeta, 0) = 0.
std::uint64_t segment_code(const Ordinal& zeta, const Ordinal& alpha);
Ordinal segment_decode(const Ordinal& zeta, std::uint64_t n);

/// The partition <U_eps : eps < length> of omega into infinite pieces.
///
/// For infinite length, n in U_eps iff cantor_unpair(n) = (i, k) with
/// segment_decode(length, i) = eps; for a finite length m, n in U_(n mod m).
/// Both codings fix 0, so 0 lies in U_0 without further adjustment. The k-th
/// element of every piece is increasing in k.
class OmegaPartition {
public:
    /// length must be >= 1.
    explicit OmegaPartition(Ordinal length);

    const Ordinal& length() const noexcept { return length_; }

    /// (eps, k) with n the k-th element of U_eps.
    std::pair<Ordinal, std::uint64_t> locate(std::uint64_t n) const;
    std::uint64_t element(const Ordinal& eps, std::uint64_t k) const;
    bool member(const Ordinal& eps, std::uint64_t n) const;
    std::vector<std::uint64_t> enumerate(const Ordinal& eps, std::size_t count) const;

    bool operator==(const OmegaPartition& other) const { return length_ == other.length_; }

private:
    void require_index(const Ordinal& eps) const;

    Ordinal length_;
};

bool partition_member(const OmegaPartition& p, const Ordinal& eps, std::uint64_t n);
std::vector<std::uint64_t> partition_enumerate(const OmegaPartition& p, const Ordinal& eps,
                                               std::size_t count);

}  // namespace efg

template <>
struct std::hash<efg::Ordinal> {
    std::size_t operator()(const efg::Ordinal& o) const noexcept {
        std::size_t h = 0x9e3779b97f4a7c15ULL;
        for (const auto& t : o.terms()) {
            h ^= std::hash<std::uint64_t>{}(t.exponent) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            h ^= std::hash<std::uint64_t>{}(t.coeff) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};
