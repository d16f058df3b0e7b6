#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace efg {

using Index = std::uint64_t;

/// An element of the GF(2) vector space G with basis <x_n : n < omega>,
/// stored as its support: the sorted, duplicate-free list of indices n with
/// x_n present. Addition is symmetric difference.
class GroupElement {
public:
    GroupElement() = default;

    static GroupElement basis(Index n);
    /// Indices occurring an even number of times cancel.
    static GroupElement from_indices(std::vector<Index> indices);
    /// Support = set bits of mask (indices 0..63).
    static GroupElement from_mask(std::uint64_t mask);

    const std::vector<Index>& support() const noexcept { return support_; }
    bool is_zero() const noexcept { return support_.empty(); }
    bool contains(Index n) const noexcept;
    /// Requires every index < 64.
    std::uint64_t mask() const;

    GroupElement& operator+=(const GroupElement& other);
    friend GroupElement operator+(GroupElement a, const GroupElement& b) { return a += b; }

    friend bool operator==(const GroupElement&, const GroupElement&) = default;
    friend std::strong_ordering operator<=>(const GroupElement& a, const GroupElement& b) {
        return a.support_ <=> b.support_;
    }

    /// "x{n1}+x{n2}+..." in increasing index order, "0" for zero.
    std::string to_string() const;
    static GroupElement parse(std::string_view text);

private:
    std::vector<Index> support_;
};

/// The coset G^level_n: elements whose support contains n with parity `level`.
struct Coset {
    Index n = 0;
    unsigned level = 0;

    friend bool operator==(const Coset&, const Coset&) = default;
    friend auto operator<=>(const Coset&, const Coset&) = default;

    /// "G{level}_{n}", e.g. "G1_3".
    std::string to_string() const;
    static Coset parse(std::string_view text);
};

GroupElement add(const GroupElement& a, const GroupElement& b);
/// x + G^l_n = G^(l xor [n in supp x])_n.
Coset coset_translate(const GroupElement& x, const Coset& c);
bool coset_member(const GroupElement& x, const Coset& c);

/// n -> slope * (n / period) + residues[n % period]; a periodic-affine map
/// omega -> omega. The default is the identity.
struct IndexMap {
    std::uint64_t period = 1;
    std::uint64_t slope = 1;
    std::vector<Index> residues{0};

    Index operator()(Index n) const;
    bool operator==(const IndexMap&) const = default;
};

/// A homomorphism G -> G given by the images of basis vectors:
/// image(x_n) = overrides[n] if present, else the sum of x_{h(n)} over the
/// index maps h in `terms` (so a single index map h yields the hat-h
/// construction sum_{n in u} x_n -> sum_{n in u} x_{h(n)}).
class GroupHom {
public:
    GroupHom() = default;
    GroupHom(std::vector<IndexMap> terms, std::map<Index, GroupElement> overrides = {});

    static GroupHom identity();
    static GroupHom zero();
    /// The homomorphism induced by an index map h : omega -> omega.
    static GroupHom hat(IndexMap h);

    const std::vector<IndexMap>& terms() const noexcept { return terms_; }
    const std::map<Index, GroupElement>& overrides() const noexcept { return overrides_; }

    GroupElement image(Index n) const;
    GroupElement apply(const GroupElement& x) const;
    /// {n < bound : m in supp(image(x_n))}, increasing.
    std::vector<Index> preimage(Index m, Index bound) const;

    bool is_identity() const;
    /// True when no term grows with n; the image of x_n then depends only on
    /// n mod period() outside the override indices.
    bool is_periodic() const;
    std::uint64_t period() const;

    bool operator==(const GroupHom&) const = default;

private:
    std::vector<IndexMap> terms_;
    std::map<Index, GroupElement> overrides_;
};

GroupElement hom_apply(const GroupHom& g, const GroupElement& x);

}  // namespace efg

template <>
struct std::hash<efg::GroupElement> {
    std::size_t operator()(const efg::GroupElement& g) const noexcept {
        std::size_t h = 0xcbf29ce484222325ULL;
        for (auto n : g.support()) h = (h ^ std::hash<efg::Index>{}(n)) * 0x100000001b3ULL;
        return h;
    }
};
