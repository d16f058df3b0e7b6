#pragma once

// Hand-rolled generators and small reference implementations shared by the
// test binaries. Nothing here calls into the library's fast paths.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "efgame/automorphism.hpp"
#include "efgame/group.hpp"
#include "efgame/ordinal.hpp"
#include "efgame/structures.hpp"

namespace testing {

using efg::Ordinal;

inline std::uint64_t pick(std::mt19937_64& rng, std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng);
}

// Ordinals as coefficient vectors, index = exponent.
using Digits = std::vector<std::uint64_t>;

inline Digits digits_of(const Ordinal& a) {
    Digits d(a.degree() + 1, 0);
    for (const auto& t : a.terms()) d[t.exponent] = t.coeff;
    return d;
}

inline Ordinal from_digits(const Digits& d) {
    Ordinal out;
    for (std::size_t e = d.size(); e-- > 0;)
        if (d[e] != 0) out = out + Ordinal::omega_power(e, d[e]);
    return out;
}

inline int digits_compare(Digits a, Digits b) {
    const std::size_t n = std::max(a.size(), b.size());
    a.resize(n, 0);
    b.resize(n, 0);
    for (std::size_t e = n; e-- > 0;) {
        if (a[e] != b[e]) return a[e] < b[e] ? -1 : 1;
    }
    return 0;
}

// a + b: terms of a below the leading exponent of b are absorbed.
inline Digits digits_add(Digits a, const Digits& b) {
    std::size_t lead = b.size();
    while (lead > 0 && b[lead - 1] == 0) --lead;
    if (lead == 0) return a;
    const std::size_t top = lead - 1;
    a.resize(std::max(a.size(), b.size()), 0);
    const std::uint64_t carried = a[top];
    for (std::size_t e = 0; e <= top; ++e) a[e] = b[e];
    a[top] += carried;
    return a;
}

// A random ordinal below w^max_degree+1 with small coefficients.
inline Ordinal random_ordinal(std::mt19937_64& rng, std::uint64_t max_degree = 2, std::uint64_t max_coeff = 3) {
    Digits d(max_degree + 1, 0);
    for (auto& c : d)
        if (pick(rng, 2) == 0) c = pick(rng, max_coeff + 1);
    return from_digits(d);
}

inline efg::GroupElement random_element(std::mt19937_64& rng, unsigned width) {
    return efg::GroupElement::from_mask(rng() & ((std::uint64_t{1} << width) - 1));
}

// Every element whose support lies in {0..width-1}.
inline std::vector<efg::GroupElement> all_elements(unsigned width) {
    std::vector<efg::GroupElement> out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << width); ++m) out.push_back(efg::GroupElement::from_mask(m));
    return out;
}

inline efg::GroupHom random_hom(std::mt19937_64& rng) {
    std::vector<efg::IndexMap> terms;
    const std::uint64_t count = 1 + pick(rng, 3);
    for (std::uint64_t i = 0; i < count; ++i) {
        efg::IndexMap m;
        m.period = 1 + pick(rng, 3);
        m.slope = pick(rng, 3);
        m.residues.clear();
        for (std::uint64_t r = 0; r < m.period; ++r) m.residues.push_back(pick(rng, 8));
        terms.push_back(m);
    }
    std::map<efg::Index, efg::GroupElement> overrides;
    if (pick(rng, 2) == 0) overrides.emplace(pick(rng, 6), random_element(rng, 5));
    return efg::GroupHom(std::move(terms), std::move(overrides));
}

// The image of x_n under the hom: overrides first, then every index map
// contributes x_{h(n)} with h(n) = slope * (n / period) + residue.
inline efg::GroupElement reference_image(const efg::GroupHom& g, efg::Index n) {
    if (auto it = g.overrides().find(n); it != g.overrides().end()) return it->second;
    std::vector<efg::Index> idx;
    for (const auto& h : g.terms()) idx.push_back(h.slope * (n / h.period) + h.residues[n % h.period]);
    return efg::GroupElement::from_indices(idx);
}

inline efg::GroupElement reference_apply(const efg::GroupHom& g, const efg::GroupElement& x) {
    efg::GroupElement out;
    for (auto n : x.support()) out += reference_image(g, n);
    return out;
}

// x in G^l_n by counting occurrences of n in the support.
inline bool reference_member(const efg::GroupElement& x, const efg::Coset& c) {
    const auto hits = std::count(x.support().begin(), x.support().end(), c.n);
    return static_cast<unsigned>(hits % 2) == c.level;
}

inline efg::BElement random_finite_b(std::mt19937_64& rng, std::uint64_t max_level, efg::Index max_n) {
    const std::uint64_t level = pick(rng, max_level + 1);
    std::map<Ordinal, efg::Coset> dev;
    for (std::uint64_t b = 0; b < level; ++b)
        if (pick(rng, 2) == 0)
            dev.emplace(Ordinal::finite(b), efg::Coset{pick(rng, max_n), static_cast<unsigned>(pick(rng, 2))});
    return efg::BElement::make(Ordinal::finite(level), pick(rng, max_n), std::move(dev));
}

inline std::vector<efg::Ordinal> finite_levels(std::uint64_t n) {
    std::vector<efg::Ordinal> out;
    for (std::uint64_t i = 0; i < n; ++i) out.push_back(Ordinal::finite(i));
    return out;
}

inline efg::NuDescriptor finite_nu(const std::vector<efg::GroupElement>& values) {
    std::map<Ordinal, efg::GroupElement> ovr;
    for (std::size_t i = 0; i < values.size(); ++i) ovr.emplace(Ordinal::finite(i), values[i]);
    const Ordinal sup = Ordinal::finite(values.size());
    return efg::NuDescriptor(sup, {efg::Segment{Ordinal{}, sup, efg::ConstantRule{}}}, std::move(ovr));
}

}  // namespace testing
