#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "efgame/group.hpp"
#include "efgame/ordinal.hpp"
#include "efgame/structures.hpp"

namespace efg {

/// An infinite set of naturals used as the range of an injection rule:
/// position k = offset + stride * c for c = 0, 1, ...; the drawn natural is
/// k itself, or the k-th element of U_color when a color is present.
struct SlotClass {
    std::optional<Ordinal> color;
    std::uint64_t offset = 0;
    std::uint64_t stride = 1;

    bool operator==(const SlotClass&) const = default;
};

/// Positions 2^s (2c + 1) + 1: pairwise disjoint for distinct s, never 0 or 1.
SlotClass dyadic_slot(unsigned s, std::optional<Ordinal> color);

struct ConstantRule {
    GroupElement value;
    bool operator==(const ConstantRule&) const = default;
};

/// nu(alpha) = x_{e(alpha)}. The injection codes alpha - origin inside the
/// frame [origin, origin + frame) (identity when the frame is finite,
/// segment_code otherwise) and sends the code c to slot position c.
struct BasisInjection {
    SlotClass slot;
    Ordinal origin;
    Ordinal frame;
    bool operator==(const BasisInjection&) const = default;
};

/// nu(alpha) = x_{2e(alpha)} + x_{2e(alpha)+1}, with e as for BasisInjection.
struct PairInjection {
    SlotClass slot;
    Ordinal origin;
    Ordinal frame;
    bool operator==(const PairInjection&) const = default;
};

using NuRule = std::variant<ConstantRule, BasisInjection, PairInjection>;

struct Segment {
    Ordinal lo;
    Ordinal hi;
    NuRule rule;
    bool operator==(const Segment&) const = default;
};

/// {alpha < beta : n in supp(nu(alpha))}: explicit when finite.
struct Preimage {
    bool infinite = false;
    std::vector<Ordinal> points;
};

/// A total function nu : [0, sup) -> G given by consecutive rule segments
/// and finitely many point overrides (which take precedence).
///
/// `palette` is the length of the partition <U_xi> that colored slot classes
/// refer to; it must be present whenever some rule is colored.
class NuDescriptor {
public:
    NuDescriptor() = default;
    /// Throws OutOfRange unless the segments tile [0, sup), every override
    /// key is below sup and every colored rule has a palette entry.
    NuDescriptor(Ordinal sup, std::vector<Segment> segments, std::map<Ordinal, GroupElement> overrides = {},
                 std::optional<Ordinal> palette = std::nullopt);

    const Ordinal& domain_sup() const noexcept { return sup_; }
    const std::vector<Segment>& segments() const noexcept { return segments_; }
    const std::map<Ordinal, GroupElement>& overrides() const noexcept { return overrides_; }
    const std::optional<Ordinal>& palette() const noexcept { return palette_; }

    GroupElement eval(const Ordinal& alpha) const;
    Preimage supp_preimage(Index n, const Ordinal& beta) const;

    /// For every beta < sup and every n only finitely many alpha < beta have
    /// n in supp(nu(alpha)).
    bool is_valid() const;

    /// nu restricted to [0, gamma); gamma <= sup.
    NuDescriptor restrict_to(const Ordinal& gamma) const;
    /// Appends [sup, hi) with `rule`; hi > sup.
    NuDescriptor append(Ordinal hi, NuRule rule) const;
    NuDescriptor with_override(const Ordinal& alpha, GroupElement value) const;

    bool operator==(const NuDescriptor&) const = default;

    /// {sup=..; palette=..; [lo,hi)=CONST(g); [lo,hi)=BINJ(xi,offset,stride,origin,frame);
    ///  [lo,hi)=PINJ(xi,offset,stride,origin,frame); @alpha=g} with xi "-" when uncolored.
    std::string to_string() const;
    static NuDescriptor parse(std::string_view text);

private:
    const Segment& segment_at(const Ordinal& alpha) const;

    Ordinal sup_;
    std::vector<Segment> segments_;
    std::map<Ordinal, GroupElement> overrides_;
    std::optional<Ordinal> palette_;
};

std::string to_string(const Segment& s);
std::string to_string(const NuRule& r);

/// Frame coding used by the injection rules.
std::uint64_t frame_code(const Ordinal& frame, const Ordinal& offset);
std::optional<Ordinal> frame_decode(const Ordinal& frame, std::uint64_t code);

/// The natural an injection rule draws for alpha (the basis index for
/// BasisInjection, the pair index e for PairInjection).
std::uint64_t injection_index(const SlotClass& slot, const Ordinal& origin, const Ordinal& frame,
                              const Ordinal& alpha, const std::optional<Ordinal>& palette);

GroupElement nu_eval(const NuDescriptor& nu, const Ordinal& alpha);
Preimage supp_preimage(const NuDescriptor& nu, Index n, const Ordinal& beta);

/// f_nu. A-elements are translated by nu(level); a B-element eta keeps its
/// base and gets eta(alpha) + nu(alpha) pointwise. Throws OutOfDomain when
/// nu does not cover the element, IllegalImage when the image would deviate
/// infinitely often from its base coset.
Element f_apply(const NuDescriptor& nu, const Element& e);
bool f_involution_check(const NuDescriptor& nu, const Element& e);

/// Whether nu2 end-extends nu1. Throws Undecided for two distinct injection
/// rules overlapping on an infinite interval.
bool nu_extend(const NuDescriptor& nu1, const NuDescriptor& nu2);

/// For all alpha < gamma: g_alpha(nu(alpha)) = nu(beta_alpha). Decided per
/// segment; throws Undecided when a rule/hom pair on an infinite piece lies
/// outside the periodic fragment and no counterexample turns up.
bool star_condition(const PDescriptor& p, const NuDescriptor& nu, const Ordinal& gamma);

/// A pair of distinct points with equal nu-values, if any. Throws Undecided
/// when a colored and an uncolored family of the same kind overlap on
/// infinite ranges.
std::optional<std::pair<Ordinal, Ordinal>> find_repetition(const NuDescriptor& nu);

/// nu restricted to gamma is in Lambda_gamma: nu(0) = x0+x1, every other
/// value is some x_{2n}+x_{2n+1}, and the values are pairwise distinct.
bool lambda_recognizer(const NuDescriptor& nu, const Ordinal& gamma);

/// Whether g = x_{2e} + x_{2e+1} for some e.
std::optional<std::uint64_t> pair_index_of(const GroupElement& g);

}  // namespace efg
