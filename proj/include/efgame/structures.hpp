#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "efgame/group.hpp"
#include "efgame/ordinal.hpp"

namespace efg {

/// (level, value) in A_level = {level} x G.
struct AElement {
    Ordinal level;
    GroupElement value;

    friend bool operator==(const AElement&, const AElement&) = default;
    friend auto operator<=>(const AElement&, const AElement&) = default;
};

/// An element eta of B_level: a sequence of cosets of length `level` which
/// equals G^0_base everywhere except at finitely many recorded deviations.
///
/// Canonical form: deviations never hold G^0_base; finite levels use base 0
/// (any other base is re-encoded against G^0_0 on construction).
class BElement {
public:
    BElement() = default;
    /// Throws OutOfRange if a deviation key is not below level.
    static BElement make(Ordinal level, Index base, std::map<Ordinal, Coset> deviations = {});

    const Ordinal& level() const noexcept { return level_; }
    Index base() const noexcept { return base_; }
    const std::map<Ordinal, Coset>& deviations() const noexcept { return deviations_; }

    /// eta(beta); requires beta < level.
    Coset at(const Ordinal& beta) const;

    friend bool operator==(const BElement&, const BElement&) = default;
    friend auto operator<=>(const BElement&, const BElement&) = default;

private:
    Ordinal level_;
    Index base_ = 0;
    std::map<Ordinal, Coset> deviations_;
};

using Element = std::variant<AElement, BElement>;

const Ordinal& level_of(const Element& e);
bool is_a(const Element& e);
bool is_b(const Element& e);

/// "A(level; value)" and "B(level; base)" or "B(level; base; beta↦G1_3, ...)".
/// The parser also accepts "->" in place of "↦".
std::string to_string(const Element& e);
Element parse_element(std::string_view text);

/// <(beta_alpha, g_alpha) : alpha> of an expansion M_p: a default rule for
/// each component plus finitely many per-level overrides.
class PDescriptor {
public:
    enum class BetaRule { Zero, Identity };

    PDescriptor() = default;
    /// Throws OutOfRange if some beta override exceeds its level.
    PDescriptor(BetaRule beta_default, GroupHom hom_default,
                std::map<Ordinal, Ordinal> beta_overrides = {},
                std::map<Ordinal, GroupHom> hom_overrides = {});

    BetaRule beta_default() const noexcept { return beta_default_; }
    const GroupHom& hom_default() const noexcept { return hom_default_; }
    const std::map<Ordinal, Ordinal>& beta_overrides() const noexcept { return beta_overrides_; }
    const std::map<Ordinal, GroupHom>& hom_overrides() const noexcept { return hom_overrides_; }

    Ordinal beta(const Ordinal& alpha) const;
    const GroupHom& hom(const Ordinal& alpha) const;

    bool operator==(const PDescriptor&) const = default;

private:
    BetaRule beta_default_ = BetaRule::Zero;
    GroupHom hom_default_ = GroupHom::identity();
    std::map<Ordinal, Ordinal> beta_overrides_;
    std::map<Ordinal, GroupHom> hom_overrides_;
};

/// The p of the rigid expansion N: beta_alpha = 0 and g_alpha = hat h with
/// h(2n + l) = l at every level.
PDescriptor n_descriptor();
IndexMap parity_index_map();

/// M, M_{<cutoff}, M_p or M^p_{<cutoff}, optionally pointed.
struct StructureHandle {
    enum class Kind { PlainM, Expanded };

    Kind kind = Kind::PlainM;
    std::optional<PDescriptor> p;
    std::optional<Ordinal> cutoff;
    std::optional<AElement> distinguished;

    static StructureHandle plain_m();
    static StructureHandle expanded(PDescriptor p);

    StructureHandle restricted(Ordinal gamma) const;
    StructureHandle pointed(AElement a) const;

    bool is_expanded() const noexcept { return kind == Kind::Expanded; }
    /// Throws OutOfRange on a kind/p mismatch.
    void validate() const;

    bool operator==(const StructureHandle&) const = default;
};

StructureHandle make_N();

bool element_in_structure(const StructureHandle& s, const Element& e);

bool eval_P1(const StructureHandle& s, const Element& e);
bool eval_P2(const StructureHandle& s, const Element& e);
/// Across sorts these return false, or throw SortMismatch when strict.
bool eval_E1(const StructureHandle& s, const Element& a, const Element& b, bool strict = false);
bool eval_E2(const StructureHandle& s, const Element& a, const Element& b, bool strict = false);
Element eval_F(const StructureHandle& s, const GroupElement& y, const Element& e);
bool eval_R(const StructureHandle& s, const BElement& eta, const AElement& a);
/// R_1(e2, e1): e2.level = beta(e1.level) and g_{e1.level}(e1.value) = e2.value.
/// Throws OutOfRange if s is not an expansion.
bool eval_R1(const StructureHandle& s, const AElement& e2, const AElement& e1);

}  // namespace efg

template <>
struct std::hash<efg::Element> {
    std::size_t operator()(const efg::Element& e) const noexcept;
};
