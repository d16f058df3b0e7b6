#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "efgame/automorphism.hpp"
#include "efgame/group.hpp"
#include "efgame/ordinal.hpp"
#include "efgame/structures.hpp"

namespace efg {

// Brute-force checkers. Relations are recomputed from levels and coset
// parities rather than through the eval_* helpers, and images of f_nu are
// recomputed pointwise, so agreement with the engine means something.

using ElementPair = std::pair<Element, Element>;

struct AuditReport {
    std::vector<std::string> violations;

    bool ok() const noexcept { return violations.empty(); }
};

/// A finite set of elements of one structure together with the F_y's to
/// audit. The element set is closed under F_y for y in y_set on construction.
class FiniteFragment {
public:
    FiniteFragment(std::vector<Element> elements, std::vector<GroupElement> y_set, StructureHandle structure);

    const std::vector<Element>& elements() const noexcept { return elements_; }
    const std::vector<GroupElement>& y_set() const noexcept { return y_set_; }
    const StructureHandle& structure() const noexcept { return structure_; }
    bool contains(const Element& e) const;

private:
    std::vector<Element> elements_;
    std::vector<GroupElement> y_set_;
    StructureHandle structure_;
};

/// Checks P1, P2, E1, E2, R (and R1 when both sides are expansions) on all
/// tuples of mapped elements, plus F_y-equivariance for the left fragment's
/// y_set wherever both F_y(e) and e are mapped.
AuditReport audit_partial_iso(const FiniteFragment& left, const FiniteFragment& right,
                              const std::vector<ElementPair>& map);

/// The same audit for a finite map between two whole structures, where every
/// F_y is a function symbol: a pair of elements is compared through every
/// term F_y(e), which reduces to finitely many exact conditions. Only tuples
/// that involve at least one pair at index >= first_new are checked, so a
/// game can audit incrementally. Distinguished constants take part as an
/// extra pair.
AuditReport audit_game_map(const StructureHandle& left, const StructureHandle& right,
                           const std::vector<ElementPair>& map, std::size_t first_new = 0);

/// All A-elements with level in `levels` and support below `support_bound`,
/// and all B-elements with those levels, base below `support_bound` and at
/// most one deviation.
std::vector<Element> bounded_fragment(const std::vector<Ordinal>& levels, unsigned support_bound);

/// f_apply on the F_y-closure of `elements`: every image must match a
/// pointwise recomputation from nu, f_apply must be involutive there, and the
/// induced map must pass both audits. `flip_parity` corrupts one image coset
/// before auditing (fault injection).
AuditReport audit_translation(const NuDescriptor& nu, const std::vector<Element>& elements,
                              const std::vector<GroupElement>& y_set, bool flip_parity = false);

struct EquivalenceResult {
    bool star = false;
    bool r1_preserved = false;
    std::optional<std::pair<AElement, AElement>> violating_pair;  // (e2, e1) with R1 broken

    bool agree() const noexcept { return star == r1_preserved; }
};

/// R1 preservation under the translation by nu, checked on every pair of
/// A-elements below gamma with supports below support_bound, compared with
/// star_condition(p, nu, gamma). Requires finite gamma.
EquivalenceResult verify_r1_equivalence(const PDescriptor& p, const NuDescriptor& nu, const Ordinal& gamma,
                                          unsigned support_bound);

struct ConverseReport {
    std::uint64_t count = 0;              // qualifying bijections found
    bool all_translations = true;
    bool vacuous = false;                 // empty y_set: every bijection qualifies
    std::vector<std::vector<GroupElement>> translations;  // per level: the z of every qualifying map
};

/// Enumerates the level-preserving bijections of the A-fragment
/// {(alpha, x) : alpha in levels, supp(x) below support_bound} that commute
/// with F_y for y in y_set (all y below the bound by default).
ConverseReport converse_translation_search(const std::vector<Ordinal>& levels, unsigned support_bound,
                                    std::optional<std::vector<GroupElement>> y_set = std::nullopt);

/// The first y in y_set and x with perm(x + y) != perm(x) + y, where perm is
/// a permutation of the masks below 2^support_bound.
std::optional<std::pair<GroupElement, GroupElement>> commutation_witness(const std::vector<std::uint64_t>& perm,
                                                                         const std::vector<GroupElement>& y_set);

struct RigidityReport {
    std::vector<GroupElement> solutions;  // z with hat h(z) = x0 + x1
    bool excludes_zero = true;
    std::size_t obstructions_fired = 0;
    std::size_t obstructions_expected = 0;
    std::vector<std::string> failures;

    bool ok() const noexcept { return failures.empty(); }
};

enum class RigidityTarget { M, N };

/// For N: the solutions of hat h(z) = x0 + x1 with supp(z) below the bound
/// are nonempty and nonzero, and a constant nonzero nu on [0, w) makes the
/// constant-G0_n B-element illegal for every n in supp(z). For M: constant
/// nu = 0 acts as the identity, any other constant value is obstructed.
RigidityReport rigidity_probe(RigidityTarget target, unsigned support_bound, const std::vector<Ordinal>& level_sample);

}  // namespace efg
