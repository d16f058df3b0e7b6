#include "efgame/oracle.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_set>

#include "efgame/errors.hpp"

namespace efg {

namespace {

constexpr std::size_t kClosureCap = 1 << 20;
constexpr Index kHomProbe = 128;

Coset coordinate(const BElement& eta, const Ordinal& beta) {
    auto it = eta.deviations().find(beta);
    return it == eta.deviations().end() ? Coset{eta.base(), 0} : it->second;
}

bool parity_in(const GroupElement& x, const Coset& c) {
    return (x.contains(c.n) ? 1U : 0U) == c.level;
}

Coset shifted(const GroupElement& x, const Coset& c) {
    return Coset{c.n, c.level ^ (x.contains(c.n) ? 1U : 0U)};
}

bool r_holds(const BElement& eta, const AElement& a) {
    return a.level < eta.level() && parity_in(a.value, coordinate(eta, a.level));
}

bool r1_holds(const PDescriptor& p, const AElement& e2, const AElement& e1) {
    return e2.level == p.beta(e1.level) && p.hom(e1.level).apply(e1.value) == e2.value;
}

bool same_hom(const GroupHom& g, const GroupHom& h) {
    if (g == h) return true;
    std::set<Index> probe;
    for (Index n = 0; n < kHomProbe; ++n) probe.insert(n);
    for (const auto& [n, v] : g.overrides()) probe.insert(n);
    for (const auto& [n, v] : h.overrides()) probe.insert(n);
    return std::all_of(probe.begin(), probe.end(), [&](Index n) { return g.image(n) == h.image(n); });
}

std::string pair_text(const ElementPair& p) {
    return to_string(p.first) + " => " + to_string(p.second);
}

Element apply_f(const GroupElement& y, const Element& e) {
    if (const auto* a = std::get_if<AElement>(&e)) return AElement{a->level, a->value + y};
    return e;
}

}  // namespace

FiniteFragment::FiniteFragment(std::vector<Element> elements, std::vector<GroupElement> y_set,
                               StructureHandle structure)
    : y_set_(std::move(y_set)), structure_(std::move(structure)) {
    std::unordered_set<Element> seen;
    std::deque<Element> queue;
    for (auto& e : elements)
        if (seen.insert(e).second) queue.push_back(std::move(e));
    while (!queue.empty()) {
        Element e = std::move(queue.front());
        queue.pop_front();
        for (const auto& y : y_set_) {
            Element f = apply_f(y, e);
            if (seen.insert(f).second) {
                if (seen.size() > kClosureCap) throw OutOfRange("fragment closure too large");
                queue.push_back(std::move(f));
            }
        }
        elements_.push_back(std::move(e));
    }
}

bool FiniteFragment::contains(const Element& e) const {
    return std::find(elements_.begin(), elements_.end(), e) != elements_.end();
}

AuditReport audit_partial_iso(const FiniteFragment& left, const FiniteFragment& right,
                              const std::vector<ElementPair>& map) {
    AuditReport report;
    auto violation = [&](std::string s) { report.violations.push_back(std::move(s)); };
    std::unordered_map<Element, Element> forward;
    std::unordered_set<Element> targets;
    for (const auto& [e, f] : map) {
        if (!left.contains(e)) violation("domain element " + to_string(e) + " outside the left fragment");
        if (!right.contains(f)) violation("image " + to_string(f) + " outside the right fragment");
        if (!forward.emplace(e, f).second) violation("element mapped twice: " + to_string(e));
        if (!targets.insert(f).second) violation("not injective at " + to_string(f));
    }
    const bool expanded = left.structure().is_expanded() && right.structure().is_expanded();
    for (std::size_t i = 0; i < map.size(); ++i) {
        const auto& [a, a2] = map[i];
        if (is_a(a) != is_a(a2)) violation("P1/P2 at " + pair_text(map[i]));
        for (std::size_t j = 0; j < map.size(); ++j) {
            const auto& [b, b2] = map[j];
            if (is_a(a) && is_a(b) && is_a(a2) && is_a(b2)) {
                if ((level_of(a) <= level_of(b)) != (level_of(a2) <= level_of(b2)))
                    violation("E1 at (" + pair_text(map[i]) + ", " + pair_text(map[j]) + ")");
                if (expanded) {
                    const bool l = r1_holds(*left.structure().p, std::get<AElement>(a), std::get<AElement>(b));
                    const bool r = r1_holds(*right.structure().p, std::get<AElement>(a2), std::get<AElement>(b2));
                    if (l != r) violation("R1 at (" + pair_text(map[i]) + ", " + pair_text(map[j]) + ")");
                }
            }
            if (is_b(a) && is_b(b) && is_b(a2) && is_b(b2)) {
                if ((level_of(a) <= level_of(b)) != (level_of(a2) <= level_of(b2)))
                    violation("E2 at (" + pair_text(map[i]) + ", " + pair_text(map[j]) + ")");
            }
            if (is_b(a) && is_a(b) && is_b(a2) && is_a(b2)) {
                const bool l = r_holds(std::get<BElement>(a), std::get<AElement>(b));
                const bool r = r_holds(std::get<BElement>(a2), std::get<AElement>(b2));
                if (l != r) violation("R at (" + pair_text(map[i]) + ", " + pair_text(map[j]) + ")");
            }
        }
        for (const auto& y : left.y_set()) {
            auto it = forward.find(apply_f(y, a));
            if (it == forward.end()) continue;
            if (it->second != apply_f(y, a2))
                violation("F_" + y.to_string() + " at " + pair_text(map[i]) + ": image of the translate is " +
                          to_string(it->second));
        }
    }
    const auto& d1 = left.structure().distinguished;
    const auto& d2 = right.structure().distinguished;
    if (d1 && d2) {
        auto it = forward.find(*d1);
        if (it != forward.end() && it->second != Element(*d2))
            violation("constant " + to_string(Element(*d1)) + " not sent to " + to_string(Element(*d2)));
    }
    return report;
}

AuditReport audit_game_map(const StructureHandle& left, const StructureHandle& right,
                           const std::vector<ElementPair>& map, std::size_t first_new) {
    AuditReport report;
    auto violation = [&](std::string s) { report.violations.push_back(std::move(s)); };
    std::vector<ElementPair> all;
    std::size_t offset = 0;
    if (left.distinguished && right.distinguished) {
        all.emplace_back(*left.distinguished, *right.distinguished);
        offset = 1;
    } else if (left.distinguished.has_value() != right.distinguished.has_value()) {
        violation("only one side carries a distinguished constant");
    }
    all.insert(all.end(), map.begin(), map.end());
    const std::size_t start = first_new == 0 ? 0 : first_new + offset;
    const bool expanded = left.is_expanded() && right.is_expanded();
    if (left.is_expanded() != right.is_expanded()) violation("structures have different signatures");

    for (std::size_t i = start; i < all.size(); ++i) {
        const auto& [e, e2] = all[i];
        if (is_a(e) != is_a(e2)) {
            violation("P1/P2 at " + pair_text(all[i]));
            continue;
        }
        if (!element_in_structure(left, e)) violation(to_string(e) + " is not in the left structure");
        if (!element_in_structure(right, e2)) violation(to_string(e2) + " is not in the right structure");
        for (std::size_t j = 0; j < all.size(); ++j) {
            const auto& [f, f2] = all[j];
            if (is_a(f) != is_a(f2)) continue;
            auto where = [&] { return "(" + pair_text(all[i]) + ", " + pair_text(all[j]) + ")"; };
            if (j != i && (e == f) != (e2 == f2)) violation("equality at " + where());
            if (is_a(e) && is_a(f)) {
                const auto& a = std::get<AElement>(e);
                const auto& b = std::get<AElement>(f);
                const auto& a2 = std::get<AElement>(e2);
                const auto& b2 = std::get<AElement>(f2);
                if ((a.level <=> b.level) != (a2.level <=> b2.level)) violation("E1 at " + where());
                if (a.level == b.level && a2.level == b2.level && a.value + b.value != a2.value + b2.value)
                    violation("F_y-translate equality at " + where());
                if (expanded) {
                    // R1(F_y2(a), F_y1(b)) for all y1, y2.
                    for (int dir = 0; dir < 2; ++dir) {
                        const auto& hi = dir == 0 ? a : b;
                        const auto& lo = dir == 0 ? b : a;
                        const auto& hi2 = dir == 0 ? a2 : b2;
                        const auto& lo2 = dir == 0 ? b2 : a2;
                        const bool l = hi.level == left.p->beta(lo.level);
                        const bool r = hi2.level == right.p->beta(lo2.level);
                        if (l != r) {
                            violation("R1 levels at " + where());
                        } else if (l) {
                            const GroupHom& g = left.p->hom(lo.level);
                            const GroupHom& g2 = right.p->hom(lo2.level);
                            if (!same_hom(g, g2)) violation("R1 homomorphisms differ at " + where());
                            else if (g.apply(lo.value) + hi.value != g2.apply(lo2.value) + hi2.value)
                                violation("R1 at " + where());
                        }
                    }
                }
            } else if (is_b(e) && is_b(f)) {
                if ((level_of(e) <=> level_of(f)) != (level_of(e2) <=> level_of(f2))) violation("E2 at " + where());
            } else {
                // R(eta, F_y(a)) for all y.
                const bool e_is_b = is_b(e);
                const auto& eta = std::get<BElement>(e_is_b ? e : f);
                const auto& a = std::get<AElement>(e_is_b ? f : e);
                const auto& eta2 = std::get<BElement>(e_is_b ? e2 : f2);
                const auto& a2 = std::get<AElement>(e_is_b ? f2 : e2);
                const bool l = a.level < eta.level();
                const bool r = a2.level < eta2.level();
                if (l != r) violation("R levels at " + where());
                else if (l && shifted(a.value, coordinate(eta, a.level)) != shifted(a2.value, coordinate(eta2, a2.level)))
                    violation("R at " + where());
            }
        }
    }
    return report;
}

std::vector<Element> bounded_fragment(const std::vector<Ordinal>& levels, unsigned support_bound) {
    if (support_bound > 16) throw OutOfRange("support bound too large for an exhaustive fragment");
    std::vector<Element> out;
    for (const auto& lv : levels)
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << support_bound); ++m)
            out.push_back(AElement{lv, GroupElement::from_mask(m)});
    for (const auto& lv : levels) {
        const Index bases = lv.is_finite() ? 1 : support_bound;
        for (Index base = 0; base < bases; ++base) {
            out.push_back(BElement::make(lv, base));
            for (const auto& beta : levels) {
                if (!(beta < lv)) continue;
                for (Index n = 0; n < support_bound; ++n)
                    for (unsigned l = 0; l < 2; ++l)
                        if (Coset{n, l} != Coset{base, 0}) out.push_back(BElement::make(lv, base, {{beta, Coset{n, l}}}));
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

// f_nu recomputed coordinate by coordinate. Infinite levels consult the
// descriptor's own preimage query for the coordinates meeting the base.
std::optional<Element> pointwise_image(const NuDescriptor& nu, const Element& e) {
    if (const auto* a = std::get_if<AElement>(&e)) return AElement{a->level, a->value + nu.eval(a->level)};
    const auto& eta = std::get<BElement>(e);
    std::map<Ordinal, Coset> devs;
    if (eta.level().is_finite()) {
        for (std::uint64_t i = 0; i < eta.level().finite_part(); ++i) {
            const Ordinal beta = Ordinal::finite(i);
            devs.emplace(beta, shifted(nu.eval(beta), coordinate(eta, beta)));
        }
        return BElement::make(eta.level(), eta.base(), std::move(devs));
    }
    const Preimage hits = nu.supp_preimage(eta.base(), eta.level());
    if (hits.infinite) return std::nullopt;
    for (const auto& [beta, c] : eta.deviations()) devs.emplace(beta, shifted(nu.eval(beta), c));
    for (const auto& beta : hits.points) devs.emplace(beta, shifted(nu.eval(beta), coordinate(eta, beta)));
    return BElement::make(eta.level(), eta.base(), std::move(devs));
}

}  // namespace

AuditReport audit_translation(const NuDescriptor& nu, const std::vector<Element>& elements,
                              const std::vector<GroupElement>& y_set, bool flip_parity) {
    AuditReport report;
    const StructureHandle m = StructureHandle::plain_m();
    const FiniteFragment domain(elements, y_set, m);
    std::vector<ElementPair> map;
    std::vector<Element> images;
    bool flipped = !flip_parity;
    for (const auto& e : domain.elements()) {
        const auto expected = pointwise_image(nu, e);
        Element img;
        try {
            img = f_apply(nu, e);
        } catch (const IllegalImage&) {
            if (expected) report.violations.push_back("f_apply rejected " + to_string(e));
            continue;
        }
        if (!flipped && is_b(img) && !level_of(img).is_zero()) {
            const auto& eta = std::get<BElement>(img);
            auto devs = eta.deviations();
            Coset c = coordinate(eta, Ordinal{});
            c.level ^= 1U;
            devs[Ordinal{}] = c;
            img = BElement::make(eta.level(), eta.base(), std::move(devs));
            flipped = true;
        }
        if (!expected) {
            report.violations.push_back("f_apply accepted illegal image of " + to_string(e));
            continue;
        }
        if (img != *expected)
            report.violations.push_back("f_apply(" + to_string(e) + ") = " + to_string(img) + ", expected " +
                                        to_string(*expected));
        if (f_apply(nu, img) != e) report.violations.push_back("f_nu is not involutive at " + to_string(e));
        map.emplace_back(e, img);
        images.push_back(img);
    }
    const FiniteFragment range(images, y_set, m);
    for (auto& v : audit_partial_iso(domain, range, map).violations) report.violations.push_back(std::move(v));
    for (auto& v : audit_game_map(m, m, map).violations) report.violations.push_back(std::move(v));
    return report;
}

EquivalenceResult verify_r1_equivalence(const PDescriptor& p, const NuDescriptor& nu, const Ordinal& gamma,
                                          unsigned support_bound) {
    if (!gamma.is_finite()) throw OutOfRange("the exhaustive grid needs a finite bound");
    if (support_bound > 12) throw OutOfRange("support bound too large for an exhaustive grid");
    if (nu.domain_sup() < gamma) throw OutOfDomain("nu does not cover the grid");
    const std::uint64_t n = gamma.finite_part();
    const std::uint64_t span = std::uint64_t{1} << support_bound;
    std::vector<std::uint64_t> nu_mask(n), g_nu(n), beta(n);
    std::vector<std::vector<std::uint64_t>> image(n, std::vector<std::uint64_t>(support_bound));
    for (std::uint64_t a = 0; a < n; ++a) {
        const Ordinal alpha = Ordinal::finite(a);
        const GroupElement v = nu.eval(alpha);
        nu_mask[a] = v.mask();
        g_nu[a] = p.hom(alpha).apply(v).mask();
        beta[a] = p.beta(alpha).as_finite();
        for (unsigned k = 0; k < support_bound; ++k) image[a][k] = p.hom(alpha).image(k).mask();
    }
    EquivalenceResult out;
    out.r1_preserved = true;
    for (std::uint64_t a = 0; a < n && out.r1_preserved; ++a) {
        for (std::uint64_t y1 = 0; y1 < span && out.r1_preserved; ++y1) {
            std::uint64_t g_y1 = 0;
            for (unsigned k = 0; k < support_bound; ++k)
                if (y1 >> k & 1U) g_y1 ^= image[a][k];
            for (std::uint64_t b = 0; b < n && out.r1_preserved; ++b) {
                for (std::uint64_t y2 = 0; y2 < span; ++y2) {
                    const bool before = b == beta[a] && g_y1 == y2;
                    const bool after = b == beta[a] && (g_y1 ^ g_nu[a]) == (y2 ^ nu_mask[b]);
                    if (before != after) {
                        out.r1_preserved = false;
                        out.violating_pair = std::make_pair(AElement{Ordinal::finite(b), GroupElement::from_mask(y2)},
                                                            AElement{Ordinal::finite(a), GroupElement::from_mask(y1)});
                        break;
                    }
                }
            }
        }
    }
    out.star = star_condition(p, nu, gamma);
    return out;
}

namespace {

struct ConverseSearch {
    std::uint64_t size;
    std::vector<std::uint64_t> ys;
    std::vector<std::int64_t> f;
    std::vector<bool> used;
    std::uint64_t count = 0;
    bool all_translations = true;
    std::vector<GroupElement> zs;

    // Assigns x -> t and everything forced by commutation; returns the
    // assigned domain points, or nullopt (with nothing assigned) on conflict.
    std::optional<std::vector<std::uint64_t>> assign(std::uint64_t x, std::uint64_t t) {
        std::vector<std::uint64_t> done;
        std::deque<std::pair<std::uint64_t, std::uint64_t>> queue{{x, t}};
        auto undo = [&] {
            for (auto d : done) {
                used[static_cast<std::size_t>(f[d])] = false;
                f[d] = -1;
            }
        };
        while (!queue.empty()) {
            const auto [u, v] = queue.front();
            queue.pop_front();
            if (f[u] >= 0) {
                if (static_cast<std::uint64_t>(f[u]) != v) {
                    undo();
                    return std::nullopt;
                }
                continue;
            }
            if (used[v]) {
                undo();
                return std::nullopt;
            }
            f[u] = static_cast<std::int64_t>(v);
            used[v] = true;
            done.push_back(u);
            for (auto y : ys) queue.emplace_back(u ^ y, v ^ y);
        }
        return done;
    }

    void run(std::uint64_t from) {
        while (from < size && f[from] >= 0) ++from;
        if (from == size) {
            ++count;
            const std::uint64_t z = static_cast<std::uint64_t>(f[0]);
            bool translation = true;
            for (std::uint64_t x = 0; x < size; ++x)
                if ((static_cast<std::uint64_t>(f[x]) ^ x) != z) translation = false;
            if (!translation) all_translations = false;
            else zs.push_back(GroupElement::from_mask(z));
            return;
        }
        for (std::uint64_t t = 0; t < size; ++t) {
            if (used[t]) continue;
            auto done = assign(from, t);
            if (!done) continue;
            run(from + 1);
            for (auto d : *done) {
                used[static_cast<std::size_t>(f[d])] = false;
                f[d] = -1;
            }
        }
    }
};

}  // namespace

ConverseReport converse_translation_search(const std::vector<Ordinal>& levels, unsigned support_bound,
                                    std::optional<std::vector<GroupElement>> y_set) {
    if (support_bound > 6) throw OutOfRange("support bound too large for the converse search");
    const std::uint64_t size = std::uint64_t{1} << support_bound;
    std::vector<std::uint64_t> ys;
    if (y_set) {
        for (const auto& y : *y_set) {
            const std::uint64_t m = y.mask();
            if (m >= size) throw OutOfRange("y outside the bounded fragment");
            ys.push_back(m);
        }
    } else {
        for (std::uint64_t m = 1; m < size; ++m) ys.push_back(m);
    }
    ConverseReport report;
    report.vacuous = y_set && y_set->empty();
    report.count = 1;
    for (std::size_t level = 0; level < levels.size(); ++level) {
        if (report.vacuous && size > 8) {
            // Every bijection qualifies; count them without listing and exhibit
            // a transposition, which is not a translation.
            std::uint64_t fact = 1;
            for (std::uint64_t k = 2; k <= size; ++k)
                fact = fact > UINT64_MAX / k ? UINT64_MAX : fact * k;
            report.count = report.count > UINT64_MAX / fact ? UINT64_MAX : report.count * fact;
            report.all_translations = false;
            report.translations.emplace_back();
            continue;
        }
        ConverseSearch search{size, ys, std::vector<std::int64_t>(size, -1), std::vector<bool>(size, false), 0, true, {}};
        search.run(0);
        report.count *= search.count;
        report.all_translations = report.all_translations && search.all_translations;
        report.translations.push_back(std::move(search.zs));
    }
    if (levels.empty()) report.count = 1;
    return report;
}

std::optional<std::pair<GroupElement, GroupElement>> commutation_witness(const std::vector<std::uint64_t>& perm,
                                                                         const std::vector<GroupElement>& y_set) {
    for (const auto& y : y_set) {
        const std::uint64_t m = y.mask();
        for (std::uint64_t x = 0; x < perm.size(); ++x) {
            if ((x ^ m) >= perm.size()) continue;
            if (perm[x ^ m] != (perm[x] ^ m)) return std::make_pair(y, GroupElement::from_mask(x));
        }
    }
    return std::nullopt;
}

RigidityReport rigidity_probe(RigidityTarget target, unsigned support_bound, const std::vector<Ordinal>& level_sample) {
    if (support_bound > 16) throw OutOfRange("support bound too large for the rigidity probe");
    RigidityReport report;
    const std::uint64_t span = std::uint64_t{1} << support_bound;
    const Ordinal omega = Ordinal::omega_power(1);
    const GroupElement pair01 = GroupElement::from_indices({0, 1});

    auto constant_nu = [](const Ordinal& sup, const GroupElement& z) {
        return NuDescriptor(sup, {Segment{Ordinal{}, sup, ConstantRule{z}}});
    };
    std::vector<Ordinal> infinite_levels{omega};
    for (const auto& lv : level_sample)
        if (!lv.is_finite() && lv != omega) infinite_levels.push_back(lv);

    // Constant nonzero z on an infinite interval: B(level; n) is illegal
    // exactly when n is in supp(z).
    auto probe_constant = [&](const GroupElement& z) {
        for (const auto& lv : infinite_levels) {
            const NuDescriptor nu = constant_nu(lv, z);
            for (Index n = 0; n < support_bound; ++n) {
                const BElement eta = BElement::make(lv, n);
                const bool expect_illegal = z.contains(n);
                if (expect_illegal) ++report.obstructions_expected;
                bool illegal = false;
                Element image;
                try {
                    image = f_apply(nu, eta);
                } catch (const IllegalImage&) {
                    illegal = true;
                }
                if (illegal != nu.supp_preimage(n, lv).infinite)
                    report.failures.push_back("preimage query disagrees with f_apply at " + to_string(Element(eta)));
                if (illegal && expect_illegal) ++report.obstructions_fired;
                if (illegal != expect_illegal)
                    report.failures.push_back("constant " + z.to_string() + " on [0," + lv.to_string() + ") " +
                                              (illegal ? "obstructs " : "does not obstruct ") + to_string(Element(eta)));
                if (!illegal && image != Element(eta))
                    report.failures.push_back("constant " + z.to_string() + " moves " + to_string(Element(eta)));
            }
        }
    };

    if (target == RigidityTarget::N) {
        const PDescriptor p = n_descriptor();
        std::vector<Ordinal> levels = level_sample;
        if (levels.empty()) levels.push_back(Ordinal{});
        for (std::uint64_t m = 0; m < span; ++m) {
            const GroupElement z = GroupElement::from_mask(m);
            bool first = true;
            bool solves = false;
            for (const auto& lv : levels) {
                const bool s = p.hom(lv).apply(z) == pair01;
                if (!first && s != solves) report.failures.push_back("hat h differs across levels at " + z.to_string());
                solves = s;
                first = false;
            }
            if (!solves) continue;
            report.solutions.push_back(z);
            if (z.is_zero()) report.excludes_zero = false;
        }
        if (report.solutions.empty()) report.failures.push_back("hat h(z) = x0+x1 has no solution in range");
        if (!report.excludes_zero) report.failures.push_back("0 solves hat h(z) = x0+x1");
        for (const auto& z : report.solutions) probe_constant(z);
    } else {
        for (std::uint64_t m = 0; m < span; ++m) probe_constant(GroupElement::from_mask(m));
    }
    // The zero branch: constant 0 fixes A- and B-elements alike.
    for (const auto& lv : infinite_levels) {
        const NuDescriptor zero = constant_nu(lv, GroupElement{});
        for (Index n = 0; n < support_bound; ++n) {
            const Element eta = BElement::make(lv, n, {{Ordinal::finite(n), Coset{n, 1}}});
            if (f_apply(zero, eta) != eta) report.failures.push_back("constant 0 moves " + to_string(eta));
            const Element a = AElement{Ordinal::finite(n), GroupElement::from_mask(n)};
            if (f_apply(zero, a) != a) report.failures.push_back("constant 0 moves " + to_string(a));
        }
    }
    return report;
}

}  // namespace efg
