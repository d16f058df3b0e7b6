#include "efgame/verify.hpp"

#include <charconv>
#include <random>
#include <set>

#include "efgame/errors.hpp"
#include "efgame/oracle.hpp"
#include "efgame/strategies.hpp"

namespace efg {

namespace {

std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) {
    return rng() % n;
}

GroupElement random_element(std::mt19937_64& rng, unsigned width) {
    return GroupElement::from_mask(rng() & ((std::uint64_t{1} << width) - 1));
}

GroupHom random_hom(std::mt19937_64& rng) {
    if (below(rng, 4) == 0) return GroupHom::identity();
    std::vector<IndexMap> terms;
    const std::uint64_t count = 1 + below(rng, 2);
    for (std::uint64_t i = 0; i < count; ++i) {
        IndexMap m;
        m.period = 1 + below(rng, 3);
        m.slope = below(rng, 3);
        m.residues.clear();
        for (std::uint64_t r = 0; r < m.period; ++r) m.residues.push_back(below(rng, 6));
        terms.push_back(std::move(m));
    }
    return GroupHom(std::move(terms));
}

struct Section {
    std::string name;
    std::size_t total = 0;
    std::size_t failed = 0;
};

}  // namespace

VerifyBounds parse_bounds(std::string_view text) {
    VerifyBounds b;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string_view::npos) end = text.size();
        const std::string_view item = text.substr(start, end - start);
        const std::size_t eq = item.find('=');
        if (eq == std::string_view::npos) throw ParseError("bound '" + std::string(item) + "' needs k=v", start);
        const std::string_view key = item.substr(0, eq);
        const std::string_view val = item.substr(eq + 1);
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
        if (ec != std::errc{} || p != val.data() + val.size())
            throw ParseError("bound '" + std::string(key) + "' needs a natural value", start + eq + 1);
        if (key == "support") b.support = static_cast<unsigned>(v);
        else if (key == "gamma") b.gamma = v;
        else if (key == "prules") b.prules = static_cast<unsigned>(v);
        else if (key == "nus") b.nus = static_cast<unsigned>(v);
        else if (key == "converse") b.converse = static_cast<unsigned>(v);
        else if (key == "rigidity") b.rigidity = static_cast<unsigned>(v);
        else if (key == "seed") b.seed = v;
        else if (key == "fault") b.fault = v != 0;
        else throw ParseError("unknown bound '" + std::string(key) + "'", start);
        start = end + 1;
    }
    if (b.support == 0 || b.support > 12) throw ParseError("support must lie in 1..12", 0);
    if (b.gamma == 0 || b.gamma > 8) throw ParseError("gamma must lie in 1..8", 0);
    if (b.converse > 6) throw ParseError("converse must be at most 6", 0);
    if (b.rigidity == 0 || b.rigidity > 12) throw ParseError("rigidity must lie in 1..12", 0);
    return b;
}

PDescriptor sample_p_rule(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto beta = below(rng, 2) == 0 ? PDescriptor::BetaRule::Zero : PDescriptor::BetaRule::Identity;
    std::map<Ordinal, Ordinal> beta_overrides;
    std::map<Ordinal, GroupHom> hom_overrides;
    for (std::uint64_t a = 1; a < 3; ++a) {
        if (below(rng, 3) == 0) beta_overrides.emplace(Ordinal::finite(a), Ordinal::finite(below(rng, a + 1)));
        if (below(rng, 3) == 0) hom_overrides.emplace(Ordinal::finite(a), random_hom(rng));
    }
    return PDescriptor(beta, random_hom(rng), std::move(beta_overrides), std::move(hom_overrides));
}

NuDescriptor sample_finite_nu(std::uint64_t seed, std::uint64_t gamma, unsigned support) {
    std::mt19937_64 rng(seed);
    const Ordinal sup = Ordinal::finite(gamma);
    std::map<Ordinal, GroupElement> ovr;
    const unsigned width = std::min(support + 2, 8U);
    switch (below(rng, 4)) {
        case 0:  // consecutive pairs after x0+x1
            ovr.emplace(Ordinal{}, GroupElement::from_indices({0, 1}));
            for (std::uint64_t a = 1; a < gamma; ++a) {
                const Index e = 1 + below(rng, 3);
                ovr.emplace(Ordinal::finite(a), GroupElement::from_indices({2 * e, 2 * e + 1}));
            }
            break;
        case 1:  // the same with one single basis vector
            ovr.emplace(Ordinal{}, GroupElement::from_indices({0, 1}));
            for (std::uint64_t a = 1; a < gamma; ++a)
                ovr.emplace(Ordinal::finite(a), GroupElement::from_indices({2 * a, 2 * a + 1}));
            if (gamma > 1) ovr[Ordinal::finite(1 + below(rng, gamma - 1))] = GroupElement::basis(2 + below(rng, 4));
            break;
        case 2:
            return NuDescriptor(sup, {Segment{Ordinal{}, sup, ConstantRule{random_element(rng, width)}}});
        default:
            for (std::uint64_t a = 0; a < gamma; ++a) ovr.emplace(Ordinal::finite(a), random_element(rng, width));
            break;
    }
    return NuDescriptor(sup, {Segment{Ordinal{}, sup, ConstantRule{}}}, std::move(ovr));
}

std::optional<NuDescriptor> star_solution(const PDescriptor& p, std::uint64_t gamma, unsigned support,
                                          std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const unsigned width = std::min(support + 2, 8U);
    const std::uint64_t span = std::uint64_t{1} << width;
    std::map<Ordinal, GroupElement> values;
    for (std::uint64_t a = 0; a < gamma; ++a) {
        const Ordinal alpha = Ordinal::finite(a);
        const Ordinal beta = p.beta(alpha);
        const GroupHom& g = p.hom(alpha);
        const std::uint64_t offset = below(rng, span);
        std::optional<GroupElement> found;
        for (std::uint64_t i = 0; i < span && !found; ++i) {
            const GroupElement z = GroupElement::from_mask((offset + i) % span);
            const GroupElement target = beta == alpha ? z : values.at(beta);
            if (g.apply(z) == target) found = z;
        }
        if (!found) return std::nullopt;
        values.emplace(alpha, *found);
    }
    const Ordinal sup = Ordinal::finite(gamma);
    return NuDescriptor(sup, {Segment{Ordinal{}, sup, ConstantRule{}}}, std::move(values));
}

VerifyOutcome run_verify(const VerifyBounds& bounds, std::ostream& report) {
    VerifyOutcome outcome;
    std::vector<Section> sections;
    auto record = [&](Section& s, bool ok, const std::string& what) {
        ++s.total;
        ++outcome.grid_points;
        if (ok) return;
        ++s.failed;
        ++outcome.violations;
        report << "  FAIL [" << s.name << "] " << what << '\n';
    };

    report << "bounds: support=" << bounds.support << " gamma=" << bounds.gamma << " prules=" << bounds.prules
           << " nus=" << bounds.nus << " converse=" << bounds.converse << " rigidity=" << bounds.rigidity
           << " seed=" << bounds.seed << " fault=" << (bounds.fault ? 1 : 0) << '\n';

    // Coding bijections and the partition.
    {
        Section s{"kernel"};
        const std::vector<Ordinal> zetas{Ordinal::omega_power(1), Ordinal::omega_power(1, 2), Ordinal::omega_power(2),
                                         Ordinal::omega_power(3),
                                         Ordinal::parse("w^3+w*2+5")};
        for (const auto& z : zetas) {
            bool ok = true;
            for (std::uint64_t n = 0; n < 10000 && ok; ++n) ok = segment_code(z, segment_decode(z, n)) == n;
            record(s, ok, "segment coding round trip for " + z.to_string());
        }
        for (const auto& z : {Ordinal::omega_power(1, 2), Ordinal::omega_power(3), Ordinal::finite(5)}) {
            const OmegaPartition part(z);
            bool ok = part.member(Ordinal{}, 0);
            for (std::uint64_t n = 0; n < 10000 && ok; ++n) {
                const auto [eps, k] = part.locate(n);
                ok = eps < z && part.element(eps, k) == n && part.member(eps, n);
            }
            record(s, ok, "partition of length " + z.to_string());
        }
        sections.push_back(s);
    }

    // f_nu on closed fragments, finite and infinite levels.
    {
        Section s{"translation"};
        const unsigned width = std::min(bounds.support, 4U);
        const std::vector<GroupElement> ys{GroupElement::basis(0), GroupElement::basis(1)};
        bool fault_pending = bounds.fault;
        std::vector<Ordinal> finite_levels;
        for (std::uint64_t a = 0; a < bounds.gamma; ++a) finite_levels.push_back(Ordinal::finite(a));
        const auto finite_fragment = bounded_fragment(finite_levels, width);
        for (unsigned i = 0; i < std::min(bounds.nus, 10U); ++i) {
            const NuDescriptor nu = sample_finite_nu(bounds.seed * 1000 + i, bounds.gamma, bounds.support);
            const AuditReport r = audit_translation(nu, finite_fragment, ys, fault_pending);
            fault_pending = false;
            record(s, r.ok(), nu.to_string() + (r.ok() ? "" : ": " + r.violations.front()));
        }
        const Ordinal w = Ordinal::omega_power(1);
        const Ordinal top = Ordinal::omega_power(1, 2);
        const Ordinal palette = Ordinal::omega_power(3);
        const std::vector<NuDescriptor> infinite{
            initial_nu(palette).append(top, BasisInjection{dyadic_slot(0, Ordinal{}), Ordinal::finite(1), top}),
            initial_nu(palette).append(top, PairInjection{dyadic_slot(0, Ordinal{}), Ordinal::finite(1), top}),
            initial_nu(palette)
                .append(w, BasisInjection{dyadic_slot(0, Ordinal{}), Ordinal::finite(1), w})
                .append(top, BasisInjection{dyadic_slot(1, Ordinal{}), w, w})
                .with_override(w + Ordinal::finite(1), GroupElement::from_indices({1, 2})),
        };
        const auto infinite_fragment =
            bounded_fragment({Ordinal{}, Ordinal::finite(1), w, w + Ordinal::finite(1)}, std::min(width, 3U));
        for (const auto& nu : infinite) {
            const AuditReport r = audit_translation(nu, infinite_fragment, ys, fault_pending);
            fault_pending = false;
            record(s, r.ok(), nu.to_string() + (r.ok() ? "" : ": " + r.violations.front()));
        }
        sections.push_back(s);
    }

    // star_condition against R1 preservation.
    {
        Section s{"star"};
        std::vector<std::pair<std::string, PDescriptor>> ps{{"N", n_descriptor()}};
        for (unsigned i = 0; i < bounds.prules; ++i)
            ps.emplace_back("p#" + std::to_string(i), sample_p_rule(bounds.seed * 7919 + i));
        for (const auto& [pname, p] : ps) {
            std::vector<NuDescriptor> nus;
            for (unsigned i = 0; i < bounds.nus; ++i)
                nus.push_back(sample_finite_nu(bounds.seed * 104729 + i, bounds.gamma, bounds.support));
            for (std::uint64_t k = 0; k < 2; ++k)
                if (auto sol = star_solution(p, bounds.gamma, bounds.support, bounds.seed + k)) nus.push_back(*sol);
            for (const auto& nu : nus) {
                for (std::uint64_t g = 1; g <= bounds.gamma; ++g) {
                    bool ok;
                    std::string detail;
                    try {
                        const EquivalenceResult r =
                            verify_r1_equivalence(p, nu, Ordinal::finite(g), bounds.support);
                        ok = r.agree();
                        if (!ok)
                            detail = std::string(": star=") + (r.star ? "1" : "0") +
                                     " r1=" + (r.r1_preserved ? "1" : "0");
                    } catch (const Error& e) {
                        ok = false;
                        detail = std::string(": ") + e.what();
                    }
                    record(s, ok, pname + " " + nu.to_string() + " gamma=" + std::to_string(g) + detail);
                }
            }
        }
        sections.push_back(s);
    }

    // Automorphisms of a single level are translations.
    {
        Section s{"converse"};
        for (unsigned b = 2; b <= bounds.converse; ++b) {
            const ConverseReport r = converse_translation_search({Ordinal{}}, b);
            const std::uint64_t want = std::uint64_t{1} << b;
            record(s, r.count == want && r.all_translations,
                   "b=" + std::to_string(b) + ": " + std::to_string(r.count) + " maps, expected " + std::to_string(want));
        }
        const ConverseReport vac = converse_translation_search({Ordinal{}}, 2, std::vector<GroupElement>{});
        record(s, vac.vacuous && vac.count == 24, "empty y_set is flagged vacuous with 4! maps");
        const std::vector<std::uint64_t> swap{0, 2, 1, 3};
        record(s, commutation_witness(swap, {GroupElement::basis(0), GroupElement::basis(1)}).has_value(),
               "a transposition is rejected");
        sections.push_back(s);
    }

    // The obstruction to moving (0,x0) to (0,x1) in N.
    {
        Section s{"rigidity"};
        const std::vector<Ordinal> levels{Ordinal{}, Ordinal::omega_power(1), Ordinal::omega_power(2)};
        const RigidityReport n = rigidity_probe(RigidityTarget::N, bounds.rigidity, levels);
        record(s, n.ok() && !n.solutions.empty() && n.excludes_zero &&
                      n.obstructions_fired == n.obstructions_expected,
               "N: " + std::to_string(n.solutions.size()) + " solutions, " + std::to_string(n.obstructions_fired) +
                   "/" + std::to_string(n.obstructions_expected) + " obstructions" +
                   (n.failures.empty() ? "" : ": " + n.failures.front()));
        const RigidityReport m = rigidity_probe(RigidityTarget::M, std::min(bounds.rigidity, 8U), levels);
        record(s, m.ok() && m.obstructions_fired == m.obstructions_expected,
               "M: " + std::to_string(m.obstructions_fired) + "/" + std::to_string(m.obstructions_expected) +
                   " obstructions" + (m.failures.empty() ? "" : ": " + m.failures.front()));
        sections.push_back(s);
    }

    for (const auto& s : sections)
        report << s.name << ": " << (s.total - s.failed) << "/" << s.total << " grid points pass\n";
    report << "VERDICT: " << (outcome.pass() ? "PASS" : "FAIL") << ' ' << outcome.violations << "-violations\n";
    return outcome;
}

}  // namespace efg
