#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "efgame/errors.hpp"
#include "efgame/structures.hpp"
#include "support.hpp"

using efg::AElement;
using efg::BElement;
using efg::Coset;
using efg::Element;
using efg::GroupElement;
using efg::Ordinal;
using efg::StructureHandle;
using namespace testing;

namespace {

Ordinal w(std::uint64_t e = 1, std::uint64_t c = 1) { return Ordinal::omega_power(e, c); }
Ordinal n(std::uint64_t k) { return Ordinal::finite(k); }
GroupElement x(std::initializer_list<efg::Index> idx) { return GroupElement::from_indices(idx); }
AElement a(Ordinal level, GroupElement v) { return AElement{std::move(level), std::move(v)}; }

// The coset sequence of a finite-level B element, computed from its fields.
std::vector<Coset> as_function(const BElement& b) {
    std::vector<Coset> out;
    for (std::uint64_t i = 0; i < b.level().as_finite(); ++i) out.push_back(b.at(n(i)));
    return out;
}

}  // namespace

TEST_CASE("membership in restricted models") {
    const StructureHandle m = StructureHandle::plain_m();
    CHECK_FALSE(efg::element_in_structure(m.restricted(w()), a(w(), {})));
    CHECK(efg::element_in_structure(m, BElement::make(w(1, 2), 3)));
    CHECK(efg::element_in_structure(m.restricted(n(5)), BElement::make(n(3), 0, {{n(1), Coset{0, 1}}})));
    CHECK(efg::element_in_structure(m.restricted(w()), a(n(1000), x({1}))));
}

TEST_CASE("sorts and level preorders") {
    const StructureHandle m = StructureHandle::plain_m();
    const Element a0 = a(Ordinal{}, x({0}));
    const Element aw = a(w(), x({1}));
    const Element b = BElement::make(n(2), 0);
    CHECK(efg::eval_E1(m, a0, aw));
    CHECK_FALSE(efg::eval_E1(m, aw, a0));
    CHECK_FALSE(efg::eval_E1(m, b, a0));
    CHECK_THROWS_AS(efg::eval_E1(m, b, a0, true), efg::SortMismatch);
    CHECK(efg::eval_P1(m, a0));
    CHECK_FALSE(efg::eval_P2(m, a0));
    CHECK(efg::eval_P2(m, b));
}

TEST_CASE("E2 on a fragment is a total preorder whose classes are the levels") {
    std::mt19937_64 rng(5);
    const StructureHandle m = StructureHandle::plain_m();
    std::vector<Element> frag;
    for (int i = 0; i < 20; ++i) {
        if (i % 3 == 0) frag.push_back(BElement::make(w() + n(pick(rng, 3)), pick(rng, 4)));
        else frag.push_back(random_finite_b(rng, 4, 3));
    }
    for (const auto& p : frag) {
        CHECK(efg::eval_E2(m, p, p));
        for (const auto& q : frag) {
            CHECK((efg::eval_E2(m, p, q) || efg::eval_E2(m, q, p)));
            const bool same_class = efg::eval_E2(m, p, q) && efg::eval_E2(m, q, p);
            CHECK(same_class == (efg::level_of(p) == efg::level_of(q)));
            for (const auto& r : frag)
                if (efg::eval_E2(m, p, q) && efg::eval_E2(m, q, r)) CHECK(efg::eval_E2(m, p, r));
        }
    }
}

TEST_CASE("translations F_y") {
    const StructureHandle m = StructureHandle::plain_m();
    CHECK(efg::eval_F(m, x({0, 1}), a(Ordinal{}, x({1}))) == Element(a(Ordinal{}, x({0}))));
    const Element eta = BElement::make(w(), 2, {{n(3), Coset{2, 1}}});
    CHECK(efg::eval_F(m, x({2, 5}), eta) == eta);
    std::mt19937_64 rng(6);
    for (int i = 0; i < 50; ++i) {
        const GroupElement y = random_element(rng, 8);
        const Element e = a(random_ordinal(rng), random_element(rng, 8));
        CHECK(efg::eval_F(m, y, efg::eval_F(m, y, e)) == e);
    }
}

TEST_CASE("the relation R") {
    const StructureHandle m = StructureHandle::plain_m();
    CHECK(efg::eval_R(m, BElement::make(w(), 2), a(n(3), {})));
    CHECK(efg::eval_R(m, BElement::make(w(), 2, {{n(3), Coset{2, 1}}}), a(n(3), x({2}))));
    CHECK_FALSE(efg::eval_R(m, BElement::make(w(), 2), a(w(), {})));
    CHECK_FALSE(efg::eval_R(m, BElement::make(w(), 2), a(n(3), x({2}))));
}

TEST_CASE("the relation R1 of N") {
    const StructureHandle nn = efg::make_N();
    CHECK(efg::eval_R1(nn, a(Ordinal{}, x({0, 1})), a(n(5), x({2, 3}))));
    std::mt19937_64 rng(7);
    for (int i = 0; i < 30; ++i)
        CHECK_FALSE(efg::eval_R1(nn, a(n(1), random_element(rng, 6)), a(n(5), random_element(rng, 6))));
    for (const auto& lvl : {Ordinal{}, n(4), w(), w(2) + n(3)}) CHECK(efg::eval_R1(nn, a(Ordinal{}, {}), a(lvl, {})));
    CHECK(nn.p->beta(w(2) + n(3)).is_zero());
    CHECK_THROWS_AS(efg::eval_R1(StructureHandle::plain_m(), a(Ordinal{}, {}), a(n(1), {})), efg::OutOfRange);
    const StructureHandle cut = nn.restricted(w());
    CHECK(cut.is_expanded());
    CHECK(cut.cutoff == w());
}

TEST_CASE("p-descriptors") {
    const efg::PDescriptor p(efg::PDescriptor::BetaRule::Identity, efg::GroupHom::identity(), {{n(3), n(1)}},
                             {{n(2), efg::GroupHom::zero()}});
    CHECK(p.beta(n(3)) == n(1));
    CHECK(p.beta(w()) == w());
    CHECK(p.hom(n(2)) == efg::GroupHom::zero());
    CHECK(p.hom(n(4)).is_identity());
    CHECK_THROWS_AS(efg::PDescriptor(efg::PDescriptor::BetaRule::Zero, efg::GroupHom::identity(), {{n(2), n(3)}}),
                    efg::OutOfRange);
}

TEST_CASE("B elements are canonical") {
    CHECK(BElement::make(n(2), 3) == BElement::make(n(2), 0, {{n(0), Coset{3, 0}}, {n(1), Coset{3, 0}}}));
    CHECK(BElement::make(w(), 3, {{n(2), Coset{3, 0}}}).deviations().empty());
    CHECK_THROWS_AS(BElement::make(n(2), 0, {{n(2), Coset{1, 0}}}), efg::OutOfRange);

    std::mt19937_64 rng(8);
    for (int i = 0; i < 2000; ++i) {
        const BElement p = random_finite_b(rng, 5, 4);
        const BElement q = random_finite_b(rng, 5, 4);
        const bool same_function = p.level() == q.level() && as_function(p) == as_function(q);
        REQUIRE(same_function == (p == q));
    }
}

TEST_CASE("R determines B elements of finite level") {
    std::mt19937_64 rng(9);
    const StructureHandle m = StructureHandle::plain_m();
    const auto values = all_elements(6);
    for (int i = 0; i < 300; ++i) {
        const BElement p = random_finite_b(rng, 3, 4);
        // a second element of the same level, often differing in one place
        std::map<Ordinal, Coset> dev;
        for (std::uint64_t l = 0; l < p.level().as_finite(); ++l) dev.emplace(n(l), p.at(n(l)));
        if (!dev.empty() && i % 3 != 0)
            dev[n(pick(rng, dev.size()))] = Coset{pick(rng, 4), static_cast<unsigned>(pick(rng, 2))};
        const BElement q = BElement::make(p.level(), 0, dev);
        bool same_graph = true;
        for (std::uint64_t l = 0; l < p.level().as_finite() && same_graph; ++l)
            for (const auto& v : values)
                if (efg::eval_R(m, p, a(n(l), v)) != efg::eval_R(m, q, a(n(l), v))) {
                    same_graph = false;
                    break;
                }
        CHECK(same_graph == (p == q));
    }
}

TEST_CASE("restriction commutes with evaluation") {
    std::mt19937_64 rng(10);
    const StructureHandle full = efg::make_N();
    const StructureHandle cut = full.restricted(n(4));
    for (int i = 0; i < 200; ++i) {
        const AElement e1 = a(n(pick(rng, 4)), random_element(rng, 5));
        const AElement e2 = a(n(pick(rng, 4)), random_element(rng, 5));
        const BElement b = random_finite_b(rng, 3, 4);
        CHECK(efg::eval_E1(full, e1, e2) == efg::eval_E1(cut, e1, e2));
        CHECK(efg::eval_R(full, b, e1) == efg::eval_R(cut, b, e1));
        CHECK(efg::eval_R1(full, e2, e1) == efg::eval_R1(cut, e2, e1));
        CHECK(efg::eval_F(full, e2.value, e1) == efg::eval_F(cut, e2.value, e1));
    }
}

TEST_CASE("element wire form") {
    const Element e = BElement::make(w() + n(1), 4, {{n(2), Coset{1, 1}}, {n(0), Coset{4, 1}}});
    CHECK(efg::parse_element(efg::to_string(e)) == e);
    CHECK(efg::parse_element("A(w^1*1; x2+x3)") == Element(a(w(), x({2, 3}))));
    CHECK(efg::parse_element("B(w+1; 4; 0->G1_4, 2->G1_1)") == e);
    CHECK(efg::parse_element("B(w^1*1; 2; 0->G1_2)") == Element(BElement::make(w(), 2, {{n(0), Coset{2, 1}}})));
    CHECK(efg::to_string(a(Ordinal{}, {})) == "A(0; 0)");
    CHECK_THROWS_AS(efg::parse_element("A(0, x1)"), efg::ParseError);
    CHECK_THROWS_AS(efg::parse_element("C(0; x1)"), efg::ParseError);
    CHECK_THROWS_AS(efg::parse_element("B(2; 0; 5->G1_0)"), efg::ParseError);
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        const Element b = random_finite_b(rng, 5, 6);
        CHECK(efg::parse_element(efg::to_string(b)) == b);
        const Element ae = a(random_ordinal(rng), random_element(rng, 12));
        CHECK(efg::parse_element(efg::to_string(ae)) == ae);
    }
}
