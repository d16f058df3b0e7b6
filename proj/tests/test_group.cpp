#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "efgame/errors.hpp"
#include "efgame/group.hpp"
#include "efgame/structures.hpp"
#include "support.hpp"

using efg::Coset;
using efg::GroupElement;
using efg::GroupHom;
using namespace testing;

namespace {

GroupElement x(std::initializer_list<efg::Index> idx) { return GroupElement::from_indices(idx); }

}  // namespace

TEST_CASE("addition") {
    CHECK(x({0, 1}) + x({1, 2}) == x({0, 2}));
    std::mt19937_64 rng(1);
    for (int i = 0; i < 50; ++i) {
        const GroupElement a = random_element(rng, 10);
        CHECK((a + a).is_zero());
        CHECK(a + GroupElement{} == a);
        CHECK(efg::add(a, a).is_zero());
    }
    CHECK(x({3, 3, 5}) == x({5}));
}

TEST_CASE("elementary abelian 2-group on small supports") {
    const auto all = all_elements(6);
    for (const auto& a : all)
        for (const auto& b : all) {
            REQUIRE(a + b == b + a);
            REQUIRE((a + b).mask() == (a.mask() ^ b.mask()));
        }
    for (const auto& a : all)
        for (const auto& b : all)
            for (const auto& c : all) REQUIRE((a + b) + c == a + (b + c));
}

TEST_CASE("wire forms") {
    CHECK(GroupElement{}.to_string() == "0");
    CHECK(x({3, 1}).to_string() == "x1+x3");
    CHECK(GroupElement::parse("x1+x3") == x({1, 3}));
    CHECK(GroupElement::parse("0").is_zero());
    CHECK((Coset{3, 1}).to_string() == "G1_3");
    CHECK(Coset::parse("G0_12") == Coset{12, 0});
    CHECK_THROWS_AS(GroupElement::parse("x1+"), efg::ParseError);
    CHECK_THROWS_AS(GroupElement::parse("y1"), efg::ParseError);
    CHECK_THROWS_AS(Coset::parse("G2_1"), efg::ParseError);
    CHECK_THROWS_AS(x({64}).mask(), efg::OutOfRange);
}

TEST_CASE("coset translation") {
    CHECK(efg::coset_translate(x({0, 3}), Coset{3, 0}) == Coset{3, 1});
    CHECK(efg::coset_translate(x({0, 1}), Coset{3, 0}) == Coset{3, 0});
    std::mt19937_64 rng(2);
    for (int i = 0; i < 50; ++i) {
        const GroupElement a = random_element(rng, 10);
        const GroupElement b = random_element(rng, 10);
        for (efg::Index n = 0; n < 8; ++n)
            for (unsigned l = 0; l < 2; ++l) {
                const Coset c{n, l};
                CHECK(efg::coset_translate(a, efg::coset_translate(a, c)) == c);
                CHECK(efg::coset_translate(a, efg::coset_translate(b, c)) == efg::coset_translate(a + b, c));
                CHECK(efg::coset_translate(a, c).n == n);
            }
    }
}

TEST_CASE("coset membership") {
    CHECK(efg::coset_member(x({2}), Coset{2, 1}));
    for (efg::Index n = 0; n < 20; ++n) CHECK(efg::coset_member(GroupElement{}, Coset{n, 0}));
    for (const auto& g : all_elements(7))
        for (efg::Index n = 0; n < 7; ++n)
            for (unsigned l = 0; l < 2; ++l) {
                // G^l_n = G^0_n + l*x_n: g is a member iff g + l*x_n avoids n
                const GroupElement shifted = l ? g + x({n}) : g;
                const bool brute = !shifted.contains(n);
                REQUIRE(efg::coset_member(g, Coset{n, l}) == brute);
                REQUIRE(reference_member(g, Coset{n, l}) == brute);
            }
}

TEST_CASE("hat of the parity map") {
    const GroupHom h = GroupHom::hat(efg::parity_index_map());
    CHECK(efg::hom_apply(h, x({4, 5})) == x({0, 1}));
    CHECK(efg::hom_apply(h, x({0, 2})).is_zero());
    CHECK(efg::hom_apply(GroupHom::identity(), x({1, 9, 40})) == x({1, 9, 40}));
    CHECK(efg::hom_apply(GroupHom::zero(), x({1, 9})).is_zero());
    CHECK(GroupHom::identity().is_identity());
    CHECK(h.is_periodic());
    CHECK_FALSE(GroupHom::identity().is_periodic());
}

TEST_CASE("homomorphisms are additive and match the reference evaluation") {
    std::mt19937_64 rng(3);
    std::vector<GroupHom> homs{GroupHom::hat(efg::parity_index_map())};
    for (int i = 0; i < 10; ++i) homs.push_back(random_hom(rng));
    const auto all = all_elements(6);
    for (const auto& g : homs) {
        for (const auto& a : all) {
            REQUIRE(g.apply(a) == reference_apply(g, a));
            for (const auto& b : all) REQUIRE(g.apply(a + b) == g.apply(a) + g.apply(b));
        }
    }
}

TEST_CASE("hom preimages") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 20; ++i) {
        const GroupHom g = random_hom(rng);
        for (efg::Index m = 0; m < 12; ++m) {
            std::vector<efg::Index> brute;
            for (efg::Index k = 0; k < 40; ++k)
                if (reference_image(g, k).contains(m)) brute.push_back(k);
            CHECK(g.preimage(m, 40) == brute);
        }
    }
}
