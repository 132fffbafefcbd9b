#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>

#include "doctest.h"
#include "handlecalc/gog.hpp"

using namespace handlecalc;

namespace {

// Three cyclic vertices joined in a path by two cyclic edges; chi = -1/4.
GraphOfGroups path_shape() {
    GraphOfGroups g;
    g.add_vertex("l1", FiniteGroup::cyclic(6));
    g.add_vertex("m", FiniteGroup::cyclic(12));
    g.add_vertex("l2", FiniteGroup::cyclic(12));
    g.add_edge("e1", FiniteGroup::cyclic(3), "l1", "m", {2}, {4});
    g.add_edge("e2", FiniteGroup::cyclic(4), "l2", "m", {3}, {3});
    return g;
}

GraphOfGroups single_vertex(long long n) {
    GraphOfGroups g;
    g.add_vertex("v", FiniteGroup::cyclic(n));
    return g;
}

// Folds a relator through one vertex group; every letter must lie in that
// vertex's generator range.
Elt eval_in_vertex(const Presentation& p, const std::string& vid, const FiniteGroup& g,
                   const Word& w) {
    int base = p.vertex_gen_base.at(vid);
    int k = static_cast<int>(g.generators().size());
    Elt acc = g.id();
    for (int letter : w) {
        int idx = std::abs(letter) - 1 - base;
        REQUIRE(idx >= 0);
        REQUIRE(idx < k);
        Elt step = g.generators()[idx];
        acc = g.mul(acc, letter > 0 ? step : g.inv(step));
    }
    return acc;
}

}  // namespace

TEST_CASE("euler characteristic") {
    CHECK(single_vertex(1).euler_characteristic() == Rational(1));
    CHECK(single_vertex(2).euler_characteristic() == Rational(1, 2));
    CHECK(path_shape().euler_characteristic() == Rational(-1, 4));

    SUBCASE("two vertices sharing a small edge") {
        GraphOfGroups g;
        g.add_vertex("a", FiniteGroup::cyclic(32));
        g.add_vertex("b", FiniteGroup::cyclic(8));
        g.add_edge("e", FiniteGroup::cyclic(4), "a", "b", {8}, {2});
        CHECK(g.euler_characteristic() == Rational(-3, 32));
    }

    SUBCASE("loop subtracts without adding a vertex") {
        GraphOfGroups g;
        g.add_vertex("v", FiniteGroup::cyclic(1));
        g.add_edge("l", FiniteGroup::cyclic(1), "v", "v", {}, {});
        CHECK(g.euler_characteristic() == Rational(0));
    }
}

TEST_CASE("genus from order") {
    CHECK(single_vertex(5).genus_from_order(5) == 0);
    CHECK(path_shape().genus_from_order(12) == 4);
    CHECK(path_shape().genus_from_order(24) == 7);

    SUBCASE("non-integral chi times n is rejected") {
        CHECK_THROWS_AS(single_vertex(2).genus_from_order(3), InadmissibleError);
        CHECK_THROWS_AS(path_shape().genus_from_order(5), InadmissibleError);
    }
    SUBCASE("negative genus is rejected") {
        CHECK_THROWS_AS(single_vertex(2).genus_from_order(4), InadmissibleError);
        CHECK_THROWS_AS(single_vertex(1).genus_from_order(3), InadmissibleError);
    }
    SUBCASE("order must be positive") {
        CHECK_THROWS_AS(single_vertex(2).genus_from_order(0), ValidationError);
    }
    SUBCASE("zero chi gives genus one at every order") {
        GraphOfGroups g;
        g.add_vertex("v", FiniteGroup::cyclic(2));
        g.add_edge("l", FiniteGroup::cyclic(2), "v", "v", {1}, {1});
        CHECK(g.euler_characteristic() == Rational(0));
        CHECK(g.genus_from_order(2) == 1);
        CHECK(g.genus_from_order(100) == 1);
    }
}

TEST_CASE("free graphs recover the Betti number") {
    // All trivial groups: g - 1 counts independent cycles.
    GraphOfGroups g;
    for (const char* v : {"a", "b", "c", "d"}) g.add_vertex(v, FiniteGroup::cyclic(1));
    g.add_edge("e1", FiniteGroup::cyclic(1), "a", "b", {}, {});
    g.add_edge("e2", FiniteGroup::cyclic(1), "b", "c", {}, {});
    g.add_edge("e3", FiniteGroup::cyclic(1), "c", "d", {}, {});
    g.add_edge("e4", FiniteGroup::cyclic(1), "d", "a", {}, {});
    g.add_edge("e5", FiniteGroup::cyclic(1), "a", "c", {}, {});
    CHECK(g.euler_characteristic() == Rational(-1));
    CHECK(g.genus_from_order(1) == 2);
}

TEST_CASE("edge and vertex validation") {
    GraphOfGroups g;
    g.add_vertex("a", FiniteGroup::cyclic(4));
    CHECK_THROWS_AS(g.add_vertex("a", FiniteGroup::cyclic(2)), ValidationError);
    CHECK_THROWS_AS(g.add_edge("e", FiniteGroup::cyclic(2), "a", "zz", {2}, {0}),
                    ValidationError);

    SUBCASE("edge maps must be monomorphisms") {
        g.add_vertex("b", FiniteGroup::cyclic(2));
        // 1 in Z4 has order 4, cannot receive a generator of Z2
        CHECK_THROWS_AS(g.add_edge("e", FiniteGroup::cyclic(2), "a", "b", {1}, {1}),
                        ValidationError);
        // collapse to identity is a homomorphism but not injective
        CHECK_THROWS_AS(g.add_edge("e", FiniteGroup::cyclic(2), "a", "b", {0}, {1}),
                        ValidationError);
        g.add_edge("e", FiniteGroup::cyclic(2), "a", "b", {2}, {1});
        CHECK_THROWS_AS(g.add_edge("e", FiniteGroup::cyclic(2), "a", "b", {2}, {1}),
                        ValidationError);
    }
}

TEST_CASE("connectivity") {
    GraphOfGroups g;
    CHECK_FALSE(g.is_connected());
    CHECK_THROWS_AS(g.validate(), ValidationError);
    g.add_vertex("a", FiniteGroup::cyclic(2));
    CHECK(g.is_connected());
    g.add_vertex("b", FiniteGroup::cyclic(2));
    CHECK_FALSE(g.is_connected());
    CHECK_THROWS_AS(g.validate(), ValidationError);
    g.add_edge("e", FiniteGroup::cyclic(1), "a", "b", {}, {});
    CHECK(g.is_connected());
    g.validate();
}

TEST_CASE("trivial edges and normal form") {
    SUBCASE("edge filling one endpoint is trivial") {
        GraphOfGroups g;
        g.add_vertex("a", FiniteGroup::cyclic(2));
        g.add_vertex("b", FiniteGroup::cyclic(6));
        g.add_edge("e", FiniteGroup::cyclic(2), "a", "b", {1}, {3});
        CHECK(g.trivial_edges() == std::vector<std::string>{"e"});
        CHECK_FALSE(g.in_normal_form());

        GraphOfGroups r = g.reduce_to_normal_form();
        CHECK(r.in_normal_form());
        CHECK(r.vertices().size() == 1);
        CHECK(r.edges().empty());
        CHECK(r.vertex("b").group->order() == 6);
        CHECK(r.euler_characteristic() == g.euler_characteristic());
    }

    SUBCASE("loops are never trivial") {
        GraphOfGroups g;
        g.add_vertex("v", FiniteGroup::cyclic(2));
        g.add_edge("l", FiniteGroup::cyclic(2), "v", "v", {1}, {1});
        CHECK(g.trivial_edges().empty());
        CHECK(g.in_normal_form());
    }

    SUBCASE("proper edge on both ends is kept") {
        GraphOfGroups g = path_shape();
        CHECK(g.trivial_edges().empty());
        CHECK(g.in_normal_form());
    }

    SUBCASE("chain of trivial edges collapses to the largest group") {
        GraphOfGroups g;
        g.add_vertex("a", FiniteGroup::cyclic(2));
        g.add_vertex("b", FiniteGroup::cyclic(4));
        g.add_vertex("c", FiniteGroup::cyclic(8));
        g.add_edge("e1", FiniteGroup::cyclic(2), "a", "b", {1}, {2});
        g.add_edge("e2", FiniteGroup::cyclic(4), "b", "c", {1}, {2});
        CHECK(g.euler_characteristic() == Rational(1, 8));

        GraphOfGroups r = g.reduce_to_normal_form();
        CHECK(r.vertices().size() == 1);
        CHECK(r.edges().empty());
        CHECK(r.vertex("c").group->order() == 8);
        CHECK(r.euler_characteristic() == Rational(1, 8));
    }

    SUBCASE("reduction is idempotent") {
        GraphOfGroups r = path_shape().reduce_to_normal_form();
        GraphOfGroups rr = r.reduce_to_normal_form();
        CHECK(r.vertices().size() == rr.vertices().size());
        CHECK(r.edges().size() == rr.edges().size());
        CHECK(r.euler_characteristic() == rr.euler_characteristic());
    }
}

TEST_CASE("collapse recomposes incident edge maps") {
    // Trivial Z4 edge embeds by the automorphism 1 -> 3 at its full end, so
    // the surviving Z2 edge must land on 4 = omega(alpha^{-1}(2)) in Z8.
    GraphOfGroups g;
    g.add_vertex("a", FiniteGroup::cyclic(4));
    g.add_vertex("b", FiniteGroup::cyclic(8));
    g.add_vertex("c", FiniteGroup::cyclic(4));
    g.add_edge("t", FiniteGroup::cyclic(4), "a", "b", {3}, {2});
    g.add_edge("k", FiniteGroup::cyclic(2), "c", "a", {2}, {2});

    GraphOfGroups r = g.reduce_to_normal_form();
    CHECK(r.vertices().size() == 2);
    CHECK(r.edges().size() == 1);
    const GogEdge& k = r.edge("k");
    CHECK(k.from == "c");
    CHECK(k.to == "b");
    CHECK(k.alpha.gen_images == std::vector<Elt>{2});
    CHECK(k.omega.gen_images == std::vector<Elt>{4});
    CHECK(r.euler_characteristic() == g.euler_characteristic());
    CHECK(r.in_normal_form());
}

TEST_CASE("parallel trivial edges leave a loop") {
    GraphOfGroups g;
    g.add_vertex("a", FiniteGroup::cyclic(2));
    g.add_vertex("b", FiniteGroup::cyclic(2));
    g.add_edge("e1", FiniteGroup::cyclic(2), "a", "b", {1}, {1});
    g.add_edge("e2", FiniteGroup::cyclic(2), "a", "b", {1}, {1});
    CHECK(g.euler_characteristic() == Rational(0));

    GraphOfGroups r = g.reduce_to_normal_form();
    CHECK(r.vertices().size() == 1);
    CHECK(r.edges().size() == 1);
    CHECK(r.edge("e2").is_loop());
    CHECK(r.euler_characteristic() == Rational(0));
    CHECK(r.in_normal_form());
}

TEST_CASE("subdivision") {
    GraphOfGroups g = path_shape();
    GraphOfGroups s = g.subdivide_edge("e1");
    CHECK(s.vertices().size() == 4);
    CHECK(s.edges().size() == 3);
    CHECK(s.vertex("e1#v").group->order() == 3);
    CHECK(s.edge("e1#a").from == "l1");
    CHECK(s.edge("e1#a").to == "e1#v");
    CHECK(s.edge("e1#b").from == "e1#v");
    CHECK(s.edge("e1#b").to == "m");
    CHECK(s.euler_characteristic() == g.euler_characteristic());
    CHECK(s.genus_from_order(12) == 4);

    SUBCASE("both halves are trivial and reduce away") {
        GraphOfGroups r = s.reduce_to_normal_form();
        CHECK(r.vertices().size() == 3);
        CHECK(r.edges().size() == 2);
        CHECK(r.euler_characteristic() == Rational(-1, 4));
    }

    SUBCASE("subdividing a loop preserves chi") {
        GraphOfGroups h;
        h.add_vertex("v", FiniteGroup::cyclic(2));
        h.add_edge("l", FiniteGroup::cyclic(2), "v", "v", {1}, {1});
        GraphOfGroups sh = h.subdivide_edge("l");
        CHECK_FALSE(sh.edge("l#a").is_loop());
        CHECK(sh.euler_characteristic() == Rational(0));
    }

    SUBCASE("fresh ids must be free") {
        GraphOfGroups h;
        h.add_vertex("v", FiniteGroup::cyclic(2));
        h.add_vertex("l#v", FiniteGroup::cyclic(2));
        h.add_edge("l", FiniteGroup::cyclic(2), "v", "l#v", {1}, {1});
        CHECK_THROWS_AS(static_cast<void>(h.subdivide_edge("l")), ValidationError);
    }
}

TEST_CASE("spanning tree") {
    CHECK(path_shape().spanning_tree() == std::vector<std::string>{"e1", "e2"});
    CHECK(single_vertex(4).spanning_tree().empty());

    SUBCASE("loops never enter the tree") {
        GraphOfGroups g;
        g.add_vertex("v", FiniteGroup::cyclic(1));
        g.add_edge("l", FiniteGroup::cyclic(1), "v", "v", {}, {});
        CHECK(g.spanning_tree().empty());
    }

    SUBCASE("cycle drops exactly one edge") {
        GraphOfGroups g;
        for (const char* v : {"a", "b", "c"}) g.add_vertex(v, FiniteGroup::cyclic(1));
        g.add_edge("e1", FiniteGroup::cyclic(1), "a", "b", {}, {});
        g.add_edge("e2", FiniteGroup::cyclic(1), "b", "c", {}, {});
        g.add_edge("e3", FiniteGroup::cyclic(1), "c", "a", {}, {});
        // breadth-first from "a" picks e1 and e3; e2 closes the cycle
        CHECK(g.spanning_tree() == std::vector<std::string>{"e1", "e3"});
        Presentation p = g.fundamental_presentation();
        CHECK(p.stable_letter_index.count("e2") == 1);
        CHECK(p.generators.size() == 1);
        CHECK(p.relators.empty());
    }
}

TEST_CASE("fundamental presentation") {
    SUBCASE("single cyclic vertex") {
        Presentation p = single_vertex(4).fundamental_presentation();
        REQUIRE(p.generators.size() == 1);
        CHECK(p.generators[0].kind == Presentation::Generator::VertexGen);
        CHECK(p.generators[0].owner == "v");
        REQUIRE(p.relators.size() == 1);
        CHECK(p.relators[0] == Word{1, 1, 1, 1});
    }

    SUBCASE("trivial vertex with a loop presents the integers") {
        GraphOfGroups g;
        g.add_vertex("v", FiniteGroup::cyclic(1));
        g.add_edge("l", FiniteGroup::cyclic(1), "v", "v", {}, {});
        Presentation p = g.fundamental_presentation();
        REQUIRE(p.generators.size() == 1);
        CHECK(p.generators[0].kind == Presentation::Generator::StableLetter);
        CHECK(p.generators[0].name == "t.l");
        CHECK(p.relators.empty());
        CHECK(p.tree_edges.empty());
        CHECK(p.stable_letter_index.at("l") == 0);
    }

    SUBCASE("tree edge identifies the two copies") {
        GraphOfGroups g;
        g.add_vertex("a", FiniteGroup::cyclic(2));
        g.add_vertex("b", FiniteGroup::cyclic(2));
        g.add_edge("e", FiniteGroup::cyclic(2), "a", "b", {1}, {1});
        Presentation p = g.fundamental_presentation();
        REQUIRE(p.generators.size() == 2);
        CHECK(p.stable_letter_index.empty());
        REQUIRE(p.relators.size() == 3);
        CHECK(p.relators[0] == Word{1, 1});
        CHECK(p.relators[1] == Word{2, 2});
        CHECK(p.relators[2] == Word{1, -2});
    }

    SUBCASE("loop at a nontrivial vertex conjugates by the stable letter") {
        GraphOfGroups g;
        g.add_vertex("v", FiniteGroup::cyclic(2));
        g.add_edge("l", FiniteGroup::cyclic(2), "v", "v", {1}, {1});
        Presentation p = g.fundamental_presentation();
        REQUIRE(p.generators.size() == 2);
        CHECK(p.generators[1].kind == Presentation::Generator::StableLetter);
        REQUIRE(p.relators.size() == 2);
        CHECK(p.relators[0] == Word{1, 1});
        // t a t^-1 a^-1: the loop acts trivially on its edge group here
        CHECK(p.relators[1] == Word{2, 1, -2, -1});
    }

    SUBCASE("path shape counts") {
        Presentation p = path_shape().fundamental_presentation();
        CHECK(p.generators.size() == 3);
        CHECK(p.stable_letter_index.empty());
        CHECK(p.relators.size() == 5);
        CHECK(p.tree_edges == std::vector<std::string>{"e1", "e2"});
    }

    SUBCASE("dihedral vertex relator count") {
        GraphOfGroups g;
        g.add_vertex("v", FiniteGroup::dihedral(4));
        Presentation p = g.fundamental_presentation();
        CHECK(p.generators.size() == 2);
        // n * k - (n - 1) closure relators for the BFS word tree
        CHECK(p.relators.size() == 8 * 2 - 7);
        const FiniteGroup& d4 = *g.vertex("v").group;
        for (const Word& w : p.relators) CHECK(eval_in_vertex(p, "v", d4, w) == d4.id());
    }
}

TEST_CASE("element words") {
    GraphOfGroups g = path_shape();
    Presentation p = g.fundamental_presentation();
    const FiniteGroup& m = *g.vertex("m").group;
    int base = p.vertex_gen_base.at("m");
    Word w = element_word(p, "m", m, 5);
    CHECK(w == Word(5, base + 1));
    CHECK(element_word(p, "m", m, 0).empty());
    CHECK(eval_in_vertex(p, "m", m, w) == 5);
}
