#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "handlecalc/admissibility.hpp"

using namespace handlecalc;

namespace {

Quat normalized(double w, double x, double y, double z) {
    double n = std::sqrt(w * w + x * x + y * y + z * z);
    return Quat{w / n, x / n, y / n, z / n};
}

// Path shape with rotation-typed cyclic vertices; the edge images land on the
// menu circles.
GraphOfGroups rotation_path_shape() {
    GraphOfGroups g;
    g.add_vertex("l1", cyclic_with_rotation({6, 3, 1}));
    g.add_vertex("m", cyclic_with_rotation({12, 3, 4}));
    g.add_vertex("l2", cyclic_with_rotation({12, 4, 1}));
    g.add_edge("e1", FiniteGroup::cyclic(3), "l1", "m", {2}, {4});
    g.add_edge("e2", FiniteGroup::cyclic(4), "l2", "m", {3}, {3});
    return g;
}

std::map<std::string, StabilizerMenu> rotation_path_menus() {
    std::map<std::string, StabilizerMenu> menus;
    menus["l1"] = cyclic_stabilizer_menu({6, 3, 1});
    menus["m"] = cyclic_stabilizer_menu({12, 3, 4});
    menus["l2"] = cyclic_stabilizer_menu({12, 4, 1});
    return menus;
}

}  // namespace

TEST_CASE("rotation pairs act as the two circle rotations") {
    std::vector<QuatPair> p = rotation_pairs({12, 3, 4});
    REQUIRE(p.size() == 12);

    // generator turns the circle through 1 by a quarter turn
    CHECK(p[1].apply(Quat{1, 0, 0, 0}).dist(Quat{0, 1, 0, 0}) < 1e-9);
    // and the circle through j by a third of a turn
    CHECK(p[1].apply(Quat{0, 0, 1, 0}).dist(Quat{0, 0, -0.5, std::sqrt(3.0) / 2}) < 1e-9);

    SUBCASE("composition matches addition mod m") {
        Quat probe = normalized(1, 2, 3, 4);
        for (int k1 = 0; k1 < 12; ++k1)
            for (int k2 = 0; k2 < 12; ++k2) {
                Quat two_step = p[k2].apply(p[k1].apply(probe));
                CHECK(two_step.dist(p[(k1 + k2) % 12].apply(probe)) < 1e-9);
            }
    }

    SUBCASE("faithful on a free orbit") {
        Quat probe = normalized(1, 1, 1, 1);
        for (int k = 1; k < 12; ++k) CHECK(p[k].apply(probe).dist(probe) > 1e-3);
    }

    SUBCASE("non-faithful types are rejected") {
        CHECK_THROWS_AS(rotation_pairs({12, 2, 4}), InadmissibleError);
        CHECK_THROWS_AS(rotation_pairs({9, 3, 6}), InadmissibleError);
        CHECK_THROWS_AS(rotation_pairs({0, 1, 1}), ValidationError);
    }
}

TEST_CASE("cyclic_with_rotation carries the realization") {
    GroupPtr g = cyclic_with_rotation({12, 3, 4});
    CHECK(g->order() == 12);
    CHECK(g->generators() == std::vector<Elt>{1});
    REQUIRE(g->so4_realization().has_value());
    CHECK(g->so4_realization()->size() == 12);

    GroupPtr one = cyclic_with_rotation({1, 0, 0});
    CHECK(one->order() == 1);
    REQUIRE(one->so4_realization().has_value());
}

TEST_CASE("cyclic stabilizer menus") {
    SUBCASE("two coprime circles") {
        StabilizerMenu m = cyclic_stabilizer_menu({12, 3, 4});
        REQUIRE(m.entries.size() == 3);
        CHECK(m.entries[0].kind == MenuEntry::Circle);
        CHECK(m.entries[0].subgroup == std::vector<Elt>{0, 4, 8});
        REQUIRE(m.entries[0].witness.has_value());
        CHECK(m.entries[0].witness->dist(Quat{1, 0, 0, 0}) == 0.0);
        CHECK(m.entries[1].kind == MenuEntry::Circle);
        CHECK(m.entries[1].subgroup == std::vector<Elt>{0, 3, 6, 9});
        CHECK(m.entries[1].witness->dist(Quat{0, 0, 1, 0}) == 0.0);
        CHECK(m.entries[2].kind == MenuEntry::Free);
        CHECK(m.entries[2].subgroup == std::vector<Elt>{0});
        for (const MenuEntry& e : m.entries) CHECK_FALSE(e.declared);
    }
    SUBCASE("free action leaves only the free entry") {
        StabilizerMenu m = cyclic_stabilizer_menu({5, 1, 1});
        REQUIRE(m.entries.size() == 1);
        CHECK(m.entries[0].kind == MenuEntry::Free);
        CHECK(cyclic_stabilizer_menu({1, 0, 0}).entries.size() == 1);
    }
    SUBCASE("one trivial circle collapses") {
        StabilizerMenu m = cyclic_stabilizer_menu({6, 2, 3});
        REQUIRE(m.entries.size() == 3);
        CHECK(m.entries[0].subgroup == std::vector<Elt>{0, 3});
        CHECK(m.entries[1].subgroup == std::vector<Elt>{0, 2, 4});

        StabilizerMenu only_a = cyclic_stabilizer_menu({12, 4, 1});
        REQUIRE(only_a.entries.size() == 2);
        CHECK(only_a.entries[0].subgroup == std::vector<Elt>{0, 3, 6, 9});
        CHECK(only_a.entries[1].kind == MenuEntry::Free);
    }
    SUBCASE("circle orders are coprime for every faithful type") {
        for (long long m = 1; m <= 48; ++m)
            for (long long s = 0; s < m; ++s)
                for (long long t = 0; t < m; ++t) {
                    long long g3 = std::gcd(std::gcd(s, t), m);
                    if (g3 != 1) {
                        CHECK_THROWS_AS(cyclic_stabilizer_menu({m, s, t}), InadmissibleError);
                        continue;
                    }
                    StabilizerMenu menu = cyclic_stabilizer_menu({m, s, t});
                    std::vector<long long> sizes;
                    for (const MenuEntry& e : menu.entries)
                        if (e.kind == MenuEntry::Circle)
                            sizes.push_back(static_cast<long long>(e.subgroup.size()));
                    std::vector<long long> want;
                    if (std::gcd(m, s) > 1) want.push_back(std::gcd(m, s));
                    if (std::gcd(m, t) > 1) want.push_back(std::gcd(m, t));
                    CHECK(sizes == want);
                    if (sizes.size() == 2) CHECK(std::gcd(sizes[0], sizes[1]) == 1);
                }
    }
}

TEST_CASE("so4 certificates") {
    GroupPtr g = cyclic_with_rotation({12, 3, 4});

    CHECK(verify_so4_certificate(*g, Quat{1, 0, 0, 0}, {0, 4, 8}));
    CHECK(verify_so4_certificate(*g, Quat{0, 0, 1, 0}, {0, 3, 6, 9}));
    CHECK_FALSE(verify_so4_certificate(*g, Quat{1, 0, 0, 0}, {0, 6}));
    CHECK_FALSE(verify_so4_certificate(*g, Quat{1, 0, 0, 0}, {0, 2, 4, 6, 8, 10}));
    CHECK(verify_so4_certificate(*g, normalized(1, 1, 1, 1), {0}));

    SUBCASE("any point of a circle has the circle's stabilizer") {
        CHECK(verify_so4_certificate(*g, Quat::from_angle(0.37), {0, 4, 8}));
        Quat on_second = Quat{0, 0, std::cos(1.1), std::sin(1.1)};
        CHECK(verify_so4_certificate(*g, on_second, {0, 3, 6, 9}));
    }
    SUBCASE("trivial group fixes everything") {
        GroupPtr one = cyclic_with_rotation({1, 0, 0});
        CHECK(verify_so4_certificate(*one, Quat{1, 0, 0, 0}, {0}));
    }
    SUBCASE("menu witnesses certify their own entries") {
        const CyclicRotationType types[] = {{12, 3, 4}, {6, 2, 3}, {90, 9, 10}, {11, 1, 5}};
        for (const CyclicRotationType& rt : types) {
            GroupPtr gr = cyclic_with_rotation(rt);
            for (const MenuEntry& e : cyclic_stabilizer_menu(rt).entries)
                if (e.kind == MenuEntry::Circle)
                    CHECK(verify_so4_certificate(*gr, *e.witness, e.subgroup));
        }
    }
    SUBCASE("errors") {
        GroupPtr plain = FiniteGroup::cyclic(12);
        CHECK_THROWS_AS(verify_so4_certificate(*plain, Quat{1, 0, 0, 0}, {0}), ValidationError);
        CHECK_THROWS_AS(verify_so4_certificate(*g, Quat{2, 0, 0, 0}, {0}), ValidationError);
    }
}

TEST_CASE("attachment checks on the rotation path shape") {
    GraphOfGroups g = rotation_path_shape();
    auto menus = rotation_path_menus();

    AdmissibilityReport r = check_attachments(g, menus);
    CHECK(r.ok);
    CHECK(r.violations.empty());
    REQUIRE(r.ends.size() == 4);
    for (const AttachmentCheck& c : r.ends) CHECK(c.matched);
    // both edges land on the middle vertex's two distinct circles
    CHECK(r.ends[1].vertex == "m");
    CHECK(r.ends[1].entry == 0);
    CHECK(r.ends[3].vertex == "m");
    CHECK(r.ends[3].entry == 1);

    SUBCASE("mutated edge group is rejected") {
        GraphOfGroups bad;
        bad.add_vertex("l1", cyclic_with_rotation({6, 3, 1}));
        bad.add_vertex("m", cyclic_with_rotation({12, 3, 4}));
        bad.add_edge("e1", FiniteGroup::cyclic(2), "l1", "m", {3}, {6});
        std::map<std::string, StabilizerMenu> menus2;
        menus2["l1"] = cyclic_stabilizer_menu({6, 3, 1});
        menus2["m"] = cyclic_stabilizer_menu({12, 3, 4});
        AdmissibilityReport rb = check_attachments(bad, menus2);
        CHECK_FALSE(rb.ok);
        CHECK(rb.violations.size() == 2);  // neither end finds a Z2 stabilizer
    }
    SUBCASE("missing menu names the vertex") {
        menus.erase("l2");
        CHECK_THROWS_WITH_AS(check_attachments(g, menus), "no stabilizer menu for vertex l2",
                             ValidationError);
    }
}

TEST_CASE("attachment matching is up to conjugacy") {
    GraphOfGroups g;
    g.add_vertex("v", FiniteGroup::dihedral(4));
    g.add_vertex("w", FiniteGroup::cyclic(2));
    // image {0,6} is the reflection r^2 s, conjugate to s
    g.add_edge("e", FiniteGroup::cyclic(2), "w", "v", {1}, {6});

    std::map<std::string, StabilizerMenu> menus;
    menus["v"].entries.push_back(MenuEntry{{0, 4}, MenuEntry::Circle, std::nullopt, true});
    menus["v"].entries.push_back(MenuEntry{{0}, MenuEntry::Free, std::nullopt, true});
    menus["w"].entries.push_back(MenuEntry{{0, 1}, MenuEntry::Circle, std::nullopt, true});
    menus["w"].entries.push_back(MenuEntry{{0}, MenuEntry::Free, std::nullopt, true});

    AdmissibilityReport r = check_attachments(g, menus);
    CHECK(r.ok);
    CHECK(r.ends[1].entry == 0);

    SUBCASE("central involution is not conjugate to a reflection") {
        GraphOfGroups h;
        h.add_vertex("v", FiniteGroup::dihedral(4));
        h.add_vertex("w", FiniteGroup::cyclic(2));
        h.add_edge("e", FiniteGroup::cyclic(2), "w", "v", {1}, {2});
        AdmissibilityReport rh = check_attachments(h, menus);
        CHECK_FALSE(rh.ok);
        REQUIRE(rh.violations.size() == 1);
        CHECK(rh.violations[0].find("no stabilizer of vertex v") != std::string::npos);
    }
}

TEST_CASE("isolated points accept a single attachment") {
    GraphOfGroups g;
    g.add_vertex("a", FiniteGroup::cyclic(2));
    g.add_vertex("b", FiniteGroup::cyclic(2));
    g.add_edge("e1", FiniteGroup::cyclic(2), "a", "b", {1}, {1});
    g.add_edge("e2", FiniteGroup::cyclic(2), "a", "b", {1}, {1});

    std::map<std::string, StabilizerMenu> menus;
    menus["a"].entries.push_back(MenuEntry{{0, 1}, MenuEntry::IsolatedPoint, std::nullopt, true});
    menus["a"].entries.push_back(MenuEntry{{0}, MenuEntry::Free, std::nullopt, true});
    menus["b"].entries.push_back(MenuEntry{{0, 1}, MenuEntry::Circle, std::nullopt, true});
    menus["b"].entries.push_back(MenuEntry{{0}, MenuEntry::Free, std::nullopt, true});

    AdmissibilityReport r = check_attachments(g, menus);
    CHECK_FALSE(r.ok);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].find("already has an attachment") != std::string::npos);
    CHECK(r.ends[0].matched);      // e1 takes the isolated point
    CHECK_FALSE(r.ends[2].matched);  // e2 finds it occupied
}

TEST_CASE("menu self-validation") {
    GraphOfGroups g;
    g.add_vertex("v", cyclic_with_rotation({12, 3, 4}));
    std::map<std::string, StabilizerMenu> menus;

    SUBCASE("overlapping circles are flagged") {
        menus["v"].entries.push_back(MenuEntry{{0, 6}, MenuEntry::Circle, std::nullopt, true});
        menus["v"].entries.push_back(
            MenuEntry{{0, 3, 6, 9}, MenuEntry::Circle, std::nullopt, true});
        AdmissibilityReport r = check_attachments(g, menus);
        CHECK_FALSE(r.ok);
        REQUIRE(r.violations.size() == 1);
        CHECK(r.violations[0].find("share a nontrivial subgroup") != std::string::npos);
    }
    SUBCASE("non-subgroups are flagged") {
        menus["v"].entries.push_back(MenuEntry{{0, 5}, MenuEntry::Circle, std::nullopt, true});
        menus["v"].entries.push_back(MenuEntry{{3, 6}, MenuEntry::Circle, std::nullopt, true});
        AdmissibilityReport r = check_attachments(g, menus);
        CHECK(r.violations.size() == 2);
    }
    SUBCASE("witness with the wrong stabilizer is flagged") {
        menus["v"].entries.push_back(
            MenuEntry{{0, 4, 8}, MenuEntry::Circle, Quat{0, 0, 1, 0}, true});
        AdmissibilityReport r = check_attachments(g, menus);
        CHECK_FALSE(r.ok);
        CHECK(r.violations[0].find("different stabilizer") != std::string::npos);
    }
    SUBCASE("checked and unchecked declarations are noted") {
        menus["v"].entries.push_back(
            MenuEntry{{0, 4, 8}, MenuEntry::Circle, Quat{1, 0, 0, 0}, true});
        menus["v"].entries.push_back(MenuEntry{{0}, MenuEntry::Free, std::nullopt, true});
        AdmissibilityReport r = check_attachments(g, menus);
        CHECK(r.ok);
        REQUIRE(r.notes.size() == 2);
        CHECK(r.notes[0].find("declared, witness-checked") != std::string::npos);
        CHECK(r.notes[1].find("declared, no witness") != std::string::npos);
    }
}

TEST_CASE("rotation edge group screening") {
    SUBCASE("cyclic edges pass") {
        So3EdgeReport r = check_so3_edge_groups(rotation_path_shape());
        CHECK(r.ok);
        CHECK(r.violations.empty());
        REQUIRE(r.classes.size() == 2);
        CHECK(r.classes.at("e1").kind == So3Class::CyclicK);
        CHECK(r.classes.at("e2").order == 4);
    }
    SUBCASE("elementary abelian of rank three fails") {
        GroupPtr v8 = FiniteGroup::direct_product(
            FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2)),
            FiniteGroup::cyclic(2));
        GraphOfGroups g;
        g.add_vertex("v", v8);
        std::vector<Elt> gens = v8->generators();
        g.add_edge("l", v8, "v", "v", gens, gens);
        So3EdgeReport r = check_so3_edge_groups(g);
        CHECK_FALSE(r.ok);
        REQUIRE(r.violations.size() == 1);
        CHECK(r.violations[0].find("edge l") != std::string::npos);
    }
    SUBCASE("icosahedral rotation group passes at order 60") {
        GroupPtr a5 = FiniteGroup::polyhedral(Family::Icosahedral);
        GraphOfGroups g;
        g.add_vertex("v", a5);
        std::vector<Elt> gens = a5->generators();
        g.add_edge("l", a5, "v", "v", gens, gens);
        So3EdgeReport r = check_so3_edge_groups(g);
        CHECK(r.ok);
        CHECK(r.classes.at("l").kind == So3Class::IcosahedralK);
        CHECK(r.classes.at("l").order == 60);
    }
}
