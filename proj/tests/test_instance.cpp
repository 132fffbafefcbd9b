#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "handlecalc/covering.hpp"
#include "handlecalc/instance.hpp"

using namespace handlecalc;

namespace {

// Chain l1 --e1-- m --e2-- l2 over a cyclic target of order 12; the shipped
// reference instance for the covering tests.
InstanceDocument chain_doc() {
    InstanceDocument doc;
    doc.graph.add_vertex("l1", FiniteGroup::cyclic(6));
    doc.graph.add_vertex("m", FiniteGroup::cyclic(12));
    doc.graph.add_vertex("l2", FiniteGroup::cyclic(12));
    doc.graph.add_edge("e1", FiniteGroup::cyclic(3), "l1", "m", {2}, {4});
    doc.graph.add_edge("e2", FiniteGroup::cyclic(4), "l2", "m", {3}, {3});
    doc.vertex_specs.emplace("l1", GroupSpec::cyclic(6));
    doc.vertex_specs.emplace("m", GroupSpec::cyclic(12));
    doc.vertex_specs.emplace("l2", GroupSpec::cyclic(12));
    doc.edge_specs.emplace("e1", GroupSpec::cyclic(3));
    doc.edge_specs.emplace("e2", GroupSpec::cyclic(4));
    doc.target_spec = GroupSpec::cyclic(12);
    doc.target = doc.target_spec->build();
    doc.vertex_images.emplace("l1", std::vector<Elt>{2});
    doc.vertex_images.emplace("m", std::vector<Elt>{1});
    doc.vertex_images.emplace("l2", std::vector<Elt>{1});
    return doc;
}

InstanceDocument single_vertex(GroupSpec spec) {
    InstanceDocument doc;
    doc.graph.add_vertex("v", spec.build());
    doc.vertex_specs.emplace("v", std::move(spec));
    return doc;
}

}  // namespace

TEST_CASE("serialization round trips bit for bit") {
    InstanceDocument doc = chain_doc();
    std::string text = serialize_instance(doc);
    InstanceDocument back = parse_instance(text);
    CHECK(serialize_instance(back) == text);

    CHECK(back.schema_version == 1);
    CHECK(back.graph.vertices().size() == 3);
    CHECK(back.graph.edges().size() == 2);
    CHECK(back.graph.vertex("l1").group->order() == 6);
    CHECK(back.graph.edge("e1").group->order() == 3);
    CHECK(back.graph.edge("e2").alpha.gen_images == std::vector<Elt>{3});
    CHECK(back.graph.euler_characteristic() == Rational(-1, 4));
    CHECK(back.target->order() == 12);
    CHECK(back.vertex_images.at("l1") == std::vector<Elt>{2});
    CHECK(back.notes.empty());

    // emitting a parse of the emitted text is a fixed point
    CHECK(serialize_instance(parse_instance(serialize_instance(back))) == text);
}

TEST_CASE("non-canonical input parses to the canonical form") {
    const char* scrambled = R"({
        "notes": ["checked by hand"],
        "edges": [
            {"omega": [4], "alpha": [2], "ends": ["l1", "m"],
             "group": {"n": 3, "family": "cyclic"}, "id": "e1"},
            {"id": "e2", "group": {"family": "cyclic", "n": 4},
             "ends": ["l2", "m"], "alpha": [3], "omega": [3]}
        ],
        "schema_version": 1,
        "vertices": [
            {"group": {"family": "cyclic", "n": 12}, "id": "m"},
            {"id": "l1", "group": {"family": "cyclic", "n": 6}},
            {"id": "l2", "group": {"family": "cyclic", "n": 12}}
        ]
    })";
    InstanceDocument doc = parse_instance(scrambled);
    std::string canonical = serialize_instance(doc);
    CHECK(canonical != scrambled);
    CHECK(doc.notes == std::vector<std::string>{"checked by hand"});
    // parse of the emission equals the original parse
    InstanceDocument again = parse_instance(canonical);
    CHECK(serialize_instance(again) == canonical);
    CHECK(again.graph.euler_characteristic() == doc.graph.euler_characteristic());
}

TEST_CASE("every group family survives the round trip") {
    auto roundtrip = [](GroupSpec spec, int expected_order) {
        InstanceDocument doc = single_vertex(std::move(spec));
        CHECK(doc.graph.vertex("v").group->order() == expected_order);
        std::string text = serialize_instance(doc);
        InstanceDocument back = parse_instance(text);
        CHECK(back.graph.vertex("v").group->order() == expected_order);
        CHECK(serialize_instance(back) == text);
        return back;
    };

    roundtrip(GroupSpec::cyclic(7), 7);
    roundtrip(GroupSpec::dihedral(4), 8);
    roundtrip(GroupSpec::binary_dihedral(3), 12);
    roundtrip(GroupSpec::polyhedral("tetrahedral"), 12);
    roundtrip(GroupSpec::polyhedral("octahedral"), 24);
    roundtrip(GroupSpec::polyhedral("icosahedral"), 60);
    roundtrip(GroupSpec::direct_product(GroupSpec::cyclic(2), GroupSpec::cyclic(3)), 6);
    roundtrip(GroupSpec::central_product(GroupSpec::binary_dihedral(2),
                                         GroupSpec::binary_dihedral(2)),
              32);

    InstanceDocument rot = roundtrip(GroupSpec::cyclic(CyclicRotationType{12, 3, 4}), 12);
    REQUIRE(rot.vertex_specs.at("v").rotation.has_value());
    CHECK(rot.vertex_specs.at("v").rotation->s == 3);

    std::vector<QuatPair> so4{QuatPair{Quat{1, 0, 0, 0}, Quat{1, 0, 0, 0}},
                              QuatPair{Quat{0, 1, 0, 0}, Quat{0, 1, 0, 0}}};
    InstanceDocument tab = roundtrip(
        GroupSpec::from_table({{0, 1}, {1, 0}}, std::vector<Elt>{1}, so4), 2);
    const GroupSpec& ts = tab.vertex_specs.at("v");
    REQUIRE(ts.so4.has_value());
    CHECK((*ts.so4)[1].left.x == 1.0);
    CHECK(ts.table_generators == std::vector<Elt>{1});
    REQUIRE(tab.graph.vertex("v").group->so4_realization().has_value());
}

TEST_CASE("canonical text of a rotation-typed vertex is frozen") {
    InstanceDocument rot = single_vertex(GroupSpec::cyclic(CyclicRotationType{12, 3, 4}));
    CHECK(serialize_instance(rot) ==
          "{\n"
          "  \"schema_version\": 1,\n"
          "  \"vertices\": [\n"
          "    {\n"
          "      \"id\": \"v\",\n"
          "      \"group\": {\n"
          "        \"family\": \"cyclic\",\n"
          "        \"n\": 12,\n"
          "        \"rotation_type\": [\n"
          "          12,\n"
          "          3,\n"
          "          4\n"
          "        ]\n"
          "      }\n"
          "    }\n"
          "  ],\n"
          "  \"edges\": []\n"
          "}\n");
    CHECK(instance_digest(rot) == "0d196f7c3d087854");
}

TEST_CASE("digest is stable and sensitive") {
    InstanceDocument doc = chain_doc();
    CHECK(instance_digest(doc) == "d26712437f8a21e1");
    doc.vertex_images.at("m") = {5};
    CHECK(instance_digest(doc) != "d26712437f8a21e1");

    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("abc") == 0xe71fa2190541574bull);
}

TEST_CASE("surjection data drives the covering oracle") {
    InstanceDocument doc = chain_doc();
    Surjection s = surjection_from(doc);
    std::string why;
    CHECK(verify_surjection(s, &why));
    CHECK(why.empty());
    CosetGraph c = build_coset_graph(doc.graph, s);
    CHECK(c.vertex_count == 4);
    CHECK(c.edge_count == 7);
    CHECK(genus_of_cover(c) == 4);
    CHECK(genus_of_cover(c) == doc.graph.genus_from_order(12));
}

TEST_CASE("stable letters round trip") {
    InstanceDocument doc;
    doc.graph.add_vertex("v", FiniteGroup::cyclic(1));
    doc.graph.add_edge("e", FiniteGroup::cyclic(1), "v", "v", {}, {});
    doc.vertex_specs.emplace("v", GroupSpec::cyclic(1));
    doc.edge_specs.emplace("e", GroupSpec::cyclic(1));
    doc.target_spec = GroupSpec::cyclic(2);
    doc.target = doc.target_spec->build();
    doc.vertex_images.emplace("v", std::vector<Elt>{});
    doc.stable_letters.emplace("e", 1);

    std::string text = serialize_instance(doc);
    InstanceDocument back = parse_instance(text);
    CHECK(back.stable_letters.at("e") == 1);
    CHECK(serialize_instance(back) == text);

    Surjection s = surjection_from(back);
    std::string why;
    CHECK(verify_surjection(s, &why));
    CHECK(genus_of_cover(build_coset_graph(back.graph, s)) == 1);
}

TEST_CASE("declared menus round trip and win over synthesis") {
    InstanceDocument doc = single_vertex(GroupSpec::cyclic(CyclicRotationType{6, 1, 2}));
    StabilizerMenu menu;
    menu.vertex = "v";
    MenuEntry entry;
    entry.subgroup = {0, 3};
    entry.kind = MenuEntry::Circle;
    entry.witness = Quat{0, 0, 1, 0};
    entry.declared = true;
    menu.entries.push_back(entry);
    doc.menus.emplace("v", menu);

    std::string text = serialize_instance(doc);
    InstanceDocument back = parse_instance(text);
    REQUIRE(back.menus.count("v") == 1);
    const MenuEntry& e = back.menus.at("v").entries.at(0);
    CHECK(e.subgroup == std::vector<Elt>{0, 3});
    CHECK(e.kind == MenuEntry::Circle);
    REQUIRE(e.witness.has_value());
    CHECK(e.witness->y == 1.0);
    CHECK(e.declared);
    CHECK(serialize_instance(back) == text);

    // declared menu shadows the rotation-type synthesis
    auto menus = effective_menus(back);
    REQUIRE(menus.count("v") == 1);
    CHECK(menus.at("v").entries.size() == 1);
    CHECK(menus.at("v").entries[0].subgroup == std::vector<Elt>{0, 3});
}

TEST_CASE("effective menus synthesize from rotation types") {
    InstanceDocument doc = single_vertex(GroupSpec::cyclic(CyclicRotationType{12, 3, 4}));
    auto menus = effective_menus(doc);
    REQUIRE(menus.count("v") == 1);
    const StabilizerMenu& m = menus.at("v");
    REQUIRE(m.entries.size() == 3);
    CHECK(m.entries[0].kind == MenuEntry::Circle);
    CHECK(m.entries[0].subgroup.size() == 3);
    CHECK(m.entries[1].kind == MenuEntry::Circle);
    CHECK(m.entries[1].subgroup.size() == 4);
    CHECK(m.entries[2].kind == MenuEntry::Free);
    CHECK_FALSE(m.entries[0].declared);

    InstanceDocument plain = single_vertex(GroupSpec::cyclic(5));
    CHECK(effective_menus(plain).empty());
}

TEST_CASE("defective documents are rejected with the offending path") {
    auto msg = [](const std::string& text) {
        try {
            parse_instance(text);
        } catch (const ValidationError& e) {
            return std::string(e.what());
        }
        return std::string("(no error)");
    };

    CHECK(msg(R"({"schema_version": 1, "vertices": [], "edges": []})") ==
          "graph must be non-empty and connected");
    CHECK(msg("nope[") .substr(0, 26) == "document is not valid JSON");
    CHECK(msg("[]") == "document root must be an object");
    CHECK(msg(R"({"schema_version": 1, "vertices": [], "edges": [], "extra": 0})") ==
          "document: unknown field \"extra\"");
    CHECK(msg(R"({"schema_version": 2, "vertices": [], "edges": []})") ==
          "unsupported schema version 2");
    CHECK(msg(R"({"schema_version": 1, "edges": []})") ==
          "document: missing field \"vertices\"");

    std::string head = R"({"schema_version": 1, "edges": [], "vertices": )";
    CHECK(msg(head + R"([{"id": "v", "group": {"family": "cyclic", "n": 3}, "color": 1}]})") ==
          "vertices[0]: unknown field \"color\"");
    CHECK(msg(head + R"([{"id": "v", "group": {"family": "sporadic"}}]})") ==
          "vertices[0].group: unknown group family \"sporadic\"");
    CHECK(msg(head + R"([{"id": "v", "group": {"family": "cyclic", "n": 6,
                           "rotation_type": [12, 1, 5]}}]})") ==
          "vertices[0]: rotation type order 12 does not match the cyclic order 6");
    CHECK(msg(head + R"([{"id": "v", "group": {"family": "cyclic", "n": 6,
                           "rotation_type": [6, 1]}}]})") ==
          "vertices[0].group.rotation_type: expected [m, s, t]");
    CHECK(msg(head + R"([{"id": "v", "group": {"family": "cyclic", "n": 2}},
                         {"id": "v", "group": {"family": "cyclic", "n": 2}}]})") ==
          "vertices[1]: duplicate vertex id: v");
    CHECK(msg(head + R"([{"id": "v", "group": {"family": "polyhedral", "kind": "cubic"}}]})") ==
          "vertices[0]: unknown polyhedral kind \"cubic\"");
    CHECK(msg(head + R"([{"id": "v", "group": {"family": "central_product",
                           "factors": [{"family": "cyclic", "n": 2}]}}]})") ==
          "vertices[0].group.factors: expected exactly two factors");
    CHECK(msg(head + R"([{"id": "v", "group": {"family": "cyclic", "n": 3},
                           "menu": [{"subgroup": [0], "kind": "donut"}]}]})") ==
          "vertices[0].menu[0].kind: unknown menu kind \"donut\"");
    CHECK(msg(head + R"([{"id": "v", "group": {"family": "cyclic", "n": 3},
                           "menu": [{"subgroup": [0], "kind": "free",
                                     "witness": [1, 0, 0]}]}]})") ==
          "vertices[0].menu[0].witness: expected four numbers");

    // two components, no connecting edge
    CHECK(msg(R"({"schema_version": 1, "edges": [], "vertices": [
                   {"id": "a", "group": {"family": "cyclic", "n": 2}},
                   {"id": "b", "group": {"family": "cyclic", "n": 2}}]})") ==
          "graph must be non-empty and connected");

    // edge map that is not injective: 1 -> 3 in a cyclic group of order 6
    std::string two = R"({"schema_version": 1, "vertices": [
        {"id": "a", "group": {"family": "cyclic", "n": 4}},
        {"id": "b", "group": {"family": "cyclic", "n": 6}}], "edges": )";
    std::string edge_msg = msg(two + R"([{"id": "e", "group": {"family": "cyclic", "n": 4},
        "ends": ["a", "b"], "alpha": [1], "omega": [3]}]})");
    CHECK(edge_msg.substr(0, 17) == "edges[0]: edge e,");

    CHECK(msg(two + R"([{"id": "e", "group": {"family": "cyclic", "n": 2},
                         "ends": ["a"], "alpha": [2], "omega": [3]}]})") ==
          "edges[0].ends: expected two vertex ids");

    std::string full = R"({"schema_version": 1, "vertices": [
        {"id": "v", "group": {"family": "cyclic", "n": 2}}], "edges": [], )";
    CHECK(msg(full + R"("surjection": {"vertex_images": {"zz": [1]}}})") ==
          "surjection.vertex_images: unknown vertex \"zz\"");
    CHECK(msg(full + R"("surjection": {"vertex_images": {"v": [1]},
                         "stable_letters": {"zz": 1}}})") ==
          "surjection.stable_letters: unknown edge \"zz\"");
    CHECK(msg(full + R"("notes": ["fine", 3]})") == "notes: expected an array of strings");
}

TEST_CASE("surjection extraction needs target and images") {
    InstanceDocument doc = chain_doc();
    doc.target = nullptr;
    CHECK_THROWS_AS(surjection_from(doc), ValidationError);

    InstanceDocument bare = single_vertex(GroupSpec::cyclic(2));
    bare.target_spec = GroupSpec::cyclic(2);
    bare.target = bare.target_spec->build();
    CHECK_THROWS_AS(surjection_from(bare), ValidationError);

    // missing one vertex's images
    InstanceDocument part = chain_doc();
    part.vertex_images.erase("m");
    CHECK_THROWS_AS(surjection_from(part), ValidationError);
}

TEST_CASE("serialization refuses a graph with unrecorded literals") {
    InstanceDocument doc = chain_doc();
    doc.edge_specs.erase("e2");
    CHECK_THROWS_AS(serialize_instance(doc), Error);
}
