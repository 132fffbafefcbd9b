#include "handlecalc/instance.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <memory>

namespace handlecalc {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw ValidationError(where + ": " + what);
}

void require_keys(const Json& j, std::initializer_list<const char*> allowed,
                  const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* a) { return key == a; }) == allowed.end())
            bad(where, "unknown field \"" + key + "\"");
    }
}

const Json& need(const Json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) bad(where, std::string("missing field \"") + key + "\"");
    return *it;
}

int need_int(const Json& j, const char* key, const std::string& where) {
    const Json& v = need(j, key, where);
    if (!v.is_number_integer()) bad(where + "." + key, "expected an integer");
    return v.get<int>();
}

std::string need_string(const Json& j, const char* key, const std::string& where) {
    const Json& v = need(j, key, where);
    if (!v.is_string()) bad(where + "." + key, "expected a string");
    return v.get<std::string>();
}

std::vector<int> int_array(const Json& v, const std::string& where) {
    if (!v.is_array()) bad(where, "expected an array of integers");
    std::vector<int> out;
    for (const auto& x : v) {
        if (!x.is_number_integer()) bad(where, "expected an array of integers");
        out.push_back(x.get<int>());
    }
    return out;
}

double number_at(const Json& v, const std::string& where) {
    if (!v.is_number()) bad(where, "expected a number");
    return v.get<double>();
}

GroupSpec spec_from_json(const Json& j, const std::string& where);

std::vector<GroupSpec> factors_from_json(const Json& j, const std::string& where) {
    const Json& f = need(j, "factors", where);
    if (!f.is_array() || f.size() != 2) bad(where + ".factors", "expected exactly two factors");
    std::vector<GroupSpec> out;
    for (size_t i = 0; i < f.size(); ++i)
        out.push_back(spec_from_json(f[i], where + ".factors[" + std::to_string(i) + "]"));
    return out;
}

GroupSpec spec_from_json(const Json& j, const std::string& where) {
    if (!j.is_object()) bad(where, "group literal must be an object");
    GroupSpec s;
    s.family = need_string(j, "family", where);
    if (s.family == "cyclic") {
        require_keys(j, {"family", "n", "rotation_type"}, where);
        s.n = need_int(j, "n", where);
        if (auto it = j.find("rotation_type"); it != j.end()) {
            auto rt = int_array(*it, where + ".rotation_type");
            if (rt.size() != 3) bad(where + ".rotation_type", "expected [m, s, t]");
            s.rotation = CyclicRotationType{rt[0], rt[1], rt[2]};
        }
    } else if (s.family == "dihedral" || s.family == "binary_dihedral") {
        require_keys(j, {"family", "n"}, where);
        s.n = need_int(j, "n", where);
    } else if (s.family == "polyhedral") {
        require_keys(j, {"family", "kind"}, where);
        s.kind = need_string(j, "kind", where);
    } else if (s.family == "central_product" || s.family == "direct_product") {
        require_keys(j, {"family", "factors"}, where);
        s.factors = factors_from_json(j, where);
    } else if (s.family == "table") {
        require_keys(j, {"family", "table", "generators", "so4_realization"}, where);
        const Json& t = need(j, "table", where);
        if (!t.is_array()) bad(where + ".table", "expected an array of rows");
        for (size_t i = 0; i < t.size(); ++i)
            s.table.push_back(int_array(t[i], where + ".table[" + std::to_string(i) + "]"));
        if (auto it = j.find("generators"); it != j.end())
            s.table_generators = int_array(*it, where + ".generators");
        if (auto it = j.find("so4_realization"); it != j.end()) {
            if (!it->is_array()) bad(where + ".so4_realization", "expected an array");
            std::vector<QuatPair> pairs;
            for (size_t i = 0; i < it->size(); ++i) {
                const Json& p = (*it)[i];
                std::string pw = where + ".so4_realization[" + std::to_string(i) + "]";
                if (!p.is_array() || p.size() != 8) bad(pw, "expected eight numbers");
                std::array<double, 8> q{};
                for (size_t k = 0; k < 8; ++k) q[k] = number_at(p[k], pw);
                pairs.push_back({Quat{q[0], q[1], q[2], q[3]}, Quat{q[4], q[5], q[6], q[7]}});
            }
            s.so4 = std::move(pairs);
        }
    } else {
        bad(where, "unknown group family \"" + s.family + "\"");
    }
    return s;
}

Json spec_to_json(const GroupSpec& s) {
    Json j;
    j["family"] = s.family;
    if (s.family == "cyclic" || s.family == "dihedral" || s.family == "binary_dihedral")
        j["n"] = s.n;
    if (s.rotation) j["rotation_type"] = {s.rotation->m, s.rotation->s, s.rotation->t};
    if (s.family == "polyhedral") j["kind"] = s.kind;
    if (s.family == "central_product" || s.family == "direct_product") {
        Json f = Json::array();
        for (const GroupSpec& x : s.factors) f.push_back(spec_to_json(x));
        j["factors"] = std::move(f);
    }
    if (s.family == "table") {
        j["table"] = s.table;
        if (s.table_generators) j["generators"] = *s.table_generators;
        if (s.so4) {
            Json pairs = Json::array();
            for (const QuatPair& p : *s.so4)
                pairs.push_back({p.left.w, p.left.x, p.left.y, p.left.z, p.right.w, p.right.x,
                                 p.right.y, p.right.z});
            j["so4_realization"] = std::move(pairs);
        }
    }
    return j;
}

const char* kind_name(MenuEntry::Kind k) {
    switch (k) {
        case MenuEntry::Circle: return "circle";
        case MenuEntry::IsolatedPoint: return "isolated_point";
        case MenuEntry::Free: return "free";
    }
    throw Error("unhandled menu kind");
}

MenuEntry::Kind kind_from(const std::string& name, const std::string& where) {
    if (name == "circle") return MenuEntry::Circle;
    if (name == "isolated_point") return MenuEntry::IsolatedPoint;
    if (name == "free") return MenuEntry::Free;
    bad(where, "unknown menu kind \"" + name + "\"");
}

StabilizerMenu menu_from_json(const Json& j, const std::string& vid, const std::string& where) {
    if (!j.is_array()) bad(where, "expected an array of menu entries");
    StabilizerMenu menu;
    menu.vertex = vid;
    for (size_t i = 0; i < j.size(); ++i) {
        const Json& ej = j[i];
        std::string ew = where + "[" + std::to_string(i) + "]";
        if (!ej.is_object()) bad(ew, "expected an object");
        require_keys(ej, {"subgroup", "kind", "witness"}, ew);
        MenuEntry entry;
        entry.subgroup = int_array(need(ej, "subgroup", ew), ew + ".subgroup");
        entry.kind = kind_from(need_string(ej, "kind", ew), ew + ".kind");
        if (auto it = ej.find("witness"); it != ej.end()) {
            if (!it->is_array() || it->size() != 4) bad(ew + ".witness", "expected four numbers");
            entry.witness = Quat{number_at((*it)[0], ew), number_at((*it)[1], ew),
                                 number_at((*it)[2], ew), number_at((*it)[3], ew)};
        }
        entry.declared = true;
        menu.entries.push_back(std::move(entry));
    }
    return menu;
}

Json menu_to_json(const StabilizerMenu& menu) {
    Json out = Json::array();
    for (const MenuEntry& e : menu.entries) {
        Json ej;
        ej["subgroup"] = e.subgroup;
        ej["kind"] = kind_name(e.kind);
        if (e.witness) ej["witness"] = {e.witness->w, e.witness->x, e.witness->y, e.witness->z};
        out.push_back(std::move(ej));
    }
    return out;
}

}  // namespace

GroupPtr GroupSpec::build() const {
    if (family == "cyclic") {
        if (rotation) {
            if (rotation->m != n)
                throw ValidationError("rotation type order " + std::to_string(rotation->m) +
                                      " does not match the cyclic order " + std::to_string(n));
            return cyclic_with_rotation(*rotation);
        }
        return FiniteGroup::cyclic(n);
    }
    if (family == "dihedral") return FiniteGroup::dihedral(n);
    if (family == "binary_dihedral") return FiniteGroup::binary_dihedral(n);
    if (family == "polyhedral") {
        if (kind == "tetrahedral") return FiniteGroup::polyhedral(Family::Tetrahedral);
        if (kind == "octahedral") return FiniteGroup::polyhedral(Family::Octahedral);
        if (kind == "icosahedral") return FiniteGroup::polyhedral(Family::Icosahedral);
        throw ValidationError("unknown polyhedral kind \"" + kind + "\"");
    }
    if (family == "central_product" || family == "direct_product") {
        if (factors.size() != 2) throw ValidationError(family + " needs exactly two factors");
        GroupPtr a = factors[0].build(), b = factors[1].build();
        return family == "central_product" ? FiniteGroup::central_product(a, b)
                                           : FiniteGroup::direct_product(a, b);
    }
    if (family == "table") return FiniteGroup::from_table(table, table_generators, so4);
    throw ValidationError("unknown group family \"" + family + "\"");
}

GroupSpec GroupSpec::cyclic(int n) {
    GroupSpec s;
    s.family = "cyclic";
    s.n = n;
    return s;
}

GroupSpec GroupSpec::cyclic(const CyclicRotationType& rt) {
    GroupSpec s = cyclic(static_cast<int>(rt.m));
    s.rotation = rt;
    return s;
}

GroupSpec GroupSpec::dihedral(int n) {
    GroupSpec s;
    s.family = "dihedral";
    s.n = n;
    return s;
}

GroupSpec GroupSpec::binary_dihedral(int n) {
    GroupSpec s;
    s.family = "binary_dihedral";
    s.n = n;
    return s;
}

GroupSpec GroupSpec::polyhedral(const std::string& kind) {
    GroupSpec s;
    s.family = "polyhedral";
    s.kind = kind;
    return s;
}

GroupSpec GroupSpec::central_product(GroupSpec a, GroupSpec b) {
    GroupSpec s;
    s.family = "central_product";
    s.factors = {std::move(a), std::move(b)};
    return s;
}

GroupSpec GroupSpec::direct_product(GroupSpec a, GroupSpec b) {
    GroupSpec s;
    s.family = "direct_product";
    s.factors = {std::move(a), std::move(b)};
    return s;
}

GroupSpec GroupSpec::from_table(std::vector<std::vector<int>> table,
                                std::optional<std::vector<Elt>> generators,
                                std::optional<std::vector<QuatPair>> so4) {
    GroupSpec s;
    s.family = "table";
    s.table = std::move(table);
    s.table_generators = std::move(generators);
    s.so4 = std::move(so4);
    return s;
}

InstanceDocument parse_instance(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("document is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("document root must be an object");
    require_keys(j, {"schema_version", "vertices", "edges", "target", "surjection", "notes"},
                 "document");

    InstanceDocument doc;
    doc.schema_version = need_int(j, "schema_version", "document");
    if (doc.schema_version != 1)
        throw ValidationError("unsupported schema version " +
                              std::to_string(doc.schema_version));

    const Json& vj = need(j, "vertices", "document");
    if (!vj.is_array()) throw ValidationError("document.vertices: expected an array");
    if (vj.empty()) throw ValidationError("graph must be non-empty and connected");
    std::map<std::string, StabilizerMenu> pending_menus;
    for (size_t i = 0; i < vj.size(); ++i) {
        std::string where = "vertices[" + std::to_string(i) + "]";
        const Json& v = vj[i];
        if (!v.is_object()) bad(where, "expected an object");
        require_keys(v, {"id", "group", "menu"}, where);
        std::string id = need_string(v, "id", where);
        if (id.empty()) bad(where, "vertex id must be non-empty");
        GroupSpec spec = spec_from_json(need(v, "group", where), where + ".group");
        try {
            doc.graph.add_vertex(id, spec.build());
        } catch (const ValidationError& e) {
            bad(where, e.what());
        }
        doc.vertex_specs.emplace(id, std::move(spec));
        if (auto it = v.find("menu"); it != v.end())
            pending_menus.emplace(id, menu_from_json(*it, id, where + ".menu"));
    }
    doc.menus = std::move(pending_menus);

    const Json& ej = need(j, "edges", "document");
    if (!ej.is_array()) throw ValidationError("document.edges: expected an array");
    for (size_t i = 0; i < ej.size(); ++i) {
        std::string where = "edges[" + std::to_string(i) + "]";
        const Json& e = ej[i];
        if (!e.is_object()) bad(where, "expected an object");
        require_keys(e, {"id", "group", "ends", "alpha", "omega"}, where);
        std::string id = need_string(e, "id", where);
        const Json& ends = need(e, "ends", where);
        if (!ends.is_array() || ends.size() != 2 || !ends[0].is_string() || !ends[1].is_string())
            bad(where + ".ends", "expected two vertex ids");
        GroupSpec spec = spec_from_json(need(e, "group", where), where + ".group");
        std::vector<int> alpha = int_array(need(e, "alpha", where), where + ".alpha");
        std::vector<int> omega = int_array(need(e, "omega", where), where + ".omega");
        try {
            doc.graph.add_edge(id, spec.build(), ends[0].get<std::string>(),
                               ends[1].get<std::string>(), alpha, omega);
        } catch (const ValidationError& e2) {
            bad(where, e2.what());
        }
        doc.edge_specs.emplace(id, std::move(spec));
    }

    doc.graph.validate();

    if (auto it = j.find("target"); it != j.end()) {
        doc.target_spec = spec_from_json(*it, "target");
        doc.target = doc.target_spec->build();
    }

    if (auto it = j.find("surjection"); it != j.end()) {
        const Json& s = *it;
        if (!s.is_object()) throw ValidationError("surjection: expected an object");
        require_keys(s, {"vertex_images", "stable_letters"}, "surjection");
        const Json& vi = need(s, "vertex_images", "surjection");
        if (!vi.is_object()) throw ValidationError("surjection.vertex_images: expected an object");
        for (const auto& [vid, imgs] : vi.items()) {
            if (!doc.graph.has_vertex(vid))
                throw ValidationError("surjection.vertex_images: unknown vertex \"" + vid + "\"");
            doc.vertex_images.emplace(vid, int_array(imgs, "surjection.vertex_images." + vid));
        }
        if (auto lt = s.find("stable_letters"); lt != s.end()) {
            if (!lt->is_object())
                throw ValidationError("surjection.stable_letters: expected an object");
            for (const auto& [eid, letter] : lt->items()) {
                if (!doc.graph.edges().count(eid))
                    throw ValidationError("surjection.stable_letters: unknown edge \"" + eid +
                                          "\"");
                if (!letter.is_number_integer())
                    throw ValidationError("surjection.stable_letters." + eid +
                                          ": expected an integer");
                doc.stable_letters.emplace(eid, letter.get<int>());
            }
        }
    }

    if (auto it = j.find("notes"); it != j.end()) {
        if (!it->is_array()) throw ValidationError("notes: expected an array of strings");
        for (const auto& note : *it) {
            if (!note.is_string()) throw ValidationError("notes: expected an array of strings");
            doc.notes.push_back(note.get<std::string>());
        }
    }
    return doc;
}

std::string serialize_instance(const InstanceDocument& doc) {
    for (const auto& [vid, v] : doc.graph.vertices()) {
        (void)v;
        if (!doc.vertex_specs.count(vid))
            throw Error("no group literal recorded for vertex " + vid);
    }
    for (const auto& [eid, e] : doc.graph.edges()) {
        (void)e;
        if (!doc.edge_specs.count(eid)) throw Error("no group literal recorded for edge " + eid);
    }

    Json j;
    j["schema_version"] = doc.schema_version;
    Json vertices = Json::array();
    for (const auto& [vid, spec] : doc.vertex_specs) {
        Json v;
        v["id"] = vid;
        v["group"] = spec_to_json(spec);
        if (auto it = doc.menus.find(vid); it != doc.menus.end())
            v["menu"] = menu_to_json(it->second);
        vertices.push_back(std::move(v));
    }
    j["vertices"] = std::move(vertices);
    Json edges = Json::array();
    for (const auto& [eid, spec] : doc.edge_specs) {
        const GogEdge& e = doc.graph.edge(eid);
        Json ev;
        ev["id"] = eid;
        ev["group"] = spec_to_json(spec);
        ev["ends"] = {e.from, e.to};
        ev["alpha"] = e.alpha.gen_images;
        ev["omega"] = e.omega.gen_images;
        edges.push_back(std::move(ev));
    }
    j["edges"] = std::move(edges);
    if (doc.target_spec) j["target"] = spec_to_json(*doc.target_spec);
    if (!doc.vertex_images.empty()) {
        Json s;
        Json vi;
        for (const auto& [vid, imgs] : doc.vertex_images) vi[vid] = imgs;
        s["vertex_images"] = std::move(vi);
        if (!doc.stable_letters.empty()) {
            Json lt;
            for (const auto& [eid, letter] : doc.stable_letters) lt[eid] = letter;
            s["stable_letters"] = std::move(lt);
        }
        j["surjection"] = std::move(s);
    }
    if (!doc.notes.empty()) j["notes"] = doc.notes;
    return j.dump(2) + "\n";
}

uint64_t fnv1a64(const std::string& bytes) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string instance_digest(const InstanceDocument& doc) {
    uint64_t h = fnv1a64(serialize_instance(doc));
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Surjection surjection_from(const InstanceDocument& doc) {
    if (!doc.target) throw ValidationError("document has no target group");
    if (doc.vertex_images.empty()) throw ValidationError("document has no surjection data");
    Surjection s;
    s.pres = std::make_shared<Presentation>(doc.graph.fundamental_presentation());
    s.target = doc.target;
    for (const auto& [vid, v] : doc.graph.vertices()) {
        auto it = doc.vertex_images.find(vid);
        if (it == doc.vertex_images.end())
            throw ValidationError("surjection data has no images for vertex " + vid);
        try {
            // Injectivity is left to verify_surjection so it can report why.
            s.vertex_maps.emplace(vid, GroupHom::build(v.group, doc.target, it->second, false));
        } catch (const ValidationError& e) {
            throw ValidationError("surjection.vertex_images." + vid + ": " + e.what());
        }
    }
    s.stable_letters = doc.stable_letters;
    return s;
}

std::map<std::string, StabilizerMenu> effective_menus(const InstanceDocument& doc) {
    std::map<std::string, StabilizerMenu> menus = doc.menus;
    for (const auto& [vid, spec] : doc.vertex_specs)
        if (spec.rotation && !menus.count(vid))
            menus.emplace(vid, cyclic_stabilizer_menu(*spec.rotation));
    return menus;
}

}  // namespace handlecalc
