#include "handlecalc/gog.hpp"

#include <algorithm>
#include <queue>
#include <set>

namespace handlecalc {

bool Presentation::is_tree_edge(const std::string& e) const {
    return std::binary_search(tree_edges.begin(), tree_edges.end(), e);
}

void GraphOfGroups::add_vertex(const std::string& id, GroupPtr group) {
    if (id.empty()) throw ValidationError("vertex id must be non-empty");
    if (vertices_.count(id)) throw ValidationError("duplicate vertex id: " + id);
    if (!group) throw ValidationError("vertex " + id + ": null group");
    vertices_.emplace(id, GogVertex{id, std::move(group)});
}

void GraphOfGroups::add_edge(const std::string& id, GroupPtr group, const std::string& from,
                             const std::string& to, std::vector<Elt> alpha_images,
                             std::vector<Elt> omega_images) {
    if (id.empty()) throw ValidationError("edge id must be non-empty");
    if (edges_.count(id)) throw ValidationError("duplicate edge id: " + id);
    if (!vertices_.count(from)) throw ValidationError("edge " + id + ": unknown vertex " + from);
    if (!vertices_.count(to)) throw ValidationError("edge " + id + ": unknown vertex " + to);
    if (!group) throw ValidationError("edge " + id + ": null group");
    GroupHom alpha, omega;
    try {
        alpha = GroupHom::build(group, vertices_.at(from).group, std::move(alpha_images));
    } catch (const ValidationError& err) {
        throw ValidationError("edge " + id + ", alpha end: " + err.what());
    }
    try {
        omega = GroupHom::build(group, vertices_.at(to).group, std::move(omega_images));
    } catch (const ValidationError& err) {
        throw ValidationError("edge " + id + ", omega end: " + err.what());
    }
    edges_.emplace(id, GogEdge{id, std::move(group), from, to, std::move(alpha), std::move(omega)});
}

const GogVertex& GraphOfGroups::vertex(const std::string& id) const {
    auto it = vertices_.find(id);
    if (it == vertices_.end()) throw ValidationError("unknown vertex: " + id);
    return it->second;
}

const GogEdge& GraphOfGroups::edge(const std::string& id) const {
    auto it = edges_.find(id);
    if (it == edges_.end()) throw ValidationError("unknown edge: " + id);
    return it->second;
}

bool GraphOfGroups::is_connected() const {
    if (vertices_.empty()) return false;
    std::set<std::string> seen{vertices_.begin()->first};
    std::queue<std::string> q;
    q.push(vertices_.begin()->first);
    while (!q.empty()) {
        std::string v = q.front();
        q.pop();
        for (const auto& [eid, e] : edges_) {
            (void)eid;
            if (e.from != v && e.to != v) continue;
            for (const std::string& w : {e.from, e.to}) {
                if (!seen.count(w)) {
                    seen.insert(w);
                    q.push(w);
                }
            }
        }
    }
    return seen.size() == vertices_.size();
}

void GraphOfGroups::validate() const {
    if (vertices_.empty()) throw ValidationError("graph must be non-empty and connected");
    if (!is_connected()) throw ValidationError("graph must be non-empty and connected");
}

Rational GraphOfGroups::euler_characteristic() const {
    Rational chi;
    for (const auto& [id, v] : vertices_) {
        (void)id;
        chi += reciprocal_of(v.group->order());
    }
    for (const auto& [id, e] : edges_) {
        (void)id;
        chi -= reciprocal_of(e.group->order());
    }
    return chi;
}

long long GraphOfGroups::genus_from_order(long long n) const {
    if (n < 1) throw ValidationError("order must be positive");
    Rational minus_chi_n = -euler_characteristic() * Rational(n);
    if (!minus_chi_n.is_integer())
        throw InadmissibleError("no action over this graph: -chi * " + std::to_string(n) +
                                " = " + minus_chi_n.str() + " is not an integer");
    Rational g = minus_chi_n + Rational(1);
    if (g.sign() < 0)
        throw InadmissibleError("no action over this graph: genus " + g.str() + " is negative");
    return static_cast<long long>(g.num());
}

std::vector<std::string> GraphOfGroups::trivial_edges() const {
    std::vector<std::string> out;
    for (const auto& [id, e] : edges_) {
        if (e.is_loop()) continue;
        if (e.group->order() == vertex(e.from).group->order() ||
            e.group->order() == vertex(e.to).group->order())
            out.push_back(id);
    }
    return out;
}

GraphOfGroups GraphOfGroups::collapse_edge(const std::string& eid) const {
    const GogEdge& e = edge(eid);
    // absorb the end whose vertex group the edge group fills; alpha end
    // preferred when both qualify
    bool absorb_from = e.group->order() == vertex(e.from).group->order();
    const std::string& gone = absorb_from ? e.from : e.to;
    const std::string& kept = absorb_from ? e.to : e.from;
    const GroupHom& onto = absorb_from ? e.alpha : e.omega;  // iso onto vertex(gone)
    const GroupHom& other = absorb_from ? e.omega : e.alpha;

    // inverse of the iso, then push into the kept vertex
    const FiniteGroup& ggone = *vertex(gone).group;
    std::vector<Elt> into_kept(ggone.order());  // vertex(gone) elt -> vertex(kept) elt
    for (Elt h = 0; h < e.group->order(); ++h) into_kept[onto.apply(h)] = other.apply(h);

    GraphOfGroups out;
    for (const auto& [vid, v] : vertices_)
        if (vid != gone) out.add_vertex(vid, v.group);
    for (const auto& [oid, o] : edges_) {
        if (oid == eid) continue;
        auto reroute = [&](const std::string& end, const GroupHom& hom) {
            std::vector<Elt> imgs;
            for (Elt gi : hom.gen_images) imgs.push_back(end == gone ? into_kept[gi] : gi);
            return imgs;
        };
        std::string nf = o.from == gone ? kept : o.from;
        std::string nt = o.to == gone ? kept : o.to;
        out.add_edge(oid, o.group, nf, nt, reroute(o.from, o.alpha), reroute(o.to, o.omega));
    }
    return out;
}

GraphOfGroups GraphOfGroups::reduce_to_normal_form() const {
    GraphOfGroups cur = *this;
    while (true) {
        std::vector<std::string> triv = cur.trivial_edges();
        if (triv.empty()) return cur;
        cur = cur.collapse_edge(triv.front());
    }
}

GraphOfGroups GraphOfGroups::subdivide_edge(const std::string& eid) const {
    const GogEdge& e = edge(eid);
    std::string mid = eid + "#v", ea = eid + "#a", eb = eid + "#b";
    if (vertices_.count(mid)) throw ValidationError("subdivide: vertex id " + mid + " taken");
    if (edges_.count(ea) || edges_.count(eb))
        throw ValidationError("subdivide: edge id " + ea + " or " + eb + " taken");

    GraphOfGroups out;
    for (const auto& [vid, v] : vertices_) out.add_vertex(vid, v.group);
    out.add_vertex(mid, e.group);
    std::vector<Elt> ident = e.group->generators();
    for (const auto& [oid, o] : edges_) {
        if (oid == eid) continue;
        out.add_edge(oid, o.group, o.from, o.to, o.alpha.gen_images, o.omega.gen_images);
    }
    out.add_edge(ea, e.group, e.from, mid, e.alpha.gen_images, ident);
    out.add_edge(eb, e.group, mid, e.to, ident, e.omega.gen_images);
    return out;
}

std::vector<std::string> GraphOfGroups::spanning_tree() const {
    validate();
    std::vector<std::string> tree;
    std::set<std::string> seen{vertices_.begin()->first};
    std::queue<std::string> q;
    q.push(vertices_.begin()->first);
    while (!q.empty()) {
        std::string v = q.front();
        q.pop();
        for (const auto& [eid, e] : edges_) {
            if (e.from != v && e.to != v) continue;
            const std::string& w = e.from == v ? e.to : e.from;
            if (!seen.count(w)) {
                seen.insert(w);
                tree.push_back(eid);
                q.push(w);
            }
        }
    }
    std::sort(tree.begin(), tree.end());
    return tree;
}

Word element_word(const Presentation& p, const std::string& vertex, const FiniteGroup& g, Elt a) {
    int base = p.vertex_gen_base.at(vertex);
    Word w;
    for (int gi : generator_word(g, a)) w.push_back(base + gi + 1);
    return w;
}

Presentation GraphOfGroups::fundamental_presentation() const {
    validate();
    Presentation p;
    p.tree_edges = spanning_tree();

    for (const auto& [vid, v] : vertices_) {
        p.vertex_gen_base[vid] = static_cast<int>(p.generators.size());
        const auto& gens = v.group->generators();
        for (size_t i = 0; i < gens.size(); ++i)
            p.generators.push_back(Presentation::Generator{
                Presentation::Generator::VertexGen, vid, static_cast<int>(i),
                vid + "." + std::to_string(i)});
    }
    for (const auto& [eid, e] : edges_) {
        (void)e;
        if (p.is_tree_edge(eid)) continue;
        p.stable_letter_index[eid] = static_cast<int>(p.generators.size());
        p.generators.push_back(
            Presentation::Generator{Presentation::Generator::StableLetter, eid, 0, "t." + eid});
    }

    // vertex-group relators: close every non-tree step of the Cayley graph
    // under the construction-time factorization words
    for (const auto& [vid, v] : vertices_) {
        const FiniteGroup& g = *v.group;
        int base = p.vertex_gen_base[vid];
        for (Elt a = 0; a < g.order(); ++a) {
            Word wa = element_word(p, vid, g, a);
            for (size_t gi = 0; gi < g.generators().size(); ++gi) {
                Elt b = g.mul(a, g.generators()[gi]);
                Word wb = element_word(p, vid, g, b);
                // tree step iff the word just extends: relator is freely trivial
                if (wb.size() == wa.size() + 1 && std::equal(wa.begin(), wa.end(), wb.begin()) &&
                    wb.back() == base + static_cast<int>(gi) + 1)
                    continue;
                Word rel = wa;
                rel.push_back(base + static_cast<int>(gi) + 1);
                Word ib = inverse_word(wb);
                rel.insert(rel.end(), ib.begin(), ib.end());
                p.relators.push_back(std::move(rel));
            }
        }
    }

    // edge relators: alpha and omega images agree across tree edges, and are
    // conjugate by the stable letter otherwise
    for (const auto& [eid, e] : edges_) {
        for (Elt h : e.group->generators()) {
            Word wa = element_word(p, e.from, *vertex(e.from).group, e.alpha.apply(h));
            Word wo = element_word(p, e.to, *vertex(e.to).group, e.omega.apply(h));
            Word rel;
            if (p.is_tree_edge(eid)) {
                rel = wa;
            } else {
                int t = p.stable_letter_index.at(eid) + 1;
                rel.push_back(t);
                rel.insert(rel.end(), wa.begin(), wa.end());
                rel.push_back(-t);
            }
            Word io = inverse_word(wo);
            rel.insert(rel.end(), io.begin(), io.end());
            p.relators.push_back(std::move(rel));
        }
    }
    return p;
}

}  // namespace handlecalc
