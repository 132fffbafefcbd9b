#include "handlecalc/homsearch.hpp"

#include <algorithm>

namespace handlecalc {

std::vector<Elt> Surjection::generator_images() const {
    std::vector<Elt> out;
    out.reserve(pres->generators.size());
    for (const auto& gen : pres->generators)
        out.push_back(gen.kind == Presentation::Generator::VertexGen
                          ? vertex_maps.at(gen.owner).gen_images[gen.local_index]
                          : stable_letters.at(gen.owner));
    return out;
}

namespace {

// Assignment order: spanning-tree discovery order, so every vertex after the
// first is constrained by an already-assigned neighbor.
std::vector<std::string> vertex_order(const GraphOfGroups& g,
                                      const std::vector<std::string>& tree) {
    std::vector<std::string> order{g.vertices().begin()->first};
    std::vector<std::string> pending = tree;
    while (!pending.empty()) {
        bool moved = false;
        for (auto it = pending.begin(); it != pending.end(); ++it) {
            const GogEdge& e = g.edge(*it);
            bool have_from = std::count(order.begin(), order.end(), e.from) > 0;
            bool have_to = std::count(order.begin(), order.end(), e.to) > 0;
            if (have_from == have_to) {
                if (have_from) {
                    pending.erase(it);
                    moved = true;
                    break;
                }
                continue;
            }
            order.push_back(have_from ? e.to : e.from);
            pending.erase(it);
            moved = true;
            break;
        }
        if (!moved) break;  // unreachable on connected input
    }
    return order;
}

struct Search {
    const GraphOfGroups& g;
    const GroupPtr& target;
    long long limit;
    SurjectionSearchResult& result;
    std::shared_ptr<const Presentation> pres;
    std::vector<std::string> order;
    std::map<std::string, GroupHom> assigned;
    std::map<const FiniteGroup*, std::vector<GroupHom>> mono_cache;
    std::vector<std::string> loose_edges;  // non-tree, sorted
    std::map<std::string, Elt> letters;

    const std::vector<GroupHom>& monos_for(const GroupPtr& group) {
        auto it = mono_cache.find(group.get());
        if (it == mono_cache.end())
            it = mono_cache.emplace(group.get(), enumerate_monomorphisms(group, target)).first;
        return it->second;
    }

    bool tree_compatible(const std::string& vid) const {
        for (const std::string& eid : pres->tree_edges) {
            const GogEdge& e = g.edge(eid);
            if (e.from != vid && e.to != vid) continue;
            auto fu = assigned.find(e.from);
            auto fv = assigned.find(e.to);
            if (fu == assigned.end() || fv == assigned.end()) continue;
            for (Elt h : e.group->generators())
                if (fu->second.apply(e.alpha.apply(h)) != fv->second.apply(e.omega.apply(h)))
                    return false;
        }
        return true;
    }

    // true = aborted at the result cap
    bool assign_vertex(size_t i) {
        if (i == order.size()) return assign_letter(0);
        const std::string& vid = order[i];
        for (const GroupHom& cand : monos_for(g.vertex(vid).group)) {
            assigned[vid] = cand;
            if (tree_compatible(vid) && assign_vertex(i + 1)) return true;
        }
        assigned.erase(vid);
        return false;
    }

    bool assign_letter(size_t i) {
        if (i == loose_edges.size()) return emit();
        const GogEdge& e = g.edge(loose_edges[i]);
        const GroupHom& fu = assigned.at(e.from);
        const GroupHom& fv = assigned.at(e.to);
        for (Elt t = 0; t < target->order(); ++t) {
            bool ok = true;
            for (Elt h : e.group->generators())
                if (target->mul(target->mul(t, fu.apply(e.alpha.apply(h))), target->inv(t)) !=
                    fv.apply(e.omega.apply(h))) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            letters[loose_edges[i]] = t;
            if (assign_letter(i + 1)) return true;
        }
        letters.erase(loose_edges[i]);
        return false;
    }

    bool emit() {
        ++result.examined;
        std::vector<Elt> seed;
        for (const auto& [vid, hom] : assigned)
            seed.insert(seed.end(), hom.gen_images.begin(), hom.gen_images.end());
        for (const auto& [eid, t] : letters) seed.push_back(t);
        if (static_cast<long long>(target->close(std::move(seed)).size()) != target->order())
            return false;
        Surjection s;
        s.pres = pres;
        s.target = target;
        s.vertex_maps = assigned;
        s.stable_letters = letters;
        result.found.push_back(std::move(s));
        if (static_cast<long long>(result.found.size()) >= limit) {
            result.truncated = true;
            return true;
        }
        return false;
    }
};

}  // namespace

SurjectionSearchResult find_surjections(const GraphOfGroups& g, const GroupPtr& target,
                                        long long limit) {
    g.validate();
    if (limit < 1) throw ValidationError("surjection limit must be positive");
    SurjectionSearchResult result;
    if (!g.in_normal_form())
        result.warnings.push_back(
            "graph has trivial edges; searching anyway (reduce to normal form first for "
            "smaller search trees)");

    Search search{g,  target,
                  limit,          result,
                  std::make_shared<const Presentation>(g.fundamental_presentation()),
                  {},  {},  {}, {}, {}};
    search.order = vertex_order(g, search.pres->tree_edges);
    for (const auto& [eid, e] : g.edges()) {
        (void)e;
        if (!search.pres->is_tree_edge(eid)) search.loose_edges.push_back(eid);
    }
    search.assign_vertex(0);
    return result;
}

bool verify_surjection(const Surjection& s, std::string* reason) {
    auto fail = [&](const std::string& why) {
        if (reason) *reason = why;
        return false;
    };
    if (!s.target) return fail("no target group");
    if (!s.pres) return fail("no presentation");
    const FiniteGroup& tg = *s.target;

    for (const auto& [vid, base] : s.pres->vertex_gen_base) {
        (void)base;
        auto it = s.vertex_maps.find(vid);
        if (it == s.vertex_maps.end()) return fail("no map for vertex " + vid);
        const GroupHom& hom = it->second;
        auto images = hom.domain->extend_hom(tg, hom.gen_images);
        if (!images) return fail("vertex " + vid + ": images do not define a homomorphism");
        if (*images != hom.images) return fail("vertex " + vid + ": stored image table is stale");
        if (!hom.injective()) return fail("vertex " + vid + ": not injective");
    }
    for (const auto& [eid, idx] : s.pres->stable_letter_index) {
        (void)idx;
        if (!s.stable_letters.count(eid)) return fail("no stable letter for edge " + eid);
    }

    std::vector<Elt> images = s.generator_images();
    for (size_t r = 0; r < s.pres->relators.size(); ++r) {
        Elt acc = tg.id();
        for (int letter : s.pres->relators[r]) {
            Elt x = images[std::abs(letter) - 1];
            acc = tg.mul(acc, letter > 0 ? x : tg.inv(x));
        }
        if (acc != tg.id())
            return fail("relator " + std::to_string(r) + " does not map to the identity");
    }

    if (static_cast<long long>(tg.close(images).size()) != tg.order())
        return fail("not surjective");
    if (reason) reason->clear();
    return true;
}

}  // namespace handlecalc
