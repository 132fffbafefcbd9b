#include "handlecalc/covering.hpp"

#include <algorithm>
#include <deque>
#include <iterator>
#include <numeric>

namespace handlecalc {

namespace {

struct Cosets {
    std::vector<Elt> reps;
    std::vector<int> coset_of;
};

// Ascending scan makes every rep the smallest member of its coset.
Cosets left_cosets(const FiniteGroup& g, const std::vector<Elt>& sub) {
    Cosets c;
    c.coset_of.assign(static_cast<size_t>(g.order()), -1);
    for (Elt a = 0; a < g.order(); ++a) {
        if (c.coset_of[static_cast<size_t>(a)] != -1) continue;
        int idx = static_cast<int>(c.reps.size());
        c.reps.push_back(a);
        for (Elt h : sub) c.coset_of[static_cast<size_t>(g.mul(a, h))] = idx;
    }
    return c;
}

template <typename Block>
const Block& block_at(const std::vector<Block>& blocks, long long flat, const char* what) {
    for (const Block& b : blocks)
        if (flat >= b.first && flat < b.first + static_cast<long long>(b.reps.size())) return b;
    throw Error(std::string("flat ") + what + " index out of range");
}

}  // namespace

long long CosetGraph::vertex_act(Elt a, long long flat) const {
    const auto& b = block_at(vblocks, flat, "vertex");
    Elt rep = b.reps[static_cast<size_t>(flat - b.first)];
    return b.first + b.coset_of[static_cast<size_t>(target->mul(a, rep))];
}

long long CosetGraph::edge_act(Elt a, long long flat) const {
    const auto& b = block_at(eblocks, flat, "edge");
    Elt rep = b.reps[static_cast<size_t>(flat - b.first)];
    return b.first + b.coset_of[static_cast<size_t>(target->mul(a, rep))];
}

std::string CosetGraph::vertex_label(long long flat) const {
    const auto& b = block_at(vblocks, flat, "vertex");
    return b.vertex + "[" + std::to_string(b.reps[static_cast<size_t>(flat - b.first)]) + "]";
}

std::string CosetGraph::edge_label(long long flat) const {
    const auto& b = block_at(eblocks, flat, "edge");
    return b.edge + "[" + std::to_string(b.reps[static_cast<size_t>(flat - b.first)]) + "]";
}

CosetGraph build_coset_graph(const GraphOfGroups& g, const Surjection& s) {
    g.validate();
    if (!s.target) throw ValidationError("surjection carries no target group");
    if (!s.pres) throw ValidationError("surjection carries no presentation");
    const FiniteGroup& G = *s.target;

    CosetGraph c;
    c.target = s.target;

    std::map<std::string, const CosetGraph::VertexBlock*> vblock_of;
    for (const auto& [vid, v] : g.vertices()) {
        auto it = s.vertex_maps.find(vid);
        if (it == s.vertex_maps.end())
            throw ValidationError("surjection has no map for vertex " + vid);
        const GroupHom& phi = it->second;
        if (!phi.domain || phi.domain->order() != v.group->order())
            throw ValidationError("vertex map for " + vid + " does not match the vertex group");
        if (phi.codomain != s.target)
            throw ValidationError("vertex map for " + vid + " does not land in the target");

        CosetGraph::VertexBlock b;
        b.vertex = vid;
        b.subgroup = phi.image_subgroup();
        Cosets cs = left_cosets(G, b.subgroup);
        b.reps = std::move(cs.reps);
        b.coset_of = std::move(cs.coset_of);
        b.first = c.vertex_count;
        c.vertex_count += static_cast<long long>(b.reps.size());
        c.vblocks.push_back(std::move(b));
    }
    for (const auto& b : c.vblocks) vblock_of[b.vertex] = &b;

    for (const auto& [eid, e] : g.edges()) {
        const GroupHom& phi_u = s.vertex_maps.at(e.from);
        CosetGraph::EdgeBlock b;
        b.edge = eid;
        for (Elt h = 0; h < e.group->order(); ++h)
            b.subgroup.push_back(phi_u.apply(e.alpha.apply(h)));
        std::sort(b.subgroup.begin(), b.subgroup.end());
        b.subgroup.erase(std::unique(b.subgroup.begin(), b.subgroup.end()), b.subgroup.end());

        if (s.pres->is_tree_edge(eid)) {
            b.translate = G.id();
        } else {
            auto it = s.stable_letters.find(eid);
            if (it == s.stable_letters.end())
                throw ValidationError("surjection has no stable letter for edge " + eid);
            b.translate = it->second;
        }

        // The omega end is read off the coset rep, so conjugation by the
        // translate must carry the edge subgroup into the far vertex image.
        const auto& far = vblock_of.at(e.to)->subgroup;
        for (Elt h : b.subgroup) {
            Elt moved = G.mul(G.mul(b.translate, h), G.inv(b.translate));
            if (!std::binary_search(far.begin(), far.end(), moved))
                throw ValidationError("edge " + eid +
                                      ": stable letter does not carry the edge group into the far vertex group");
        }

        Cosets cs = left_cosets(G, b.subgroup);
        b.reps = std::move(cs.reps);
        b.coset_of = std::move(cs.coset_of);
        b.first = c.edge_count;
        c.edge_count += static_cast<long long>(b.reps.size());

        const auto* ub = vblock_of.at(e.from);
        const auto* vb = vblock_of.at(e.to);
        Elt tinv = G.inv(b.translate);
        for (Elt x : b.reps) {
            b.alpha_end.push_back(ub->first + ub->coset_of[static_cast<size_t>(x)]);
            b.omega_end.push_back(vb->first + vb->coset_of[static_cast<size_t>(G.mul(x, tinv))]);
        }
        c.eblocks.push_back(std::move(b));
    }

    std::vector<std::vector<long long>> adj(static_cast<size_t>(c.vertex_count));
    for (const auto& b : c.eblocks)
        for (size_t i = 0; i < b.reps.size(); ++i) {
            adj[static_cast<size_t>(b.alpha_end[i])].push_back(b.omega_end[i]);
            adj[static_cast<size_t>(b.omega_end[i])].push_back(b.alpha_end[i]);
        }
    std::vector<char> seen(static_cast<size_t>(c.vertex_count), 0);
    for (long long start = 0; start < c.vertex_count; ++start) {
        if (seen[static_cast<size_t>(start)]) continue;
        ++c.components;
        std::deque<long long> queue{start};
        seen[static_cast<size_t>(start)] = 1;
        while (!queue.empty()) {
            long long v = queue.front();
            queue.pop_front();
            for (long long w : adj[static_cast<size_t>(v)])
                if (!seen[static_cast<size_t>(w)]) {
                    seen[static_cast<size_t>(w)] = 1;
                    queue.push_back(w);
                }
        }
    }
    return c;
}

long long genus_of_cover(const CosetGraph& c) {
    if (c.components != 1)
        throw ValidationError("coset graph is disconnected (" + std::to_string(c.components) +
                              " components); the maps do not reach the whole target");
    return c.edge_count - c.vertex_count + 1;
}

IntMatrix identity_matrix(size_t size) {
    IntMatrix m(size, std::vector<long long>(size, 0));
    for (size_t i = 0; i < size; ++i) m[i][i] = 1;
    return m;
}

IntMatrix matrix_product(const IntMatrix& a, const IntMatrix& b) {
    size_t n = a.size();
    if (b.size() != n) throw ValidationError("matrix dimensions do not match");
    IntMatrix out(n, std::vector<long long>(n, 0));
    for (size_t i = 0; i < n; ++i) {
        if (a[i].size() != n) throw ValidationError("matrix is not square");
        for (size_t k = 0; k < n; ++k) {
            long long aik = a[i][k];
            if (aik == 0) continue;
            if (b[k].size() != n) throw ValidationError("matrix is not square");
            for (size_t j = 0; j < n; ++j) out[i][j] += aik * b[k][j];
        }
    }
    return out;
}

// Fraction-free elimination; every interior division is exact.
BigInt matrix_determinant(const IntMatrix& m) {
    size_t n = m.size();
    std::vector<std::vector<BigInt>> a(n);
    for (size_t i = 0; i < n; ++i) {
        if (m[i].size() != n) throw ValidationError("matrix is not square");
        a[i].assign(m[i].begin(), m[i].end());
    }
    if (n == 0) return 1;
    BigInt prev = 1;
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        size_t pivot = k;
        while (pivot < n && a[pivot][k] == 0) ++pivot;
        if (pivot == n) return 0;
        if (pivot != k) {
            std::swap(a[pivot], a[k]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

namespace {

using Chain = std::vector<std::pair<long long, int>>;  // (flat edge, +-1)

}  // namespace

H1Action h1_action(const CosetGraph& c, const Surjection& s) {
    if (!c.target) throw ValidationError("coset graph carries no target group");
    if (s.target != c.target)
        throw ValidationError("surjection and coset graph disagree on the target group");
    if (c.components != 1)
        throw ValidationError("coset graph is disconnected (" + std::to_string(c.components) +
                              " components); the maps do not reach the whole target");
    const FiniteGroup& G = *c.target;
    size_t V = static_cast<size_t>(c.vertex_count);
    size_t E = static_cast<size_t>(c.edge_count);

    std::vector<std::pair<long long, long long>> ends(E);
    for (const auto& b : c.eblocks)
        for (size_t i = 0; i < b.reps.size(); ++i)
            ends[static_cast<size_t>(b.first) + i] = {b.alpha_end[i], b.omega_end[i]};

    std::vector<std::vector<std::pair<long long, long long>>> adj(V);
    for (size_t f = 0; f < E; ++f) {
        adj[static_cast<size_t>(ends[f].first)].push_back({static_cast<long long>(f), ends[f].second});
        adj[static_cast<size_t>(ends[f].second)].push_back({static_cast<long long>(f), ends[f].first});
    }

    // Breadth-first tree from flat vertex 0, edges scanned in flat order.
    std::vector<char> intree(E, 0), seen(V, 0);
    std::vector<Chain> chain_to(V);
    std::deque<long long> queue{0};
    seen[0] = 1;
    while (!queue.empty()) {
        long long v = queue.front();
        queue.pop_front();
        for (auto [f, w] : adj[static_cast<size_t>(v)]) {
            if (seen[static_cast<size_t>(w)]) continue;
            seen[static_cast<size_t>(w)] = 1;
            intree[static_cast<size_t>(f)] = 1;
            int dir = (ends[static_cast<size_t>(f)].first == v) ? 1 : -1;
            chain_to[static_cast<size_t>(w)] = chain_to[static_cast<size_t>(v)];
            chain_to[static_cast<size_t>(w)].push_back({f, dir});
            queue.push_back(w);
        }
    }

    H1Action out;
    std::vector<int> row(E, -1);
    std::vector<Chain> cycles;
    for (size_t f = 0; f < E; ++f) {
        if (intree[f]) continue;
        row[f] = static_cast<int>(cycles.size());
        out.basis.push_back(c.edge_label(static_cast<long long>(f)));
        Chain z = chain_to[static_cast<size_t>(ends[f].first)];
        z.push_back({static_cast<long long>(f), 1});
        const Chain& back = chain_to[static_cast<size_t>(ends[f].second)];
        for (auto it = back.rbegin(); it != back.rend(); ++it) z.push_back({it->first, -it->second});
        cycles.push_back(std::move(z));
    }
    out.genus = static_cast<long long>(cycles.size());
    if (out.genus != c.edge_count - c.vertex_count + 1)
        throw Error("spanning tree of the coset graph has the wrong corank");
    size_t gr = cycles.size();

    // Left translation permutes edges and preserves orientation, so the
    // matrix of x is read off by projecting each translated basis cycle
    // back onto the non-tree edges.
    std::vector<IntMatrix> all(static_cast<size_t>(G.order()));
    for (Elt x = 0; x < G.order(); ++x) {
        IntMatrix m(gr, std::vector<long long>(gr, 0));
        for (size_t j = 0; j < gr; ++j)
            for (auto [f, sgn] : cycles[j]) {
                long long moved = c.edge_act(x, f);
                if (row[static_cast<size_t>(moved)] >= 0)
                    m[static_cast<size_t>(row[static_cast<size_t>(moved)])][j] += sgn;
            }
        all[static_cast<size_t>(x)] = std::move(m);
    }

    if (all[static_cast<size_t>(G.id())] != identity_matrix(gr))
        throw Error("identity does not act as the identity matrix");
    for (Elt a : G.generators())
        for (Elt x = 0; x < G.order(); ++x)
            if (all[static_cast<size_t>(G.mul(a, x))] !=
                matrix_product(all[static_cast<size_t>(a)], all[static_cast<size_t>(x)]))
                throw Error("homology action fails the homomorphism check");

    out.generators = G.generators();
    for (Elt a : out.generators) out.matrices.push_back(all[static_cast<size_t>(a)]);
    IntMatrix one = identity_matrix(gr);
    for (Elt x = 0; x < G.order(); ++x)
        if (all[static_cast<size_t>(x)] == one) out.kernel.push_back(x);
    return out;
}

NormalFamily max_finite_normal_subgroup(const GraphOfGroups& g) {
    g.validate();
    GraphOfGroups r = g.reduce_to_normal_form();

    std::map<std::string, std::vector<Elt>> fam;
    for (const auto& [vid, v] : r.vertices()) {
        std::vector<Elt> all(static_cast<size_t>(v.group->order()));
        std::iota(all.begin(), all.end(), 0);
        fam[vid] = std::move(all);
    }

    auto meet = [](const std::vector<Elt>& a, const std::vector<Elt>& b) {
        std::vector<Elt> out;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
        return out;
    };
    for (bool changed = true; changed;) {
        changed = false;
        auto shrink = [&](const std::string& vid, std::vector<Elt> next) {
            if (next.size() < fam[vid].size()) {
                fam[vid] = std::move(next);
                changed = true;
            }
        };
        for (const auto& [vid, v] : r.vertices()) shrink(vid, v.group->normal_core(fam[vid]));
        for (const auto& [eid, e] : r.edges()) {
            shrink(e.to, meet(fam[e.to], e.omega.map_set(e.alpha.preimage(fam[e.from]))));
            shrink(e.from, meet(fam[e.from], e.alpha.map_set(e.omega.preimage(fam[e.to]))));
        }
    }

    NormalFamily out;
    out.root = fam.begin()->first;
    out.order = static_cast<long long>(fam.at(out.root).size());
    for (const auto& [vid, sub] : fam)
        if (static_cast<long long>(sub.size()) != out.order)
            throw Error("normal family sizes disagree after stabilization");
    out.trivial = (out.order == 1);
    out.by_vertex = std::move(fam);
    return out;
}

FaithfulnessReport is_faithful(const GraphOfGroups& g, const Surjection& s) {
    std::string reason;
    if (!verify_surjection(s, &reason))
        throw ValidationError("surjection does not verify: " + reason);

    FaithfulnessReport rep;
    rep.family = max_finite_normal_subgroup(g);
    rep.faithful = rep.family.trivial;

    CosetGraph cover = build_coset_graph(g, s);
    H1Action h1 = h1_action(cover, s);
    rep.h1_kernel = h1.kernel;
    rep.h1_faithful = (h1.kernel.size() == 1);

    if (g.in_normal_form()) {
        const GroupHom& root_map = s.vertex_maps.at(rep.family.root);
        rep.image_in_target = root_map.map_set(rep.family.by_vertex.at(rep.family.root));
    } else {
        rep.notes.push_back(
            "graph was reduced internally; image of the normal family in the target not computed");
    }
    rep.image_in_h1_kernel = std::includes(rep.h1_kernel.begin(), rep.h1_kernel.end(),
                                           rep.image_in_target.begin(), rep.image_in_target.end());
    if (!rep.image_in_h1_kernel)
        rep.notes.push_back("inconsistency: the normal subgroup image escapes the homology kernel");
    if (rep.h1_faithful && !rep.faithful)
        rep.notes.push_back(
            "inconsistency: homology action is faithful yet a nontrivial finite normal subgroup was found");
    return rep;
}

}  // namespace handlecalc
