#pragma once

#include <map>
#include <string>
#include <vector>

#include "handlecalc/group.hpp"
#include "handlecalc/rational.hpp"

namespace handlecalc {

struct GogVertex {
    std::string id;
    GroupPtr group;
};

/// Geometric edge with a chosen orientation: alpha embeds the edge group at
/// the `from` end, omega at the `to` end. Loops (from == to) are allowed.
struct GogEdge {
    std::string id;
    GroupPtr group;
    std::string from, to;
    GroupHom alpha;  // group -> vertex(from).group, injective
    GroupHom omega;  // group -> vertex(to).group, injective

    bool is_loop() const { return from == to; }
};

/// Word in the generators of a presentation: entries are +-(index + 1).
using Word = std::vector<int>;

inline Word inverse_word(const Word& w) {
    Word r(w.rbegin(), w.rend());
    for (int& x : r) x = -x;
    return r;
}

/// Finite presentation of the fundamental group of a graph of groups:
/// generators of every vertex group plus one stable letter per edge outside
/// the spanning tree.
struct Presentation {
    struct Generator {
        enum Kind { VertexGen, StableLetter } kind;
        std::string owner;  // vertex id, or edge id for stable letters
        int local_index;    // index into the vertex group's generator list
        std::string name;
    };

    std::vector<Generator> generators;
    std::vector<Word> relators;
    std::vector<std::string> tree_edges;             // sorted ids
    std::map<std::string, int> vertex_gen_base;      // vertex -> first generator index
    std::map<std::string, int> stable_letter_index;  // non-tree edge -> generator index

    bool is_tree_edge(const std::string& e) const;
};

class GraphOfGroups {
public:
    void add_vertex(const std::string& id, GroupPtr group);
    /// Edge with explicit monomorphisms given by generator images into the
    /// endpoint vertex groups; injectivity is enforced here.
    void add_edge(const std::string& id, GroupPtr group, const std::string& from,
                  const std::string& to, std::vector<Elt> alpha_images,
                  std::vector<Elt> omega_images);

    const std::map<std::string, GogVertex>& vertices() const { return vertices_; }
    const std::map<std::string, GogEdge>& edges() const { return edges_; }
    const GogVertex& vertex(const std::string& id) const;
    const GogEdge& edge(const std::string& id) const;
    bool has_vertex(const std::string& id) const { return vertices_.count(id) > 0; }

    bool is_connected() const;
    /// Throws ValidationError on empty or disconnected graphs (monomorphism
    /// integrity is already enforced edge by edge).
    void validate() const;

    /// Exact sum_v 1/|G_v| - sum_e 1/|G_e|.
    Rational euler_characteristic() const;
    /// g = 1 - chi * n. Throws InadmissibleError when chi * n is not an
    /// integer or the genus would be negative: no group of that order acts
    /// over this graph.
    long long genus_from_order(long long n) const;

    /// Non-loop edges whose group maps onto a whole endpoint group.
    std::vector<std::string> trivial_edges() const;
    bool in_normal_form() const { return trivial_edges().empty(); }
    /// Collapses trivial edges until none remain. Preserves chi and the
    /// fundamental group; idempotent.
    [[nodiscard]] GraphOfGroups reduce_to_normal_form() const;
    /// Replaces edge e by a path of two edges through a fresh vertex carrying
    /// the edge group. Preserves chi.
    [[nodiscard]] GraphOfGroups subdivide_edge(const std::string& e) const;

    /// Spanning tree edge ids: breadth-first from the smallest vertex id,
    /// edges scanned in id order. Deterministic.
    std::vector<std::string> spanning_tree() const;
    Presentation fundamental_presentation() const;

private:
    std::map<std::string, GogVertex> vertices_;
    std::map<std::string, GogEdge> edges_;

    [[nodiscard]] GraphOfGroups collapse_edge(const std::string& e) const;
};

/// Word for a vertex-group element in presentation generator indices.
Word element_word(const Presentation& p, const std::string& vertex, const FiniteGroup& g, Elt a);

}  // namespace handlecalc
