#pragma once

#include "handlecalc/gog.hpp"
#include "handlecalc/homsearch.hpp"
#include "handlecalc/rational.hpp"

#include <map>
#include <string>
#include <vector>

namespace handlecalc {

/// Quotient of the universal tree by the kernel of a surjection phi. One
/// vertex per left coset x*phi(G_v), one edge per left coset x*H_e where
/// H_e = phi_u(alpha_e(G_e)). The alpha end of edge coset x*H_e is x*H_u;
/// the omega end is x*t^{-1}*H_v with t the stable-letter image (identity
/// on spanning-tree edges). The target acts by left multiplication.
///
/// Blocks are ordered by graph vertex/edge id, cosets inside a block by
/// their smallest element, so flat indices are deterministic.
struct CosetGraph {
    struct VertexBlock {
        std::string vertex;
        std::vector<Elt> subgroup;   // phi(G_v), sorted
        std::vector<Elt> reps;       // smallest element per coset, ascending
        std::vector<int> coset_of;   // target element -> local coset
        long long first = 0;         // flat index of local coset 0
    };
    struct EdgeBlock {
        std::string edge;
        std::vector<Elt> subgroup;   // phi_u(alpha_e(G_e)), sorted
        std::vector<Elt> reps;
        std::vector<int> coset_of;
        long long first = 0;
        Elt translate = 0;           // stable-letter image; identity on tree edges
        std::vector<long long> alpha_end;   // flat vertex per local coset
        std::vector<long long> omega_end;
    };

    GroupPtr target;
    std::vector<VertexBlock> vblocks;
    std::vector<EdgeBlock> eblocks;
    long long vertex_count = 0;
    long long edge_count = 0;
    int components = 0;

    long long vertex_act(Elt a, long long flat) const;
    long long edge_act(Elt a, long long flat) const;
    std::string vertex_label(long long flat) const;  // "vid[rep]"
    std::string edge_label(long long flat) const;
};

/// Builds the coset graph for any vertex-injective family of maps; phi need
/// not be surjective, in which case the graph splits into index-many
/// components and the count is recorded rather than rejected.
CosetGraph build_coset_graph(const GraphOfGroups& g, const Surjection& s);

/// Cycle rank E - V + 1. Throws ValidationError when the coset graph is
/// disconnected; the message carries the component count.
long long genus_of_cover(const CosetGraph& c);

using IntMatrix = std::vector<std::vector<long long>>;

IntMatrix identity_matrix(size_t size);
IntMatrix matrix_product(const IntMatrix& a, const IntMatrix& b);
BigInt matrix_determinant(const IntMatrix& m);

/// Action induced on first homology of the coset graph. Basis: the cycles
/// attached to the non-tree edges of a breadth-first spanning tree rooted at
/// flat vertex 0. Matrices act on column vectors of basis coordinates and
/// are verified multiplicative over the whole group before being returned.
struct H1Action {
    long long genus = 0;
    std::vector<Elt> generators;       // target group generators
    std::vector<IntMatrix> matrices;   // one per generator
    std::vector<std::string> basis;    // edge label per basis cycle
    std::vector<Elt> kernel;           // elements acting trivially, sorted
};

H1Action h1_action(const CosetGraph& c, const Surjection& s);

/// Greatest family {N_v <= G_v} with every N_v normal in its vertex group
/// and carried exactly onto its neighbor by each edge identification. The
/// input is reduced to normal form internally and the family reported on the
/// reduced graph; all members share one order, the order of the maximal
/// finite normal subgroup of the fundamental group.
struct NormalFamily {
    std::map<std::string, std::vector<Elt>> by_vertex;
    std::string root;        // smallest reduced-graph vertex id
    long long order = 1;
    bool trivial = true;
};

NormalFamily max_finite_normal_subgroup(const GraphOfGroups& g);

/// Faithfulness verdict for the action defined by a verified surjection,
/// with the homology action as a cross-check: phi(N) must land inside the
/// H1 kernel, and an H1-faithful action forces a trivial N.
struct FaithfulnessReport {
    bool faithful = false;             // maximal finite normal subgroup trivial
    NormalFamily family;
    std::vector<Elt> image_in_target;  // phi(N), when the input was already reduced
    std::vector<Elt> h1_kernel;
    bool h1_faithful = false;
    bool image_in_h1_kernel = false;
    std::vector<std::string> notes;
};

FaithfulnessReport is_faithful(const GraphOfGroups& g, const Surjection& s);

}  // namespace handlecalc
