#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "handlecalc/gog.hpp"

namespace handlecalc {

/// Homomorphism pi_1(graph) -> target that is injective on every vertex
/// group and hits all of the target. Self-contained: the vertex maps carry
/// their domain groups. The presentation is shared by all results of one
/// search.
struct Surjection {
    std::shared_ptr<const Presentation> pres;
    GroupPtr target;
    std::map<std::string, GroupHom> vertex_maps;   // vertex id -> G_v -> target
    std::map<std::string, Elt> stable_letters;     // non-tree edge id -> target elt

    /// Image per presentation generator, aligned with pres->generators.
    std::vector<Elt> generator_images() const;
};

struct SurjectionSearchResult {
    std::vector<Surjection> found;
    bool truncated = false;   // limit hit before the tree was exhausted
    long long examined = 0;   // complete candidate assignments tested
    std::vector<std::string> warnings;
};

/// Backtracking search: a monomorphism per vertex group pruned by agreement
/// across spanning-tree edges, then a stable-letter image per remaining edge
/// satisfying its conjugation relation, then a surjectivity filter.
/// Deterministic order; at most limit results.
SurjectionSearchResult find_surjections(const GraphOfGroups& g, const GroupPtr& target,
                                        long long limit = 10000);

/// Re-derives everything from the stored data: every relator maps to the
/// identity, every vertex map is an injective homomorphism, and the images
/// generate the target. Independent of the search's pruning.
bool verify_surjection(const Surjection& s, std::string* reason = nullptr);

}  // namespace handlecalc
