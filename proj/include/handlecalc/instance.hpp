#pragma once

#include "handlecalc/admissibility.hpp"
#include "handlecalc/gog.hpp"
#include "handlecalc/homsearch.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace handlecalc {

/// Constructible description of a group, the form group literals take in
/// instance documents. Building twice gives structurally equal groups.
struct GroupSpec {
    std::string family;  // cyclic | dihedral | binary_dihedral | polyhedral |
                         // central_product | direct_product | table
    int n = 0;                                  // cyclic / dihedral / binary_dihedral
    std::optional<CyclicRotationType> rotation; // cyclic only; rotation.m must equal n
    std::string kind;                           // polyhedral: tetrahedral | octahedral | icosahedral
    std::vector<GroupSpec> factors;             // central_product / direct_product, exactly two
    std::vector<std::vector<int>> table;        // table family
    std::optional<std::vector<Elt>> table_generators;
    std::optional<std::vector<QuatPair>> so4;   // table family, one pair per element

    GroupPtr build() const;

    static GroupSpec cyclic(int n);
    static GroupSpec cyclic(const CyclicRotationType& rt);
    static GroupSpec dihedral(int n);
    static GroupSpec binary_dihedral(int n);
    static GroupSpec polyhedral(const std::string& kind);
    static GroupSpec central_product(GroupSpec a, GroupSpec b);
    static GroupSpec direct_product(GroupSpec a, GroupSpec b);
    static GroupSpec from_table(std::vector<std::vector<int>> table,
                                std::optional<std::vector<Elt>> generators = std::nullopt,
                                std::optional<std::vector<QuatPair>> so4 = std::nullopt);
};

/// One self-contained problem instance: the graph with its group literals,
/// optional stabilizer menus, and optionally a target group with the data of
/// a surjection onto it. Serialization is canonical: ids sorted, fixed key
/// order, so equal documents serialize identically.
struct InstanceDocument {
    int schema_version = 1;
    GraphOfGroups graph;
    std::map<std::string, GroupSpec> vertex_specs;
    std::map<std::string, GroupSpec> edge_specs;
    std::map<std::string, StabilizerMenu> menus;
    std::optional<GroupSpec> target_spec;
    GroupPtr target;  // built from target_spec when present
    std::map<std::string, std::vector<Elt>> vertex_images;
    std::map<std::string, Elt> stable_letters;
    std::vector<std::string> notes;
};

/// Parses and validates a document; every group literal is constructed and
/// the graph checked for connectivity and injective edge maps. Errors carry
/// the offending field path.
InstanceDocument parse_instance(const std::string& text);

std::string serialize_instance(const InstanceDocument& doc);

/// FNV-1a (64 bit) of the canonical serialization, as 16 hex digits.
std::string instance_digest(const InstanceDocument& doc);

uint64_t fnv1a64(const std::string& bytes);

/// Assembles the document's surjection data into a Surjection over its
/// target. Throws ValidationError when target or vertex images are missing;
/// the result is not verified here.
Surjection surjection_from(const InstanceDocument& doc);

/// Menus for check_attachments: the declared ones, filled in from each
/// rotation-typed cyclic vertex where no menu was declared.
std::map<std::string, StabilizerMenu> effective_menus(const InstanceDocument& doc);

}  // namespace handlecalc
