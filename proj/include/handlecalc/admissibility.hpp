#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "handlecalc/gog.hpp"
#include "handlecalc/quat.hpp"

namespace handlecalc {

/// Orthogonal action data for a cyclic vertex group of order m: the generator
/// rotates two orthogonal invariant circles of S^3 by 2*pi*s/m and 2*pi*t/m.
/// Faithful exactly when gcd(s,t,m) = 1.
struct CyclicRotationType {
    long long m = 1;
    long long s = 0;
    long long t = 0;
};

/// One conjugacy class of point stabilizers of the vertex action, with the
/// shape of its fixed set. Circle and free entries accept any number of
/// attached edge ends, isolated points at most one.
struct MenuEntry {
    enum Kind { Circle, IsolatedPoint, Free };

    std::vector<Elt> subgroup;  // sorted, contains the identity
    Kind kind = Free;
    std::optional<Quat> witness;  // sample fixed point on the unit sphere
    bool declared = false;        // supplied by hand, not derived from a rotation type
};

struct StabilizerMenu {
    std::string vertex;
    std::vector<MenuEntry> entries;
};

/// Quaternion pair for each element k of the rotation type's cyclic group;
/// pairs act by x -> q1^-1 x q2.
std::vector<QuatPair> rotation_pairs(const CyclicRotationType& rt);

/// Cyclic group of order m with the rotation realization attached.
GroupPtr cyclic_with_rotation(const CyclicRotationType& rt);

/// Stabilizer menu of the rotation action: circles with stabilizers of order
/// gcd(m,s) and gcd(m,t) (kept only when nontrivial; the two orders are
/// automatically coprime) plus the free entry.
StabilizerMenu cyclic_stabilizer_menu(const CyclicRotationType& rt);

/// True iff claimed is exactly the set of elements fixing point under the
/// attached action, and that set is a subgroup. Throws when the group has no
/// quaternion realization or the point is off the unit sphere.
bool verify_so4_certificate(const FiniteGroup& g, const Quat& point,
                            const std::vector<Elt>& claimed);

/// One edge end against the menu at its vertex.
struct AttachmentCheck {
    std::string edge;
    std::string vertex;
    bool alpha_end = true;
    bool matched = false;
    int entry = -1;  // index into the vertex menu when matched
};

struct AdmissibilityReport {
    bool ok = true;
    std::vector<AttachmentCheck> ends;
    std::vector<std::string> violations;
    std::vector<std::string> notes;
};

/// Matches every edge-group image against the stabilizer menu of its vertex,
/// up to conjugacy in the vertex group. Validates the menus themselves first:
/// entries must be subgroups, distinct circle entries must intersect
/// trivially, and witnesses are certified whenever a realization is present.
/// Throws when a vertex has no menu.
AdmissibilityReport check_attachments(const GraphOfGroups& g,
                                      const std::map<std::string, StabilizerMenu>& menus);

struct So3EdgeReport {
    bool ok = true;
    std::map<std::string, So3Class> classes;
    std::vector<std::string> violations;
};

/// Classifies every edge group as a rotation group of the sphere; groups
/// outside the cyclic / dihedral / polyhedral list are violations.
So3EdgeReport check_so3_edge_groups(const GraphOfGroups& g);

}  // namespace handlecalc
