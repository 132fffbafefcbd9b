#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "handlecalc/quat.hpp"

namespace handlecalc {

using Elt = int;                     // element index within one group
using Perm = std::vector<uint16_t>;  // permutation as image list

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationError : Error {
    using Error::Error;
};
struct InadmissibleError : Error {
    using Error::Error;
};
struct ResourceError : Error {
    using Error::Error;
};

enum class Family {
    Cyclic,
    Dihedral,
    Tetrahedral,
    Octahedral,
    Icosahedral,
    BinaryDihedral,
    BinaryTetrahedral,
    BinaryOctahedral,
    BinaryIcosahedral,
    CentralProduct,
    Generic,
};

const char* family_name(Family f);

class FiniteGroup;
using GroupPtr = std::shared_ptr<const FiniteGroup>;

/// Finite group with elements realized as permutations. The identity is
/// element 0 for all built-in constructions; table-imported groups keep their
/// own identity index. The full multiplication table is always materialized
/// (orders are capped), so products and inverses are O(1) lookups.
class FiniteGroup {
public:
    // Orders beyond this are outside the scope of every computation here
    // (largest group in the calculus: central product at n = 12, order 1152).
    static constexpr int kOrderCap = 4096;

    static GroupPtr cyclic(int n);
    static GroupPtr dihedral(int n);         // order 2n, n >= 1
    static GroupPtr binary_dihedral(int n);  // order 4n, n >= 1; quaternion realization attached
    static GroupPtr polyhedral(Family kind);  // Tetrahedral | Octahedral | Icosahedral
    /// Central product (G1 x G2)/<(z1, z2)> of two groups with distinguished
    /// central involutions. Carries an SO(4) realization when both factors
    /// carry S^3 realizations.
    static GroupPtr central_product(const GroupPtr& g1, const GroupPtr& g2);
    static GroupPtr direct_product(const GroupPtr& g1, const GroupPtr& g2);
    /// Quotient by a normal subgroup (element set). Elements of the quotient
    /// are the cosets, indexed by smallest member.
    static GroupPtr quotient(const GroupPtr& g, const std::vector<Elt>& normal_sub);
    /// Import from an explicit multiplication table; verifies the group
    /// axioms (identity, inverses, and associativity via the generator
    /// induction argument). Optional generator list, else a greedy one is
    /// chosen deterministically. An SO(4) realization can ride along.
    static GroupPtr from_table(const std::vector<std::vector<int>>& table,
                               std::optional<std::vector<Elt>> generators = std::nullopt,
                               std::optional<std::vector<QuatPair>> so4 = std::nullopt);
    /// Close a generator set of permutations of the given degree.
    static GroupPtr from_perms(int degree, const std::vector<Perm>& gens,
                               Family family = Family::Generic, int param = 0);

    int order() const { return static_cast<int>(n_); }
    int degree() const { return degree_; }
    Elt id() const { return id_; }
    Elt mul(Elt a, Elt b) const { return table_[static_cast<size_t>(a) * n_ + b]; }
    Elt inv(Elt a) const { return inverse_[a]; }
    int elt_order(Elt a) const { return elt_order_[a]; }
    Elt power(Elt a, long long k) const;
    Elt conj(Elt g, Elt a) const { return mul(mul(g, a), inv(g)); }  // g a g^-1
    const Perm& perm(Elt a) const { return elements_[a]; }

    const std::vector<Elt>& generators() const { return generators_; }
    Family family() const { return family_; }
    int family_param() const { return param_; }
    std::optional<Elt> central_involution() const { return central_; }
    const std::optional<std::vector<Quat>>& s3_realization() const { return s3_; }
    const std::optional<std::vector<QuatPair>>& so4_realization() const { return so4_; }

    bool is_abelian() const;
    /// Multiset of element orders, as order -> count. Cheap iso prefilter.
    std::map<int, int> order_histogram() const;

    /// Central products only: representative factor pair per element, and the
    /// element holding a given factor pair's class. Throws otherwise.
    const std::vector<std::pair<Elt, Elt>>& cp_reps() const;
    Elt cp_class(Elt a, Elt b) const;

    /// Extend generator images to a full homomorphism into target; nullopt if
    /// the assignment does not define one (checked on the whole table).
    std::optional<std::vector<Elt>> extend_hom(const FiniteGroup& target,
                                               const std::vector<Elt>& gen_images) const;

    /// Subgroup generated by the given elements, sorted.
    std::vector<Elt> close(std::vector<Elt> seed) const;
    std::vector<Elt> conjugate_set(const std::vector<Elt>& sub, Elt g) const;
    bool is_normal(const std::vector<Elt>& sub) const;
    /// Largest subgroup of `sub` normal in the whole group.
    std::vector<Elt> normal_core(const std::vector<Elt>& sub) const;
    std::vector<Elt> center() const;

    const std::vector<std::vector<int>>& full_table() const;

protected:
    FiniteGroup() = default;  // factories only; see alloc() in the .cpp

private:
    void finish_from_table(std::vector<int>&& flat, Elt id, std::optional<std::vector<Elt>> gens);
    void compute_derived();
    void pick_generators();

    size_t n_ = 0;
    int degree_ = 0;
    Elt id_ = 0;
    std::vector<Perm> elements_;
    std::vector<int> table_;  // n x n flattened
    std::vector<Elt> inverse_;
    std::vector<int> elt_order_;
    std::vector<Elt> generators_;
    Family family_ = Family::Generic;
    int param_ = 0;
    std::optional<Elt> central_;
    std::optional<std::vector<Quat>> s3_;
    std::optional<std::vector<QuatPair>> so4_;
    std::vector<std::pair<Elt, Elt>> cp_reps_;  // central products only
    std::vector<int> cp_class_;                 // flat |G1| x |G2| pair -> class
    int cp_n2_ = 0;
    mutable std::vector<std::vector<int>> table_2d_;  // lazy view for serialization

    struct WordStep {
        Elt parent = -1;
        int gen = -1;
    };
    std::vector<WordStep> word_;  // BFS factorization over generators_
    std::vector<Elt> bfs_order_;  // discovery order; parents precede children
    friend std::vector<int> generator_word(const FiniteGroup&, Elt);
};

/// Factorization of an element as a word in generators() (indices into that
/// list), from the construction-time BFS. Empty word = identity.
std::vector<int> generator_word(const FiniteGroup& g, Elt a);

/// Injective homomorphism between two groups, stored with both the generator
/// images that define it and the full image table derived from them.
struct GroupHom {
    GroupPtr domain;
    GroupPtr codomain;
    std::vector<Elt> gen_images;  // one per domain->generators()
    std::vector<Elt> images;      // size |domain|

    Elt apply(Elt a) const { return images[a]; }
    std::vector<Elt> image_subgroup() const;  // sorted
    bool injective() const;

    /// Build from generator images; throws ValidationError if the assignment
    /// is not a homomorphism or (when require_injective) not injective.
    static GroupHom build(GroupPtr domain, GroupPtr codomain, std::vector<Elt> gen_images,
                          bool require_injective = true);
    static GroupHom identity(const GroupPtr& g);
    /// Preimage {h : f(h) in sub}, sorted (sub need not be inside the image).
    std::vector<Elt> preimage(const std::vector<Elt>& sub) const;
    std::vector<Elt> map_set(const std::vector<Elt>& sub) const;  // sorted image
};

/// All injective homomorphisms A -> G, each as its generator-image tuple, in
/// lexicographic order of those tuples. Deterministic.
std::vector<GroupHom> enumerate_monomorphisms(const GroupPtr& a, const GroupPtr& g);

struct SubgroupInfo {
    std::vector<Elt> elements;  // sorted
    bool normal = false;
};

/// Every subgroup, sorted by (order, elements lexicographically).
/// Throws ResourceError if |G| exceeds the cap.
std::vector<SubgroupInfo> subgroup_lattice(const FiniteGroup& g, int order_cap = 1000);

struct So3Class {
    enum Kind { CyclicK, DihedralK, TetrahedralK, OctahedralK, IcosahedralK, NotRealizable } kind;
    int order = 0;  // group order for the realizable kinds
    std::string describe() const;
    bool realizable() const { return kind != NotRealizable; }
};

/// Decide whether the group is isomorphic to a finite subgroup of SO(3)
/// (cyclic, dihedral, or one of the three polyhedral groups).
So3Class classify_so3_subgroup(const FiniteGroup& g);

bool is_isomorphic(const FiniteGroup& a, const FiniteGroup& b);

std::vector<long long> divisors_of(long long n);

}  // namespace handlecalc
