#include "handlecalc/group.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <unordered_map>

namespace handlecalc {

const char* family_name(Family f) {
    switch (f) {
        case Family::Cyclic: return "cyclic";
        case Family::Dihedral: return "dihedral";
        case Family::Tetrahedral: return "tetrahedral";
        case Family::Octahedral: return "octahedral";
        case Family::Icosahedral: return "icosahedral";
        case Family::BinaryDihedral: return "binary_dihedral";
        case Family::BinaryTetrahedral: return "binary_tetrahedral";
        case Family::BinaryOctahedral: return "binary_octahedral";
        case Family::BinaryIcosahedral: return "binary_icosahedral";
        case Family::CentralProduct: return "central_product";
        case Family::Generic: return "table";
    }
    return "?";
}

namespace {

struct PermHash {
    size_t operator()(const Perm& p) const {
        size_t h = 1469598103934665603ull;
        for (uint16_t v : p) {
            h ^= v;
            h *= 1099511628211ull;
        }
        return h;
    }
};

std::shared_ptr<FiniteGroup> alloc() {
    struct Access : FiniteGroup {};
    // FiniteGroup's constructor is private; grant access through a local
    // derived type so factories can allocate.
    return std::static_pointer_cast<FiniteGroup>(std::make_shared<Access>());
}

void check_cap(long long n, const char* what) {
    if (n > FiniteGroup::kOrderCap)
        throw ResourceError(std::string(what) + ": order " + std::to_string(n) +
                            " exceeds cap " + std::to_string(FiniteGroup::kOrderCap));
}

}  // namespace

// ---------------------------------------------------------------------------
// construction

void FiniteGroup::finish_from_table(std::vector<int>&& flat, Elt id,
                                    std::optional<std::vector<Elt>> gens) {
    table_ = std::move(flat);
    id_ = id;
    if (!gens) {
        pick_generators();
    } else {
        generators_ = std::move(*gens);
        for (Elt g : generators_)
            if (g < 0 || g >= static_cast<int>(n_))
                throw ValidationError("generator index out of range");
    }
    compute_derived();
}

void FiniteGroup::pick_generators() {
    generators_.clear();
    std::vector<Elt> cur{id_};
    for (Elt a = 0; a < static_cast<int>(n_) && cur.size() < n_; ++a) {
        if (std::binary_search(cur.begin(), cur.end(), a)) continue;
        generators_.push_back(a);
        cur = close(generators_);
    }
}

void FiniteGroup::compute_derived() {
    const int n = static_cast<int>(n_);
    inverse_.assign(n_, -1);
    for (Elt a = 0; a < n; ++a)
        for (Elt b = 0; b < n; ++b)
            if (mul(a, b) == id_) {
                inverse_[a] = b;
                break;
            }
    for (Elt a = 0; a < n; ++a)
        if (inverse_[a] < 0) throw ValidationError("element without inverse");

    elt_order_.assign(n_, 0);
    for (Elt a = 0; a < n; ++a) {
        int k = 1;
        Elt x = a;
        while (x != id_) {
            x = mul(x, a);
            ++k;
            if (k > n) throw ValidationError("element order exceeds group order");
        }
        elt_order_[a] = k;
    }

    if (generators_.empty() && n_ > 1) pick_generators();

    // factorization words: BFS from the identity, right-multiplying by
    // generators in listed order
    word_.assign(n_, WordStep{});
    std::vector<char> seen(n_, 0);
    std::vector<Elt> order;
    order.reserve(n_);
    seen[id_] = 1;
    order.push_back(id_);
    for (size_t head = 0; head < order.size(); ++head) {
        Elt x = order[head];
        for (size_t gi = 0; gi < generators_.size(); ++gi) {
            Elt y = mul(x, generators_[gi]);
            if (!seen[y]) {
                seen[y] = 1;
                word_[y] = WordStep{x, static_cast<int>(gi)};
                order.push_back(y);
            }
        }
    }
    if (order.size() != n_) throw ValidationError("generators do not generate the group");
    bfs_order_ = std::move(order);
}

GroupPtr FiniteGroup::from_perms(int degree, const std::vector<Perm>& gens, Family family,
                                 int param) {
    auto g = alloc();
    g->family_ = family;
    g->param_ = param;
    g->degree_ = degree;

    Perm idp(degree);
    for (int i = 0; i < degree; ++i) idp[i] = static_cast<uint16_t>(i);
    std::unordered_map<Perm, Elt, PermHash> index;
    g->elements_.push_back(idp);
    index[idp] = 0;

    std::vector<Elt> gen_ids;
    auto compose = [](const Perm& a, const Perm& b) {
        Perm r(a.size());
        for (size_t i = 0; i < a.size(); ++i) r[i] = a[b[i]];
        return r;
    };
    std::vector<Perm> uniq;
    for (const Perm& p : gens) {
        if (static_cast<int>(p.size()) != degree) throw ValidationError("generator degree mismatch");
        auto it = index.find(p);
        if (it == index.end()) {
            g->elements_.push_back(p);
            Elt e = static_cast<Elt>(g->elements_.size() - 1);
            index[p] = e;
            gen_ids.push_back(e);
            uniq.push_back(p);
        } else if (it->second != 0) {
            gen_ids.push_back(it->second);
        }
    }
    for (size_t head = 0; head < g->elements_.size(); ++head) {
        for (const Perm& p : uniq) {
            Perm q = compose(g->elements_[head], p);
            if (!index.count(q)) {
                check_cap(static_cast<long long>(g->elements_.size()) + 1, "from_perms");
                index[q] = static_cast<Elt>(g->elements_.size());
                g->elements_.push_back(std::move(q));
            }
        }
    }
    g->n_ = g->elements_.size();
    std::vector<int> flat(g->n_ * g->n_);
    for (size_t a = 0; a < g->n_; ++a)
        for (size_t b = 0; b < g->n_; ++b)
            flat[a * g->n_ + b] = index.at(compose(g->elements_[a], g->elements_[b]));
    std::sort(gen_ids.begin(), gen_ids.end());
    gen_ids.erase(std::unique(gen_ids.begin(), gen_ids.end()), gen_ids.end());
    g->finish_from_table(std::move(flat), 0, gen_ids);
    return g;
}

namespace {

// left-regular permutation realization: element a acts by j -> table[a][j]
void attach_regular_perms(FiniteGroup&, std::vector<Perm>&, const std::vector<int>&, size_t);

}  // namespace

GroupPtr FiniteGroup::cyclic(int n) {
    if (n < 1) throw ValidationError("cyclic: n must be >= 1");
    check_cap(n, "cyclic");
    auto g = alloc();
    g->family_ = Family::Cyclic;
    g->param_ = n;
    g->n_ = static_cast<size_t>(n);
    g->degree_ = n;
    std::vector<int> flat(g->n_ * g->n_);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) flat[static_cast<size_t>(a) * n + b] = (a + b) % n;
    g->elements_.resize(g->n_);
    for (int a = 0; a < n; ++a) {
        Perm p(n);
        for (int j = 0; j < n; ++j) p[j] = static_cast<uint16_t>((a + j) % n);
        g->elements_[a] = std::move(p);
    }
    g->finish_from_table(std::move(flat), 0,
                         n == 1 ? std::vector<Elt>{} : std::vector<Elt>{1});
    return g;
}

GroupPtr FiniteGroup::dihedral(int n) {
    if (n < 1) throw ValidationError("dihedral: n must be >= 1");
    check_cap(2LL * n, "dihedral");
    auto g = alloc();
    g->family_ = Family::Dihedral;
    g->param_ = n;
    g->n_ = static_cast<size_t>(2 * n);
    g->degree_ = 2 * n;
    // element (k, e) = r^k s^e  ->  index e*n + k
    auto idx = [n](int k, int e) { return e * n + ((k % n) + n) % n; };
    std::vector<int> flat(g->n_ * g->n_);
    for (int e1 = 0; e1 < 2; ++e1)
        for (int k1 = 0; k1 < n; ++k1)
            for (int e2 = 0; e2 < 2; ++e2)
                for (int k2 = 0; k2 < n; ++k2)
                    flat[static_cast<size_t>(idx(k1, e1)) * g->n_ + idx(k2, e2)] =
                        idx(e1 ? k1 - k2 : k1 + k2, e1 ^ e2);
    std::vector<Perm> perms;
    attach_regular_perms(*g, perms, flat, g->n_);
    g->elements_ = std::move(perms);
    std::vector<Elt> gens;
    if (n > 1) gens = {idx(1, 0), idx(0, 1)};
    else gens = {idx(0, 1)};
    g->finish_from_table(std::move(flat), 0, gens);
    return g;
}

GroupPtr FiniteGroup::binary_dihedral(int n) {
    if (n < 2) throw ValidationError("binary_dihedral: n must be >= 2");
    check_cap(4LL * n, "binary_dihedral");
    auto g = alloc();
    g->family_ = Family::BinaryDihedral;
    g->param_ = n;
    const int m = 2 * n;  // order of the rotation a = e^{i pi/n}
    g->n_ = static_cast<size_t>(4 * n);
    g->degree_ = 4 * n;
    // element (k, s) = a^k j^s, k mod 2n, s in {0,1}
    auto idx = [m](int k, int s) { return s * m + ((k % m) + m) % m; };
    std::vector<int> flat(g->n_ * g->n_);
    for (int s1 = 0; s1 < 2; ++s1)
        for (int k1 = 0; k1 < m; ++k1)
            for (int s2 = 0; s2 < 2; ++s2)
                for (int k2 = 0; k2 < m; ++k2) {
                    int k, s;
                    if (s1 == 0) {
                        k = k1 + k2;
                        s = s2;
                    } else if (s2 == 0) {
                        k = k1 - k2;
                        s = 1;
                    } else {
                        k = k1 - k2 + n;
                        s = 0;
                    }
                    flat[static_cast<size_t>(idx(k1, s1)) * g->n_ + idx(k2, s2)] = idx(k, s);
                }
    std::vector<Perm> perms;
    attach_regular_perms(*g, perms, flat, g->n_);
    g->elements_ = std::move(perms);
    g->central_ = idx(n, 0);  // -1
    std::vector<Quat> s3(g->n_);
    for (int s = 0; s < 2; ++s)
        for (int k = 0; k < m; ++k) {
            double th = std::numbers::pi * k / n;
            s3[idx(k, s)] = s == 0 ? Quat{std::cos(th), std::sin(th), 0, 0}
                                   : Quat{0, 0, std::cos(th), std::sin(th)};
        }
    g->s3_ = std::move(s3);
    g->finish_from_table(std::move(flat), 0, std::vector<Elt>{idx(1, 0), idx(0, 1)});
    return g;
}

GroupPtr FiniteGroup::polyhedral(Family kind) {
    switch (kind) {
        case Family::Tetrahedral:
            return from_perms(4, {Perm{1, 2, 0, 3}, Perm{1, 0, 3, 2}}, kind, 12);
        case Family::Octahedral:
            return from_perms(4, {Perm{1, 2, 3, 0}, Perm{1, 0, 2, 3}}, kind, 24);
        case Family::Icosahedral:
            return from_perms(5, {Perm{1, 2, 3, 4, 0}, Perm{1, 2, 0, 3, 4}}, kind, 60);
        default:
            throw ValidationError("polyhedral: kind must be tetrahedral, octahedral or icosahedral");
    }
}

GroupPtr FiniteGroup::central_product(const GroupPtr& g1, const GroupPtr& g2) {
    if (!g1->central_involution() || !g2->central_involution())
        throw ValidationError("central_product: factors need distinguished central involutions");
    const Elt z1 = *g1->central_involution(), z2 = *g2->central_involution();
    for (auto [gp, z] : {std::pair{g1.get(), z1}, std::pair{g2.get(), z2}}) {
        if (gp->elt_order(z) != 2) throw ValidationError("central_product: involution has wrong order");
        for (Elt h : gp->generators())
            if (gp->mul(h, z) != gp->mul(z, h))
                throw ValidationError("central_product: involution not central");
    }
    const int n1 = g1->order(), n2 = g2->order();
    check_cap(static_cast<long long>(n1) * n2 / 2, "central_product");

    auto g = alloc();
    g->family_ = Family::CentralProduct;
    g->param_ = (g1->family() == Family::BinaryDihedral && g2->family() == Family::BinaryDihedral &&
                 g1->family_param() == g2->family_param())
                    ? g1->family_param()
                    : 0;
    // classes {(a,b), (z1 a, z2 b)}; representative = lexicographically smaller pair
    std::vector<int> class_of(static_cast<size_t>(n1) * n2, -1);
    std::vector<std::pair<Elt, Elt>> reps;
    for (Elt a = 0; a < n1; ++a)
        for (Elt b = 0; b < n2; ++b) {
            size_t me = static_cast<size_t>(a) * n2 + b;
            if (class_of[me] >= 0) continue;
            Elt a2 = g1->mul(z1, a), b2 = g2->mul(z2, b);
            size_t other = static_cast<size_t>(a2) * n2 + b2;
            int c = static_cast<int>(reps.size());
            reps.emplace_back(a, b);
            class_of[me] = c;
            class_of[other] = c;
        }
    g->n_ = reps.size();
    g->degree_ = static_cast<int>(g->n_);
    std::vector<int> flat(g->n_ * g->n_);
    for (size_t i = 0; i < g->n_; ++i)
        for (size_t j = 0; j < g->n_; ++j) {
            Elt a = g1->mul(reps[i].first, reps[j].first);
            Elt b = g2->mul(reps[i].second, reps[j].second);
            flat[i * g->n_ + j] = class_of[static_cast<size_t>(a) * n2 + b];
        }
    std::vector<Perm> perms;
    attach_regular_perms(*g, perms, flat, g->n_);
    g->elements_ = std::move(perms);

    std::vector<Elt> gens;
    for (Elt h : g1->generators()) gens.push_back(class_of[static_cast<size_t>(h) * n2 + g2->id()]);
    for (Elt h : g2->generators()) gens.push_back(class_of[static_cast<size_t>(g1->id()) * n2 + h]);
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    Elt idc = class_of[static_cast<size_t>(g1->id()) * n2 + g2->id()];
    gens.erase(std::remove(gens.begin(), gens.end(), idc), gens.end());

    Elt zc = class_of[static_cast<size_t>(z1) * n2 + g2->id()];  // class of (z1, e) = (e, z2)
    if (zc != idc) g->central_ = zc;

    if (g1->s3_realization() && g2->s3_realization()) {
        std::vector<QuatPair> so4(g->n_);
        for (size_t i = 0; i < g->n_; ++i)
            so4[i] = QuatPair{(*g1->s3_realization())[reps[i].first],
                              (*g2->s3_realization())[reps[i].second]};
        g->so4_ = std::move(so4);
    }
    g->cp_reps_ = std::move(reps);
    g->cp_class_ = std::move(class_of);
    g->cp_n2_ = n2;
    g->finish_from_table(std::move(flat), idc, gens);
    return g;
}

GroupPtr FiniteGroup::direct_product(const GroupPtr& g1, const GroupPtr& g2) {
    const int n1 = g1->order(), n2 = g2->order();
    check_cap(static_cast<long long>(n1) * n2, "direct_product");
    auto g = alloc();
    g->family_ = Family::Generic;
    g->n_ = static_cast<size_t>(n1) * n2;
    g->degree_ = static_cast<int>(g->n_);
    std::vector<int> flat(g->n_ * g->n_);
    auto idx = [n2](Elt a, Elt b) { return a * n2 + b; };
    for (Elt a1 = 0; a1 < n1; ++a1)
        for (Elt b1 = 0; b1 < n2; ++b1)
            for (Elt a2 = 0; a2 < n1; ++a2)
                for (Elt b2 = 0; b2 < n2; ++b2)
                    flat[static_cast<size_t>(idx(a1, b1)) * g->n_ + idx(a2, b2)] =
                        idx(g1->mul(a1, a2), g2->mul(b1, b2));
    std::vector<Perm> perms;
    attach_regular_perms(*g, perms, flat, g->n_);
    g->elements_ = std::move(perms);
    std::vector<Elt> gens;
    for (Elt h : g1->generators()) gens.push_back(idx(h, g2->id()));
    for (Elt h : g2->generators()) gens.push_back(idx(g1->id(), h));
    g->finish_from_table(std::move(flat), idx(g1->id(), g2->id()), gens);
    return g;
}

GroupPtr FiniteGroup::quotient(const GroupPtr& src, const std::vector<Elt>& normal_sub) {
    std::vector<Elt> nsub = normal_sub;
    std::sort(nsub.begin(), nsub.end());
    if (src->close(nsub) != nsub) throw ValidationError("quotient: subset is not a subgroup");
    if (!src->is_normal(nsub)) throw ValidationError("quotient: subgroup is not normal");
    const int n = src->order();
    std::vector<int> coset_of(n, -1);
    std::vector<Elt> reps;
    for (Elt x = 0; x < n; ++x) {
        if (coset_of[x] >= 0) continue;
        int c = static_cast<int>(reps.size());
        reps.push_back(x);
        for (Elt h : nsub) coset_of[src->mul(x, h)] = c;
    }
    auto g = alloc();
    g->family_ = Family::Generic;
    g->n_ = reps.size();
    g->degree_ = static_cast<int>(g->n_);
    std::vector<int> flat(g->n_ * g->n_);
    for (size_t i = 0; i < g->n_; ++i)
        for (size_t j = 0; j < g->n_; ++j)
            flat[i * g->n_ + j] = coset_of[src->mul(reps[i], reps[j])];
    std::vector<Perm> perms;
    attach_regular_perms(*g, perms, flat, g->n_);
    g->elements_ = std::move(perms);
    std::vector<Elt> gens;
    for (Elt h : src->generators()) gens.push_back(coset_of[h]);
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    Elt idc = coset_of[src->id()];
    gens.erase(std::remove(gens.begin(), gens.end(), idc), gens.end());
    g->finish_from_table(std::move(flat), idc, gens);
    return g;
}

GroupPtr FiniteGroup::from_table(const std::vector<std::vector<int>>& table,
                                 std::optional<std::vector<Elt>> generators,
                                 std::optional<std::vector<QuatPair>> so4) {
    const size_t n = table.size();
    if (n == 0) throw ValidationError("table: empty");
    check_cap(static_cast<long long>(n), "from_table");
    std::vector<int> flat(n * n);
    for (size_t i = 0; i < n; ++i) {
        if (table[i].size() != n) throw ValidationError("table: not square");
        for (size_t j = 0; j < n; ++j) {
            int v = table[i][j];
            if (v < 0 || v >= static_cast<int>(n)) throw ValidationError("table: entry out of range");
            flat[i * n + j] = v;
        }
    }
    // identity
    int id = -1;
    for (size_t e = 0; e < n; ++e) {
        bool ok = true;
        for (size_t j = 0; j < n && ok; ++j) ok = flat[e * n + j] == static_cast<int>(j);
        for (size_t j = 0; j < n && ok; ++j) ok = flat[j * n + e] == static_cast<int>(j);
        if (ok) {
            id = static_cast<int>(e);
            break;
        }
    }
    if (id < 0) throw ValidationError("table: no identity element");
    // rows and columns are permutations (cancellation)
    std::vector<char> hit(n);
    for (size_t i = 0; i < n; ++i) {
        std::fill(hit.begin(), hit.end(), 0);
        for (size_t j = 0; j < n; ++j) hit[flat[i * n + j]] = 1;
        if (std::find(hit.begin(), hit.end(), 0) != hit.end())
            throw ValidationError("table: row " + std::to_string(i) + " is not a permutation");
        std::fill(hit.begin(), hit.end(), 0);
        for (size_t j = 0; j < n; ++j) hit[flat[j * n + i]] = 1;
        if (std::find(hit.begin(), hit.end(), 0) != hit.end())
            throw ValidationError("table: column " + std::to_string(i) + " is not a permutation");
    }
    // inverses
    for (size_t a = 0; a < n; ++a) {
        bool has = false;
        for (size_t b = 0; b < n && !has; ++b) has = flat[a * n + b] == id;
        if (!has) throw ValidationError("table: element without inverse");
    }

    auto g = alloc();
    g->family_ = Family::Generic;
    g->n_ = n;
    g->degree_ = static_cast<int>(n);
    std::vector<Perm> perms;
    attach_regular_perms(*g, perms, flat, n);
    g->elements_ = std::move(perms);
    if (so4) {
        if (so4->size() != n) throw ValidationError("table: realization size mismatch");
        g->so4_ = std::move(*so4);
    }
    // finish_from_table picks/validates generators; associativity check below
    // needs them, so run it afterwards.
    g->finish_from_table(std::move(flat), id, std::move(generators));

    // associativity: sigma_g(sigma_x) == sigma_{gx} for every generator g and
    // every x; by induction over left factorization this gives the full law.
    for (Elt gen : g->generators_)
        for (size_t x = 0; x < n; ++x)
            for (size_t j = 0; j < n; ++j)
                if (g->mul(gen, g->mul(static_cast<Elt>(x), static_cast<Elt>(j))) !=
                    g->mul(g->mul(gen, static_cast<Elt>(x)), static_cast<Elt>(j)))
                    throw ValidationError("table: not associative");
    // left reachability from the identity (the induction's other hypothesis)
    {
        std::vector<char> seen(n, 0);
        seen[g->id_] = 1;
        std::vector<Elt> order{g->id_};
        for (size_t head = 0; head < order.size(); ++head)
            for (Elt gen : g->generators_) {
                Elt y = g->mul(gen, order[head]);
                if (!seen[y]) {
                    seen[y] = 1;
                    order.push_back(y);
                }
            }
        if (order.size() != n) throw ValidationError("table: generators do not generate");
    }
    return g;
}

namespace {

void attach_regular_perms(FiniteGroup&, std::vector<Perm>& out, const std::vector<int>& flat,
                          size_t n) {
    out.resize(n);
    for (size_t a = 0; a < n; ++a) {
        Perm p(n);
        for (size_t j = 0; j < n; ++j) p[j] = static_cast<uint16_t>(flat[a * n + j]);
        out[a] = std::move(p);
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// queries

Elt FiniteGroup::power(Elt a, long long k) const {
    int ord = elt_order(a);
    long long r = k % ord;
    if (r < 0) r += ord;
    Elt x = id_;
    for (long long i = 0; i < r; ++i) x = mul(x, a);
    return x;
}

bool FiniteGroup::is_abelian() const {
    const int n = order();
    for (Elt a = 0; a < n; ++a)
        for (Elt b = a + 1; b < n; ++b)
            if (mul(a, b) != mul(b, a)) return false;
    return true;
}

std::map<int, int> FiniteGroup::order_histogram() const {
    std::map<int, int> h;
    for (int o : elt_order_) ++h[o];
    return h;
}

const std::vector<std::pair<Elt, Elt>>& FiniteGroup::cp_reps() const {
    if (cp_reps_.empty()) throw ValidationError("cp_reps: not a central product");
    return cp_reps_;
}

Elt FiniteGroup::cp_class(Elt a, Elt b) const {
    if (cp_class_.empty()) throw ValidationError("cp_class: not a central product");
    return cp_class_[static_cast<size_t>(a) * cp_n2_ + b];
}

std::optional<std::vector<Elt>> FiniteGroup::extend_hom(const FiniteGroup& target,
                                                        const std::vector<Elt>& gen_images) const {
    if (gen_images.size() != generators_.size())
        throw ValidationError("extend_hom: generator image count mismatch");
    std::vector<Elt> img(n_, -1);
    img[id_] = target.id();
    for (Elt x : bfs_order_) {
        if (x == id_) continue;
        const WordStep& w = word_[x];
        img[x] = target.mul(img[w.parent], gen_images[w.gen]);
    }
    const int n = order();
    for (Elt a = 0; a < n; ++a)
        for (Elt b = 0; b < n; ++b)
            if (img[mul(a, b)] != target.mul(img[a], img[b])) return std::nullopt;
    return img;
}

std::vector<Elt> FiniteGroup::close(std::vector<Elt> seed) const {
    std::vector<char> in(n_, 0);
    std::vector<Elt> members;
    auto add = [&](Elt x) {
        if (!in[x]) {
            in[x] = 1;
            members.push_back(x);
        }
    };
    add(id_);
    for (Elt s : seed) {
        if (s < 0 || s >= order()) throw ValidationError("close: element out of range");
        add(s);
    }
    // worklist: every element entering `members` gets a pass pairing it with
    // all members present by the end of that pass, both orders, so every pair
    // of final members is multiplied both ways
    for (size_t w = 0; w < members.size(); ++w) {
        Elt f = members[w];
        for (size_t j = 0; j < members.size(); ++j) {
            add(mul(f, members[j]));
            add(mul(members[j], f));
        }
    }
    std::sort(members.begin(), members.end());
    return members;
}

std::vector<Elt> FiniteGroup::conjugate_set(const std::vector<Elt>& sub, Elt g) const {
    std::vector<Elt> out;
    out.reserve(sub.size());
    for (Elt s : sub) out.push_back(conj(g, s));
    std::sort(out.begin(), out.end());
    return out;
}

bool FiniteGroup::is_normal(const std::vector<Elt>& sub) const {
    for (Elt g : generators_)
        if (conjugate_set(sub, g) != sub) return false;
    return true;
}

std::vector<Elt> FiniteGroup::normal_core(const std::vector<Elt>& sub) const {
    std::vector<Elt> k = sub;
    std::sort(k.begin(), k.end());
    bool changed = true;
    while (changed) {
        changed = false;
        for (Elt g : generators_) {
            std::vector<Elt> cj = conjugate_set(k, g);
            std::vector<Elt> meet;
            std::set_intersection(k.begin(), k.end(), cj.begin(), cj.end(),
                                  std::back_inserter(meet));
            if (meet.size() != k.size()) {
                k = std::move(meet);
                changed = true;
            }
        }
    }
    return k;
}

std::vector<Elt> FiniteGroup::center() const {
    std::vector<Elt> z;
    for (Elt a = 0; a < order(); ++a) {
        bool c = true;
        for (Elt g : generators_)
            if (mul(a, g) != mul(g, a)) {
                c = false;
                break;
            }
        if (c) z.push_back(a);
    }
    return z;
}

const std::vector<std::vector<int>>& FiniteGroup::full_table() const {
    if (table_2d_.empty()) {
        table_2d_.resize(n_);
        for (size_t i = 0; i < n_; ++i)
            table_2d_[i] = std::vector<int>(table_.begin() + i * n_, table_.begin() + (i + 1) * n_);
    }
    return table_2d_;
}

std::vector<int> generator_word(const FiniteGroup& g, Elt a) {
    std::vector<int> w;
    while (a != g.id_) {
        const FiniteGroup::WordStep& s = g.word_[a];
        w.push_back(s.gen);
        a = s.parent;
    }
    std::reverse(w.begin(), w.end());
    return w;
}

// ---------------------------------------------------------------------------
// homomorphisms

std::vector<Elt> GroupHom::image_subgroup() const {
    std::vector<Elt> s(images.begin(), images.end());
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

bool GroupHom::injective() const {
    return image_subgroup().size() == images.size();
}

GroupHom GroupHom::build(GroupPtr domain, GroupPtr codomain, std::vector<Elt> gen_images,
                         bool require_injective) {
    auto img = domain->extend_hom(*codomain, gen_images);
    if (!img) throw ValidationError("not a homomorphism: generator images violate relations");
    GroupHom h{std::move(domain), std::move(codomain), std::move(gen_images), std::move(*img)};
    if (require_injective && !h.injective())
        throw ValidationError("homomorphism is not injective");
    return h;
}

GroupHom GroupHom::identity(const GroupPtr& g) {
    std::vector<Elt> imgs(g->order());
    for (Elt a = 0; a < g->order(); ++a) imgs[a] = a;
    return GroupHom{g, g, g->generators(), std::move(imgs)};
}

std::vector<Elt> GroupHom::preimage(const std::vector<Elt>& sub) const {
    std::vector<Elt> sorted = sub;
    std::sort(sorted.begin(), sorted.end());
    std::vector<Elt> out;
    for (Elt h = 0; h < domain->order(); ++h)
        if (std::binary_search(sorted.begin(), sorted.end(), images[h])) out.push_back(h);
    return out;
}

std::vector<Elt> GroupHom::map_set(const std::vector<Elt>& sub) const {
    std::vector<Elt> out;
    out.reserve(sub.size());
    for (Elt h : sub) out.push_back(images[h]);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

// Backtracking enumeration of injective homs A -> G over generator images,
// extending the partial map by subgroup closure at each step. Candidates are
// tried in ascending element order, so results come out in lexicographic
// order of the generator-image tuples.
struct MonoSearch {
    const FiniteGroup& a;
    const FiniteGroup& g;
    int limit;
    std::vector<GroupHom>* out;
    GroupPtr aptr, gptr;

    std::vector<Elt> img;        // domain elt -> image or -1
    std::vector<char> used;      // image elements taken
    std::vector<Elt> dom;        // assigned domain elements
    std::vector<Elt> chosen;     // generator images so far

    bool run() {
        img.assign(a.order(), -1);
        used.assign(g.order(), 0);
        img[a.id()] = g.id();
        used[g.id()] = 1;
        dom = {a.id()};
        return dfs(0);
    }

    // extend img with x -> y plus closure; returns added domain elements for
    // rollback, or nullopt on conflict
    std::optional<std::vector<Elt>> extend(Elt x, Elt y) {
        std::vector<Elt> added;
        auto rollback = [&]() {
            for (Elt d : added) {
                used[img[d]] = 0;
                img[d] = -1;
                dom.pop_back();
            }
        };
        auto assign = [&](Elt d, Elt v) -> bool {
            if (img[d] >= 0) return img[d] == v;
            if (used[v]) return false;
            img[d] = v;
            used[v] = 1;
            dom.push_back(d);
            added.push_back(d);
            return true;
        };
        if (!assign(x, y)) {
            rollback();
            return std::nullopt;
        }
        // worklist over pairs involving fresh elements
        for (size_t fi = dom.size() - added.size(); fi < dom.size(); ++fi) {
            Elt f = dom[fi];
            for (size_t di = 0; di < dom.size(); ++di) {
                Elt d = dom[di];
                if (!assign(a.mul(f, d), g.mul(img[f], img[d])) ||
                    !assign(a.mul(d, f), g.mul(img[d], img[f]))) {
                    rollback();
                    return std::nullopt;
                }
            }
        }
        return added;
    }

    void retract(const std::vector<Elt>& added) {
        for (auto it = added.rbegin(); it != added.rend(); ++it) {
            used[img[*it]] = 0;
            img[*it] = -1;
            dom.pop_back();
        }
    }

    bool dfs(size_t depth) {  // true = stop early (limit reached)
        const auto& gens = a.generators();
        if (depth == gens.size()) {
            if (static_cast<int>(dom.size()) != a.order()) return false;  // gens exhausted early
            std::vector<Elt> gi;
            for (Elt h : gens) gi.push_back(img[h]);
            out->push_back(GroupHom{aptr, gptr, std::move(gi), img});
            return limit > 0 && static_cast<int>(out->size()) >= limit;
        }
        Elt x = gens[depth];
        int want = a.elt_order(x);
        if (img[x] >= 0) return dfs(depth + 1);
        for (Elt y = 0; y < g.order(); ++y) {
            if (used[y] || g.elt_order(y) != want) continue;
            auto added = extend(x, y);
            if (!added) continue;
            if (dfs(depth + 1)) return true;
            retract(*added);
        }
        return false;
    }
};

std::vector<GroupHom> monos_impl(const GroupPtr& a, const GroupPtr& g, int limit) {
    std::vector<GroupHom> out;
    if (g->order() % a->order() != 0) return out;  // Lagrange
    if (a->order() == 1) {
        std::vector<Elt> imgs(1, g->id());
        out.push_back(GroupHom{a, g, {}, std::move(imgs)});
        return out;
    }
    MonoSearch s{*a, *g, limit, &out, a, g, {}, {}, {}, {}};
    s.run();
    return out;
}

}  // namespace

std::vector<GroupHom> enumerate_monomorphisms(const GroupPtr& a, const GroupPtr& g) {
    return monos_impl(a, g, 0);
}

// ---------------------------------------------------------------------------
// subgroups and classification

std::vector<SubgroupInfo> subgroup_lattice(const FiniteGroup& g, int order_cap) {
    if (g.order() > order_cap)
        throw ResourceError("subgroup_lattice: order " + std::to_string(g.order()) +
                            " exceeds cap " + std::to_string(order_cap));
    std::set<std::vector<Elt>> seen;
    std::vector<std::vector<Elt>> queue;
    std::vector<Elt> triv{g.id()};
    seen.insert(triv);
    queue.push_back(triv);
    for (size_t head = 0; head < queue.size(); ++head) {
        std::vector<Elt> h = queue[head];
        for (Elt a = 0; a < g.order(); ++a) {
            if (std::binary_search(h.begin(), h.end(), a)) continue;
            std::vector<Elt> seed = h;
            seed.push_back(a);
            std::vector<Elt> k = g.close(std::move(seed));
            if (seen.insert(k).second) {
                queue.push_back(std::move(k));
                if (seen.size() > 200000)
                    throw ResourceError("subgroup_lattice: too many subgroups");
            }
        }
    }
    std::vector<SubgroupInfo> out;
    out.reserve(seen.size());
    for (const auto& s : seen) out.push_back(SubgroupInfo{s, g.is_normal(s)});
    std::sort(out.begin(), out.end(), [](const SubgroupInfo& x, const SubgroupInfo& y) {
        if (x.elements.size() != y.elements.size()) return x.elements.size() < y.elements.size();
        return x.elements < y.elements;
    });
    return out;
}

std::string So3Class::describe() const {
    switch (kind) {
        case CyclicK: return "Z_" + std::to_string(order);
        case DihedralK: return "D_" + std::to_string(order);
        case TetrahedralK: return "tetrahedral";
        case OctahedralK: return "octahedral";
        case IcosahedralK: return "icosahedral";
        case NotRealizable: return "not a subgroup of SO(3)";
    }
    return "?";
}

So3Class classify_so3_subgroup(const FiniteGroup& g) {
    const int n = g.order();
    for (Elt a = 0; a < n; ++a)
        if (g.elt_order(a) == n) return So3Class{So3Class::CyclicK, n};
    if (n % 2 == 0 && n >= 4 && is_isomorphic(g, *FiniteGroup::dihedral(n / 2)))
        return So3Class{So3Class::DihedralK, n};
    if (n == 12 && is_isomorphic(g, *FiniteGroup::polyhedral(Family::Tetrahedral)))
        return So3Class{So3Class::TetrahedralK, 12};
    if (n == 24 && is_isomorphic(g, *FiniteGroup::polyhedral(Family::Octahedral)))
        return So3Class{So3Class::OctahedralK, 24};
    if (n == 60 && is_isomorphic(g, *FiniteGroup::polyhedral(Family::Icosahedral)))
        return So3Class{So3Class::IcosahedralK, 60};
    return So3Class{So3Class::NotRealizable, 0};
}

bool is_isomorphic(const FiniteGroup& a, const FiniteGroup& b) {
    if (a.order() != b.order()) return false;
    if (a.order_histogram() != b.order_histogram()) return false;
    // shared_ptr aliases with no-op deleters: mono machinery wants GroupPtrs
    GroupPtr pa(&a, [](const FiniteGroup*) {});
    GroupPtr pb(&b, [](const FiniteGroup*) {});
    return !monos_impl(pa, pb, 1).empty();
}

std::vector<long long> divisors_of(long long n) {
    std::vector<long long> lo, hi;
    for (long long d = 1; d * d <= n; ++d)
        if (n % d == 0) {
            lo.push_back(d);
            if (d != n / d) hi.push_back(n / d);
        }
    for (auto it = hi.rbegin(); it != hi.rend(); ++it) lo.push_back(*it);
    return lo;
}

}  // namespace handlecalc
