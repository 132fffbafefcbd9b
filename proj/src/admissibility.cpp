#include "handlecalc/admissibility.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace handlecalc {

namespace {

long long gcd3(long long a, long long b, long long c) {
    return std::gcd(std::gcd(std::llabs(a), std::llabs(b)), std::llabs(c));
}

void require_faithful(const CyclicRotationType& rt) {
    if (rt.m < 1) throw ValidationError("rotation type: order must be positive");
    if (gcd3(rt.s, rt.t, rt.m) != 1)
        throw InadmissibleError("rotation type (" + std::to_string(rt.m) + "," +
                                std::to_string(rt.s) + "," + std::to_string(rt.t) +
                                "): gcd(s,t,m) != 1, the action is not faithful");
}

std::vector<Elt> cyclic_subgroup(long long m, long long order) {
    std::vector<Elt> sub;
    for (long long k = 0; k < m; k += m / order) sub.push_back(static_cast<Elt>(k));
    std::sort(sub.begin(), sub.end());
    return sub;
}

}  // namespace

std::vector<QuatPair> rotation_pairs(const CyclicRotationType& rt) {
    require_faithful(rt);
    // x -> q1^-1 x q2 rotates the circle through 1 by (beta - alpha) and the
    // circle through j by (alpha + beta); the choice below makes those 2*pi*s/m
    // and -2*pi*t/m per step of the generator.
    double alpha = -std::numbers::pi * static_cast<double>(rt.s + rt.t) / static_cast<double>(rt.m);
    double beta = std::numbers::pi * static_cast<double>(rt.s - rt.t) / static_cast<double>(rt.m);
    std::vector<QuatPair> pairs;
    pairs.reserve(rt.m);
    for (long long k = 0; k < rt.m; ++k) {
        double kk = static_cast<double>(k);
        pairs.push_back(QuatPair{Quat::from_angle(kk * alpha), Quat::from_angle(kk * beta)});
    }
    return pairs;
}

GroupPtr cyclic_with_rotation(const CyclicRotationType& rt) {
    GroupPtr plain = FiniteGroup::cyclic(rt.m);
    std::vector<Elt> gens = plain->generators();
    return FiniteGroup::from_table(plain->full_table(), gens, rotation_pairs(rt));
}

StabilizerMenu cyclic_stabilizer_menu(const CyclicRotationType& rt) {
    require_faithful(rt);
    long long a = std::gcd(rt.m, std::llabs(rt.s));
    long long b = std::gcd(rt.m, std::llabs(rt.t));
    StabilizerMenu menu;
    if (a > 1)
        menu.entries.push_back(MenuEntry{cyclic_subgroup(rt.m, a), MenuEntry::Circle,
                                         Quat{1, 0, 0, 0}, false});
    if (b > 1)
        menu.entries.push_back(MenuEntry{cyclic_subgroup(rt.m, b), MenuEntry::Circle,
                                         Quat{0, 0, 1, 0}, false});
    menu.entries.push_back(MenuEntry{{0}, MenuEntry::Free, std::nullopt, false});
    return menu;
}

bool verify_so4_certificate(const FiniteGroup& g, const Quat& point,
                            const std::vector<Elt>& claimed) {
    const auto& pairs = g.so4_realization();
    if (!pairs) throw ValidationError("no quaternion realization attached to this group");
    if (std::abs(point.norm() - 1.0) > kGeomTolerance)
        throw ValidationError("certificate point is not on the unit sphere");
    std::vector<Elt> fix;
    for (Elt a = 0; a < g.order(); ++a)
        if ((*pairs)[a].apply(point).dist(point) < kGeomTolerance) fix.push_back(a);
    std::vector<Elt> sorted_claim = claimed;
    std::sort(sorted_claim.begin(), sorted_claim.end());
    return fix == sorted_claim && g.close(fix) == fix;
}

namespace {

std::vector<Elt> sorted_intersection(const std::vector<Elt>& a, const std::vector<Elt>& b) {
    std::vector<Elt> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool conjugate_in(const FiniteGroup& g, const std::vector<Elt>& sub, const std::vector<Elt>& to) {
    if (sub.size() != to.size()) return false;
    for (Elt x = 0; x < g.order(); ++x)
        if (g.conjugate_set(sub, x) == to) return true;
    return false;
}

}  // namespace

AdmissibilityReport check_attachments(const GraphOfGroups& g,
                                      const std::map<std::string, StabilizerMenu>& menus) {
    AdmissibilityReport report;
    for (const auto& [vid, v] : g.vertices()) {
        auto mit = menus.find(vid);
        if (mit == menus.end()) throw ValidationError("no stabilizer menu for vertex " + vid);
        const StabilizerMenu& menu = mit->second;
        const FiniteGroup& gv = *v.group;

        for (size_t i = 0; i < menu.entries.size(); ++i) {
            const MenuEntry& e = menu.entries[i];
            std::string tag = "vertex " + vid + " menu entry " + std::to_string(i);
            std::vector<Elt> sub = e.subgroup;
            std::sort(sub.begin(), sub.end());
            bool is_subgroup = !sub.empty() && sub.front() == gv.id() &&
                               sub.back() < gv.order() && gv.close(sub) == sub;
            if (!is_subgroup) {
                report.violations.push_back(tag + ": not a subgroup of the vertex group");
                continue;
            }
            if (e.witness) {
                if (gv.so4_realization()) {
                    if (!verify_so4_certificate(gv, *e.witness, sub))
                        report.violations.push_back(tag +
                                                    ": witness point has a different stabilizer");
                    else if (e.declared)
                        report.notes.push_back(tag + ": declared, witness-checked");
                } else if (e.declared) {
                    report.notes.push_back(tag + ": declared, no realization to check against");
                }
            } else if (e.declared) {
                report.notes.push_back(tag + ": declared, no witness");
            }
        }
        for (size_t i = 0; i < menu.entries.size(); ++i)
            for (size_t j = i + 1; j < menu.entries.size(); ++j) {
                if (menu.entries[i].kind != MenuEntry::Circle ||
                    menu.entries[j].kind != MenuEntry::Circle)
                    continue;
                if (sorted_intersection(menu.entries[i].subgroup, menu.entries[j].subgroup).size() >
                    1)
                    report.violations.push_back(
                        "vertex " + vid + ": circle entries " + std::to_string(i) + " and " +
                        std::to_string(j) + " share a nontrivial subgroup");
            }
    }

    // isolated points accept one end; circles and free orbits any number
    std::map<std::pair<std::string, int>, int> used;
    auto attach = [&](const std::string& eid, const std::string& vid, bool alpha_end,
                      const GroupHom& hom) {
        const FiniteGroup& gv = *g.vertex(vid).group;
        const StabilizerMenu& menu = menus.at(vid);
        std::vector<Elt> img = hom.image_subgroup();
        AttachmentCheck chk{eid, vid, alpha_end, false, -1};
        int full_match = -1;
        for (size_t i = 0; i < menu.entries.size(); ++i) {
            if (!conjugate_in(gv, menu.entries[i].subgroup, img)) continue;
            bool unlimited = menu.entries[i].kind != MenuEntry::IsolatedPoint;
            if (unlimited || used[{vid, static_cast<int>(i)}] == 0) {
                chk.matched = true;
                chk.entry = static_cast<int>(i);
                ++used[{vid, chk.entry}];
                break;
            }
            full_match = static_cast<int>(i);
        }
        if (!chk.matched) {
            std::string end = alpha_end ? "alpha" : "omega";
            if (full_match >= 0)
                report.violations.push_back("edge " + eid + " (" + end + " end): isolated point " +
                                            std::to_string(full_match) + " at vertex " + vid +
                                            " already has an attachment");
            else
                report.violations.push_back("edge " + eid + " (" + end +
                                            " end): no stabilizer of vertex " + vid +
                                            " matches the edge group image");
        }
        report.ends.push_back(chk);
    };
    for (const auto& [eid, e] : g.edges()) {
        attach(eid, e.from, true, e.alpha);
        attach(eid, e.to, false, e.omega);
    }
    report.ok = report.violations.empty();
    return report;
}

So3EdgeReport check_so3_edge_groups(const GraphOfGroups& g) {
    So3EdgeReport report;
    for (const auto& [eid, e] : g.edges()) {
        So3Class cls = classify_so3_subgroup(*e.group);
        if (!cls.realizable()) {
            report.ok = false;
            report.violations.push_back("edge " + eid + ": " + cls.describe() +
                                        " is not a rotation group of the sphere");
        }
        report.classes.emplace(eid, cls);
    }
    return report;
}

}  // namespace handlecalc
