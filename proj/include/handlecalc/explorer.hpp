#pragma once

#include "handlecalc/covering.hpp"
#include "handlecalc/instance.hpp"

#include <optional>
#include <string>
#include <vector>

namespace handlecalc {

/// One proof inequality evaluated on a concrete instance, exact on both sides.
struct BoundInequality {
    std::string label;
    Rational lhs;
    std::string relation;  // "<=" or ">="
    Rational rhs;
    bool holds = false;
};

/// Which branch of the genus-bound case analysis fired, and every inequality
/// of that branch with its verdict.
struct BoundCertificate {
    std::string instance;  // canonical digest when derived from a document
    long long genus = 0;
    long long order = 0;
    // single-edge | isolated-vertex | interior-edge | dihedral-chain |
    // outside-proof-cases | inapplicable
    std::string applicable_case;
    std::vector<BoundInequality> inequalities;
    bool all_hold = false;
    std::vector<std::string> notes;
};

/// Three cyclic vertices in a path, edge groups of coprime orders x and x+1,
/// acting through the cyclic group of order x(x+1). Genus 1 + (7x-3)/6, which
/// makes the order quadratic in the genus. Requires x odd and divisible by 3.
InstanceDocument example_cyclic_family(long long x);

/// Single edge joining a central product of two binary dihedral groups of
/// order 4n (vertex order 8n^2) to a dihedral-times-order-2 vertex of order
/// 4n, over a dihedral edge group of order 2n embedded diagonally on one side.
/// Genus 2n, so the order is exactly twice the genus squared. Requires n >= 2.
InstanceDocument example_so4_family(long long n);

/// Evaluates every case inequality of the genus bound that applies to the
/// instance's shape. Non-faithful instances come back marked inapplicable;
/// shapes the case analysis does not cover are reported as such, never
/// guessed.
BoundCertificate certify_bounds(const GraphOfGroups& g, const Surjection& s);

/// certify_bounds on a document's own surjection data, with the digest filled.
BoundCertificate certify_document(const InstanceDocument& doc);

struct SearchCaps {
    int max_vertices = 4;
    int max_edges = 5;
    long long scan_start = 0;  // 0: start at the theorem bound for the class
    long long scan_floor = 1;
    long long surjection_limit = 64;
    // Skip a candidate when the stable-letter assignment space exceeds this.
    long long stable_letter_budget = 20'000'000;
    std::string checkpoint_path;  // empty: no checkpointing
};

/// One faithful instance discovered by the search.
struct SearchFind {
    long long order = 0;
    std::string digest;
    bool single_edge = false;
    InstanceDocument instance;
    BoundCertificate certificate;
};

struct SearchReport {
    long long genus = 0;
    std::string klass;  // "cyclic" | "any"
    SearchCaps caps;
    long long bound = 0;         // theorem bound for this genus and class
    long long scanned_from = 0;  // first candidate order examined
    long long scanned_to = 0;    // last candidate order examined
    long long best_order = 0;    // 0: nothing found
    std::optional<InstanceDocument> witness;  // smallest canonical form at best_order
    std::vector<SearchFind> found;            // every faithful instance at best_order
    bool complete = false;
    long long examined = 0;  // candidates that reached the surjection search
    std::vector<std::string> notes;
};

/// Descending sweep over candidate orders starting at the theorem bound (or
/// caps.scan_start): enumerates connected graph shapes within the caps,
/// divisor-lattice order assignments, and rotation-admissible cyclic vertex
/// groups; keeps candidates with a faithful verified surjection. The sweep
/// stops at the first order with a find. Deterministic for fixed caps.
SearchReport search_max_order(long long genus, const std::string& klass, SearchCaps caps = {});

}  // namespace handlecalc
