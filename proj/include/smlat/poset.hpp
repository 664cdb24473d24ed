#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "smlat/instance.hpp"
#include "smlat/rotation.hpp"

namespace smlat {

// Set of rotation ids, downward closed under the precedence order.
using Ideal = BitSet;

// Chain of stable matchings linked by rotation applications.
struct Route {
    std::vector<Matching> matchings; // X0 ... XN, strictly improving for firms
    std::vector<Rotation> rotations; // L1 ... LN with X_i = (X_{i-1} - L_i^-) + L_i^+
};

// All rotations of the instance with the Hasse diagram of their precedence
// order. Rotation ids follow a fixed topological order (first appearance
// along the canonical full route).
struct RotationPoset {
    std::vector<Rotation> rotations;
    std::vector<std::pair<int, int>> hasse; // immediate precedences (pred, succ), sorted
    Matching xmin;
    Matching xmax;

    int size() const { return (int)rotations.size(); }

    // immediate predecessors per rotation
    std::vector<BitSet> hasse_preds() const;
    // strict successors per rotation under the full precedence order
    std::vector<BitSet> transitive_closure() const;
    bool is_ideal(const Ideal& members) const;
};

// Route from the minimum to the maximum applying, at each step, the
// applicable rotation with the lowest canonical id. The rotation SET is
// independent of the application order.
Route full_route(const Instance& inst);

// Builds the rotation set and its Hasse diagram: for each rotation R, a
// greedy route exhausts everything except R, then R is applied; what
// becomes applicable right after R is exactly its set of immediate
// successors. Per-worker scan positions persist across the steps of each
// such run.
RotationPoset build_poset(const Instance& inst);

// Ideal of the rotations applied on any route from the minimum to x.
Ideal omega(const Instance& inst, const RotationPoset& poset, const Matching& x);

// Inverse of omega: the matching reached by applying an ideal.
Matching matching_of(const Instance& inst, const RotationPoset& poset, const Ideal& members);

std::vector<Ideal> enumerate_ideals(const RotationPoset& poset, std::size_t cap = 1u << 20);

// All stable matchings via downset enumeration, sorted canonically.
std::vector<Matching> enumerate_stable(const Instance& inst, const RotationPoset& poset,
                                       std::size_t cap = 1u << 20);

// Lattice meet and join of two stable matchings through their ideals.
std::pair<Matching, Matching> meet_join(const Instance& inst, const RotationPoset& poset,
                                        const Matching& x, const Matching& y);

} // namespace smlat
