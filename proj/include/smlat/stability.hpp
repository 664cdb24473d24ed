#pragma once

#include <vector>

#include "smlat/instance.hpp"

namespace smlat {

// Outcome of comparing two acceptable sets at one vertex under its choice
// function; the relation is a partial order, so incomparable is a normal
// result, not an error.
enum class VertexPreference { first_preferred, second_preferred, equal, incomparable };

struct DeficitReport {
    std::vector<int> deficit;      // workers with |X_w| < q(w)
    std::vector<int> fully_filled; // workers with |X_w| = q(w)
};

// C_v(Z) = Z
bool acceptable_at(const Instance& inst, Vertex v, const BitSet& z);

// all restrictions acceptable
bool is_acceptable(const Instance& inst, const Matching& x);

// e in C_v(Z + e); requires e in E_v - Z
bool is_interesting(const Instance& inst, Vertex v, const BitSet& z, EdgeId e);

// all edges of E - X interesting for both endpoints; X must be acceptable
BitSet blocking_edges(const Instance& inst, const Matching& x);

// acceptable and unblocked; total predicate (unacceptable input gives false)
bool is_stable(const Instance& inst, const Matching& x);

VertexPreference prefer_at(const Instance& inst, Vertex v, const BitSet& z, const BitSet& z2);

// componentwise aggregation over one side
VertexPreference prefer_global(const Instance& inst, const Matching& x, const Matching& y,
                               Vertex::Side side);

// least upper bound at a vertex, C_v(Z + Z')
BitSet join_at(const Instance& inst, Vertex v, const BitSet& z, const BitSet& z2);

DeficitReport deficit_report(const Instance& inst, const Matching& x);

} // namespace smlat
