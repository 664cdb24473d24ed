#pragma once

#include <utility>
#include <vector>

#include "smlat/instance.hpp"

namespace smlat {

// One round of the shrinking-pool iteration: workers pick X from the pool B,
// firms keep Y from X; edges picked but not kept leave the pool.
struct IterationRound {
    Matching b;
    Matching x;
    Matching y;
};

struct IterationTrace {
    std::vector<IterationRound> rounds;
    Matching result;
};

// Worker-optimal (firm-pessimal) stable matching; the lattice minimum.
// Terminates in at most |E| rounds since the pool shrinks strictly.
std::pair<Matching, IterationTrace> compute_xmin(const Instance& inst);

// Lattice maximum, obtained by exhausting rotations from the minimum.
Matching compute_xmax(const Instance& inst);

} // namespace smlat
