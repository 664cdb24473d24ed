#pragma once

#include <cstdint>
#include <vector>

#include "smlat/instance.hpp"
#include "smlat/rotation.hpp"

namespace smlat {

// Ground truth by exhaustion. Deliberately re-implements the stability
// predicates from the raw definitions instead of reusing the optimized
// scans, so bugs do not correlate with the fast path.
struct BruteForceReport {
    std::vector<Matching> stable;              // sorted canonically
    int lattice_min = -1;                      // index into stable
    int lattice_max = -1;
    std::vector<int> worker_card;              // |X_w|, constant across the stable set
    std::vector<int> firm_card;
    std::vector<std::vector<bool>> firm_geq;   // [i][j]: stable[i] >= stable[j] for every firm
    std::vector<std::vector<int>> meet;        // index tables over stable
    std::vector<std::vector<int>> join;
};

// Tests every edge subset; verifies on the way that the stable set forms a
// distributive lattice with the expected meet/join structure.
BruteForceReport brute_stable(const Instance& inst, int max_edges = 14);

struct PrecedenceReport {
    std::vector<Rotation> rotations;           // catalog, first-seen order
    std::vector<std::vector<bool>> precedes;   // [i][j]: i earlier than j in every full route
    long long route_count = 0;
};

// Enumerates every full route and reads the precedence relation off them
// literally. Factorial in the number of rotations; refuses more than the cap.
PrecedenceReport brute_precedence(const Instance& inst, int max_rotations = 8);

} // namespace smlat
