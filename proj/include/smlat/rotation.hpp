#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "smlat/instance.hpp"

namespace smlat {

// (a, b) at a firm f: a enters f, b leaves it, and C_f(X_f + a) = X_f + a - b.
struct Tandem {
    EdgeId a;
    EdgeId b;
    int firm;
};

// D(X): worker-admissible edges directed W->F plus the displaced edges
// directed F->W, before cleaning.
struct AdmissibleGraph {
    Matching context;
    std::vector<std::optional<EdgeId>> w_admissible; // per worker
    std::vector<Tandem> tandems;                     // in worker-index order
};

// Gamma(X): the cleaned graph. Every surviving worker has exactly one
// leaving and one entering edge; tandems partition the edges at each firm.
struct ActiveGraph {
    Matching context;
    std::vector<std::optional<EdgeId>> w_admissible;
    std::vector<Tandem> tandems;
    BitSet w_active; // surviving worker-admissible edges
    BitSet f_active; // surviving displaced edges
};

// Edge-simple alternating cycle; applying it to its source matching yields
// an immediate successor in the lattice. Identified by the (plus, minus)
// pair, which stays stable while the rotation remains unapplied.
struct Rotation {
    BitSet plus;                // W-active edges, entering the matching
    BitSet minus;               // F-active edges, leaving the matching
    std::vector<EdgeId> cycle;  // alternating [a0, b0, a1, b1, ...], lowest worker first

    bool same_key(const Rotation& o) const { return plus == o.plus && minus == o.minus; }
};

enum class ScanOrder { forward, reverse };

// Most preferred edge below x_w that its firm finds interesting; x_w is the
// least preferred matched edge of a fully filled worker.
std::optional<EdgeId> w_admissible_edge(const Instance& inst, const Matching& x, int w);

// Validates stability of x.
AdmissibleGraph build_admissible_graph(const Instance& inst, const Matching& x);

// Deletes worker-admissible edges whose worker has no entering edge,
// cascading through orphaned tandem partners, until the fixpoint. The
// fixpoint is scan-order independent.
ActiveGraph clean(const Instance& inst, const AdmissibleGraph& d,
                  ScanOrder order = ScanOrder::forward);

std::vector<Rotation> extract_rotations(const Instance& inst, const ActiveGraph& gamma);

// Full pipeline without the stability check; callers guarantee x stable.
std::vector<Rotation> rotations_of(const Instance& inst, const Matching& x);

// (x - minus) + plus; validates that the rotation belongs to Lscr(x).
Matching apply_rotation(const Instance& inst, const Matching& x, const Rotation& r);

// Stateful stepper along a route. Keeps per-worker scan positions so that
// repeated applicable-set queries examine each preference entry at most
// once per run, re-querying a firm only when its matched set changed.
class RouteEngine {
public:
    RouteEngine(const Instance& inst, Matching start);

    const Matching& current() const { return x_; }
    // Lscr(current) in canonical order (cycles start at their lowest worker,
    // rotations ordered by that worker)
    const std::vector<Rotation>& applicable();
    void apply(const Rotation& r);

private:
    void refresh();

    struct Memo {
        EdgeId a;
        std::optional<EdgeId> b;    // displaced partner, absent for free-capacity acceptance
        std::uint64_t firm_version; // version of the firm's matched set when validated
    };

    const Instance* inst_;
    Matching x_;
    std::vector<int> ptr_; // per worker: next pref rank to examine
    std::vector<std::optional<Memo>> memo_;
    std::vector<std::uint64_t> firm_version_;
    std::vector<bool> fully_filled_;
    std::vector<Rotation> lscr_;
    bool dirty_ = true;
};

} // namespace smlat
