#include "smlat/rotation.hpp"

#include <algorithm>
#include <deque>

#include "smlat/errors.hpp"
#include "smlat/stability.hpp"

namespace smlat {

namespace {

// least preferred matched edge of a fully filled worker, or -1
EdgeId last_matched_edge(const Instance& inst, const Matching& x, int w) {
    const WorkerSpec& spec = inst.worker(w);
    const BitSet xw = x & spec.incident;
    if (xw.count() != spec.quota) return -1;
    EdgeId worst = -1;
    int worst_rank = -1;
    xw.for_each([&](int e) {
        if (spec.rank_of[e] > worst_rank) {
            worst_rank = spec.rank_of[e];
            worst = e;
        }
    });
    return worst;
}

// C_f(X_f + a) classified per the interesting-edge characterization:
// returns {interesting, displaced partner or nullopt}
std::pair<bool, std::optional<EdgeId>> probe_firm(const Instance& inst, const Matching& x,
                                                  EdgeId a) {
    const int f = inst.edge_firm(a);
    BitSet xf = x & inst.firm(f).incident;
    BitSet arg = xf;
    arg.set(a);
    BitSet res = inst.firm(f).cf.choose(arg);
    if (!res.test(a)) return {false, std::nullopt};
    if (res == arg) return {true, std::nullopt};
    BitSet dropped = arg - res;
    if (dropped.count() != 1 || !res.is_subset_of(arg))
        throw InternalError(
            "firm choice on X_f + a is neither X_f + a nor (X_f - b) + a; "
            "the choice function violates the assumed axioms");
    return {true, dropped.next(0)};
}

struct Survivors {
    std::vector<std::optional<EdgeId>> w_admissible;
    std::vector<Tandem> tandems;
};

// Worklist cleaning over (a_w, tandem) claims. Deletions only cascade, so
// the fixpoint does not depend on the seeding order.
Survivors clean_core(const Instance& inst, const std::vector<std::optional<EdgeId>>& w_adm,
                     const std::vector<Tandem>& tandems, ScanOrder order) {
    const int W = inst.num_workers();
    const int E = inst.num_edges();

    std::vector<bool> alive(W, false);
    for (int w = 0; w < W; ++w) alive[w] = w_adm[w].has_value();

    std::vector<int> tandem_count(E, 0); // live tandems per displaced edge
    std::vector<int> tandem_of_worker(W, -1);
    for (int t = 0; t < (int)tandems.size(); ++t) {
        tandem_of_worker[inst.edge_worker(tandems[t].a)] = t;
        ++tandem_count[tandems[t].b];
    }

    std::vector<int> in_count(W, 0);
    for (const Tandem& t : tandems) ++in_count[inst.edge_worker(t.b)];

    std::deque<int> queue;
    auto seed = [&](int w) {
        if (alive[w] && in_count[w] == 0) queue.push_back(w);
    };
    if (order == ScanOrder::forward)
        for (int w = 0; w < W; ++w) seed(w);
    else
        for (int w = W - 1; w >= 0; --w) seed(w);

    std::vector<bool> tandem_alive(tandems.size(), true);
    while (!queue.empty()) {
        int w = queue.front();
        queue.pop_front();
        if (!alive[w] || in_count[w] > 0) continue;
        alive[w] = false;
        int t = tandem_of_worker[w];
        if (t < 0 || !tandem_alive[t]) continue;
        tandem_alive[t] = false;
        EdgeId b = tandems[t].b;
        if (--tandem_count[b] == 0) {
            int wb = inst.edge_worker(b);
            if (--in_count[wb] == 0 && alive[wb]) queue.push_back(wb);
        }
    }

    Survivors out;
    out.w_admissible.assign(W, std::nullopt);
    for (int w = 0; w < W; ++w)
        if (alive[w]) out.w_admissible[w] = w_adm[w];
    for (int t = 0; t < (int)tandems.size(); ++t)
        if (tandem_alive[t]) out.tandems.push_back(tandems[t]);

    // balance: survivors form a perfect tandem structure
    std::vector<int> live_in(W, 0);
    std::vector<int> partner_of_a(E, -1);
    std::vector<int> partners_of_b(E, 0);
    for (const Tandem& t : out.tandems) {
        ++live_in[inst.edge_worker(t.b)];
        partner_of_a[t.a] = t.b;
        ++partners_of_b[t.b];
    }
    for (int w = 0; w < W; ++w) {
        if (out.w_admissible[w].has_value()) {
            if (live_in[w] != 1)
                throw InternalError("cleaning fixpoint has a worker (index " + std::to_string(w) +
                                    ") with " + std::to_string(live_in[w]) +
                                    " entering edges instead of one");
            if (partner_of_a[*out.w_admissible[w]] < 0)
                throw InternalError("cleaning fixpoint kept a worker-admissible edge without a tandem");
        } else if (live_in[w] != 0) {
            throw InternalError("cleaning fixpoint has an entering edge at a worker with no leaving edge");
        }
    }
    for (const Tandem& t : out.tandems)
        if (partners_of_b[t.b] != 1)
            throw InternalError("cleaning fixpoint has tandems sharing a displaced edge");
    return out;
}

std::vector<Rotation> extract_core(const Instance& inst, const Survivors& s) {
    const int W = inst.num_workers();
    const int E = inst.num_edges();
    std::vector<EdgeId> partner_of_a(E, -1);
    for (const Tandem& t : s.tandems) partner_of_a[t.a] = t.b;

    std::vector<Rotation> rotations;
    std::vector<bool> visited(W, false);
    for (int start = 0; start < W; ++start) {
        if (visited[start] || !s.w_admissible[start].has_value()) continue;
        Rotation rot{BitSet(E), BitSet(E), {}};
        int w = start;
        do {
            if (visited[w])
                throw InternalError("rotation walk revisited a worker before closing its cycle");
            visited[w] = true;
            EdgeId a = *s.w_admissible[w];
            EdgeId b = partner_of_a[a];
            rot.plus.set(a);
            rot.minus.set(b);
            rot.cycle.push_back(a);
            rot.cycle.push_back(b);
            w = inst.edge_worker(b);
        } while (w != start);
        if (rot.plus.intersects(rot.minus))
            throw InternalError("rotation has an edge on both sides");
        rotations.push_back(std::move(rot));
    }
    return rotations;
}

} // namespace

std::optional<EdgeId> w_admissible_edge(const Instance& inst, const Matching& x, int w) {
    EdgeId xw = last_matched_edge(inst, x, w);
    if (xw < 0) return std::nullopt; // deficit workers have no admissible edge
    const WorkerSpec& spec = inst.worker(w);
    for (int r = spec.rank_of[xw] + 1; r < (int)spec.pref.size(); ++r) {
        EdgeId e = spec.pref[r];
        if (probe_firm(inst, x, e).first) return e;
    }
    return std::nullopt;
}

AdmissibleGraph build_admissible_graph(const Instance& inst, const Matching& x) {
    if (!is_stable(inst, x))
        throw DomainError("build_admissible_graph: matching is not stable");
    AdmissibleGraph d;
    d.context = x;
    d.w_admissible.assign(inst.num_workers(), std::nullopt);
    for (int w = 0; w < inst.num_workers(); ++w) {
        auto a = w_admissible_edge(inst, x, w);
        if (!a) continue;
        d.w_admissible[w] = a;
        auto [interesting, partner] = probe_firm(inst, x, *a);
        if (!interesting) throw InternalError("admissible edge stopped being interesting");
        if (partner) d.tandems.push_back(Tandem{*a, *partner, inst.edge_firm(*a)});
    }
    return d;
}

ActiveGraph clean(const Instance& inst, const AdmissibleGraph& d, ScanOrder order) {
    Survivors s = clean_core(inst, d.w_admissible, d.tandems, order);
    ActiveGraph g;
    g.context = d.context;
    g.w_admissible = s.w_admissible;
    g.tandems = s.tandems;
    g.w_active = BitSet(inst.num_edges());
    g.f_active = BitSet(inst.num_edges());
    for (int w = 0; w < inst.num_workers(); ++w)
        if (g.w_admissible[w]) g.w_active.set(*g.w_admissible[w]);
    for (const Tandem& t : g.tandems) g.f_active.set(t.b);
    return g;
}

std::vector<Rotation> extract_rotations(const Instance& inst, const ActiveGraph& gamma) {
    Survivors s{gamma.w_admissible, gamma.tandems};
    return extract_core(inst, s);
}

std::vector<Rotation> rotations_of(const Instance& inst, const Matching& x) {
    std::vector<std::optional<EdgeId>> w_adm(inst.num_workers());
    std::vector<Tandem> tandems;
    for (int w = 0; w < inst.num_workers(); ++w) {
        auto a = w_admissible_edge(inst, x, w);
        if (!a) continue;
        w_adm[w] = a;
        auto [interesting, partner] = probe_firm(inst, x, *a);
        (void)interesting;
        if (partner) tandems.push_back(Tandem{*a, *partner, inst.edge_firm(*a)});
    }
    return extract_core(inst, clean_core(inst, w_adm, tandems, ScanOrder::forward));
}

Matching apply_rotation(const Instance& inst, const Matching& x, const Rotation& r) {
    if (!is_stable(inst, x)) throw DomainError("apply_rotation: matching is not stable");
    bool found = false;
    for (const Rotation& cand : rotations_of(inst, x))
        if (cand.same_key(r)) {
            found = true;
            break;
        }
    if (!found) throw DomainError("apply_rotation: not a rotation of the given matching");
    return (x - r.minus) | r.plus;
}

RouteEngine::RouteEngine(const Instance& inst, Matching start)
    : inst_(&inst), x_(std::move(start)) {
    const int W = inst.num_workers();
    ptr_.assign(W, 0);
    memo_.assign(W, std::nullopt);
    firm_version_.assign(inst.num_firms(), 0);
    fully_filled_.assign(W, false);
    for (int w = 0; w < W; ++w) {
        EdgeId xw = last_matched_edge(inst, x_, w);
        fully_filled_[w] = xw >= 0;
        ptr_[w] = xw >= 0 ? inst.worker(w).rank_of[xw] + 1 : 0;
    }
}

void RouteEngine::refresh() {
    const Instance& inst = *inst_;
    const int W = inst.num_workers();
    std::vector<std::optional<EdgeId>> w_adm(W);
    std::vector<Tandem> tandems;
    for (int w = 0; w < W; ++w) {
        if (!fully_filled_[w]) continue;
        const WorkerSpec& spec = inst.worker(w);
        if (memo_[w]) {
            int f = inst.edge_firm(memo_[w]->a);
            if (memo_[w]->firm_version != firm_version_[f]) {
                // the firm's matched set changed; revalidate the memo edge
                auto [interesting, partner] = probe_firm(inst, x_, memo_[w]->a);
                if (interesting) {
                    memo_[w] = Memo{memo_[w]->a, partner, firm_version_[f]};
                } else {
                    // rejected against a better set: rejected for good
                    ptr_[w] = spec.rank_of[memo_[w]->a] + 1;
                    memo_[w] = std::nullopt;
                }
            }
        }
        while (!memo_[w] && ptr_[w] < (int)spec.pref.size()) {
            EdgeId e = spec.pref[ptr_[w]];
            auto [interesting, partner] = probe_firm(inst, x_, e);
            if (interesting) {
                memo_[w] = Memo{e, partner, firm_version_[inst.edge_firm(e)]};
            } else {
                ++ptr_[w];
            }
        }
        if (memo_[w]) {
            w_adm[w] = memo_[w]->a;
            if (memo_[w]->b)
                tandems.push_back(Tandem{memo_[w]->a, *memo_[w]->b, inst.edge_firm(memo_[w]->a)});
        }
    }
    lscr_ = extract_core(inst, clean_core(inst, w_adm, tandems, ScanOrder::forward));
    dirty_ = false;
}

const std::vector<Rotation>& RouteEngine::applicable() {
    if (dirty_) refresh();
    return lscr_;
}

void RouteEngine::apply(const Rotation& r) {
    if (dirty_) refresh();
    bool found = false;
    for (const Rotation& cand : lscr_)
        if (cand.same_key(r)) {
            found = true;
            break;
        }
    if (!found) throw DomainError("RouteEngine::apply: not an applicable rotation");

    x_ = (x_ - r.minus) | r.plus;
    const Instance& inst = *inst_;
    r.plus.for_each([&](int a) {
        int w = inst.edge_worker(a);
        // the entering edge becomes the worker's least preferred matched edge
        ptr_[w] = inst.worker(w).rank_of[a] + 1;
        memo_[w] = std::nullopt;
    });
    std::vector<bool> bumped(inst.num_firms(), false);
    for (EdgeId e : r.cycle) {
        int f = inst.edge_firm(e);
        if (!bumped[f]) {
            bumped[f] = true;
            ++firm_version_[f];
        }
    }
    dirty_ = true;
}

} // namespace smlat
