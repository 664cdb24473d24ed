#include "smlat/poset.hpp"

#include <algorithm>
#include <unordered_map>

#include "smlat/errors.hpp"
#include "smlat/stability.hpp"
#include "smlat/worker_optimal.hpp"

namespace smlat {

namespace {

struct RotKey {
    BitSet plus;
    BitSet minus;
    bool operator==(const RotKey& o) const { return plus == o.plus && minus == o.minus; }
};

struct RotKeyHash {
    std::size_t operator()(const RotKey& k) const { return k.plus.hash() * 31 ^ k.minus.hash(); }
};

// Assigns ids in order of first appearance along a route; that order is a
// linear extension of the precedence order, since a rotation cannot become
// applicable before all its predecessors have been applied.
class Catalog {
public:
    int id_of(const Rotation& r) const {
        auto it = ids_.find(RotKey{r.plus, r.minus});
        return it == ids_.end() ? -1 : it->second;
    }
    int intern(const Rotation& r) {
        auto [it, inserted] = ids_.emplace(RotKey{r.plus, r.minus}, (int)rotations_.size());
        if (inserted) rotations_.push_back(r);
        return it->second;
    }
    int size() const { return (int)rotations_.size(); }
    std::vector<Rotation> take() { return std::move(rotations_); }

private:
    std::unordered_map<RotKey, int, RotKeyHash> ids_;
    std::vector<Rotation> rotations_;
};

Route run_full_route(const Instance& inst, const Matching& xmin, Catalog& catalog) {
    RouteEngine engine(inst, xmin);
    Route route;
    route.matchings.push_back(xmin);
    std::vector<int> pending;
    while (true) {
        const auto& ls = engine.applicable();
        std::vector<int> ids;
        ids.reserve(ls.size());
        for (const Rotation& r : ls) ids.push_back(catalog.intern(r));
        for (int id : pending)
            if (std::find(ids.begin(), ids.end(), id) == ids.end())
                throw InternalError("an unapplied rotation vanished from the applicable set");
        if (ls.empty()) break;
        int best = 0;
        for (int i = 1; i < (int)ids.size(); ++i)
            if (ids[i] < ids[best]) best = i;
        Rotation chosen = ls[best];
        int chosen_id = ids[best];
        engine.apply(chosen);
        route.rotations.push_back(std::move(chosen));
        route.matchings.push_back(engine.current());
        pending.clear();
        for (int id : ids)
            if (id != chosen_id) pending.push_back(id);
        if ((int)route.rotations.size() > inst.num_edges() / 2)
            throw InternalError("route length exceeded |E|/2");
    }
    return route;
}

} // namespace

std::vector<BitSet> RotationPoset::hasse_preds() const {
    std::vector<BitSet> preds(rotations.size(), BitSet((int)rotations.size()));
    for (auto [i, j] : hasse) preds[j].set(i);
    return preds;
}

std::vector<BitSet> RotationPoset::transitive_closure() const {
    const int n = size();
    std::vector<BitSet> succ(n, BitSet(n));
    std::vector<std::vector<int>> out(n);
    for (auto [i, j] : hasse) out[i].push_back(j);
    for (int i = n - 1; i >= 0; --i)
        for (int j : out[i]) {
            succ[i].set(j);
            succ[i] |= succ[j];
        }
    return succ;
}

bool RotationPoset::is_ideal(const Ideal& members) const {
    if (members.universe() != size()) return false;
    auto preds = hasse_preds();
    bool ok = true;
    members.for_each([&](int r) {
        if (!preds[r].is_subset_of(members)) ok = false;
    });
    return ok;
}

Route full_route(const Instance& inst) {
    Catalog catalog;
    return run_full_route(inst, compute_xmin(inst).first, catalog);
}

RotationPoset build_poset(const Instance& inst) {
    Matching xmin = compute_xmin(inst).first;
    Catalog catalog;
    Route route = run_full_route(inst, xmin, catalog);
    const int n = catalog.size();

    RotationPoset poset;
    poset.xmin = xmin;
    poset.xmax = route.matchings.back();
    poset.rotations = catalog.take();

    for (int r = 0; r < n; ++r) {
        RouteEngine engine(inst, xmin);
        // stage 1: exhaust every applicable rotation except r, lowest id first
        int guard = inst.num_edges() + 2;
        while (true) {
            if (--guard < 0) throw InternalError("poset construction failed to isolate a rotation");
            const auto& ls = engine.applicable();
            int pick = -1, pick_id = -1;
            bool saw_r = false;
            for (int i = 0; i < (int)ls.size(); ++i) {
                int id = catalog.id_of(ls[i]);
                if (id < 0)
                    throw InternalError("a rotation outside the catalog appeared on a route");
                if (id == r) {
                    saw_r = true;
                    continue;
                }
                if (pick < 0 || id < pick_id) {
                    pick = i;
                    pick_id = id;
                }
            }
            if (pick < 0) {
                if (!saw_r)
                    throw InternalError("stage 1 ran out of rotations before isolating the target");
                break; // applicable set is exactly {r}
            }
            engine.apply(ls[pick]);
        }
        // stage 2: apply r; what becomes applicable is its set of immediate successors
        engine.apply(poset.rotations[r]);
        for (const Rotation& s : engine.applicable()) {
            int id = catalog.id_of(s);
            if (id < 0) throw InternalError("an immediate successor is missing from the catalog");
            poset.hasse.emplace_back(r, id);
        }
    }
    std::sort(poset.hasse.begin(), poset.hasse.end());
    for (auto [i, j] : poset.hasse)
        if (i >= j) throw InternalError("rotation ids are not in topological order");
    return poset;
}

Ideal omega(const Instance& inst, const RotationPoset& poset, const Matching& x) {
    if (!is_stable(inst, x)) throw DomainError("omega: matching is not stable");
    std::vector<BitSet> worker_target(inst.num_workers());
    for (int w = 0; w < inst.num_workers(); ++w)
        worker_target[w] = x & inst.worker(w).incident;

    Ideal members((int)poset.rotations.size());
    RouteEngine engine(inst, poset.xmin);
    int guard = inst.num_edges() + 2;
    while (engine.current() != x) {
        if (--guard < 0) throw InternalError("omega failed to reach the target matching");
        const auto& ls = engine.applicable();
        int pick = -1, pick_id = -1;
        for (int i = 0; i < (int)ls.size(); ++i) {
            // never move a worker below its matched set in the target
            Matching next = (engine.current() - ls[i].minus) | ls[i].plus;
            bool ok = true;
            ls[i].plus.for_each([&](int a) {
                int w = inst.edge_worker(a);
                BitSet nw = next & inst.worker(w).incident;
                if (nw == worker_target[w]) return;
                if (worker_choice(inst.worker(w), nw | worker_target[w]) != nw) ok = false;
            });
            if (!ok) continue;
            int id = -1;
            for (int j = 0; j < (int)poset.rotations.size(); ++j)
                if (poset.rotations[j].same_key(ls[i])) {
                    id = j;
                    break;
                }
            if (id < 0) throw InternalError("omega met a rotation outside the poset");
            if (pick < 0 || id < pick_id) {
                pick = i;
                pick_id = id;
            }
        }
        if (pick < 0)
            throw InternalError("omega found no rotation moving toward a stable matching");
        engine.apply(ls[pick]);
        members.set(pick_id);
    }
    return members;
}

Matching matching_of(const Instance& inst, const RotationPoset& poset, const Ideal& members) {
    if (!poset.is_ideal(members))
        throw DomainError("matching_of: the given set is not an ideal of the poset");
    std::vector<int> coef(inst.num_edges(), 0);
    poset.xmin.for_each([&](int e) { coef[e] = 1; });
    members.for_each([&](int r) {
        poset.rotations[r].plus.for_each([&](int e) { ++coef[e]; });
        poset.rotations[r].minus.for_each([&](int e) { --coef[e]; });
    });
    Matching out(inst.num_edges());
    for (int e = 0; e < inst.num_edges(); ++e) {
        if (coef[e] != 0 && coef[e] != 1)
            throw InternalError("ideal sum left the 0/1 cube");
        if (coef[e]) out.set(e);
    }
    return out;
}

std::vector<Ideal> enumerate_ideals(const RotationPoset& poset, std::size_t cap) {
    const int n = poset.size();
    std::vector<BitSet> preds = poset.hasse_preds();
    std::vector<Ideal> out;
    BitSet cur(n);
    auto rec = [&](auto&& self, int i) -> void {
        if (i == n) {
            if (out.size() >= cap) throw DomainError("ideal enumeration exceeded the cap");
            out.push_back(cur);
            return;
        }
        self(self, i + 1);
        if (preds[i].is_subset_of(cur)) {
            cur.set(i);
            self(self, i + 1);
            cur.reset(i);
        }
    };
    rec(rec, 0);
    return out;
}

std::vector<Matching> enumerate_stable(const Instance& inst, const RotationPoset& poset,
                                       std::size_t cap) {
    std::vector<Matching> out;
    for (const Ideal& ideal : enumerate_ideals(poset, cap))
        out.push_back(matching_of(inst, poset, ideal));
    std::sort(out.begin(), out.end());
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i] == out[i - 1])
            throw InternalError("two distinct ideals mapped to the same matching");
    return out;
}

std::pair<Matching, Matching> meet_join(const Instance& inst, const RotationPoset& poset,
                                        const Matching& x, const Matching& y) {
    Ideal ix = omega(inst, poset, x);
    Ideal iy = omega(inst, poset, y);
    return {matching_of(inst, poset, ix & iy), matching_of(inst, poset, ix | iy)};
}

} // namespace smlat
