#include "smlat/bruteforce.hpp"

#include <algorithm>
#include <unordered_map>

#include "smlat/errors.hpp"
#include "smlat/worker_optimal.hpp"

namespace smlat {

namespace {

// Z >=_f Z' at one firm, straight from the definition via C_f(Z u Z') = Z.
bool firm_geq_at(const Instance& inst, int f, const BitSet& zf, const BitSet& zf2) {
    if (zf == zf2) return true;
    return inst.firm(f).cf.choose(zf | zf2) == zf;
}

bool firm_geq_global(const Instance& inst, const Matching& x, const Matching& y) {
    for (int f = 0; f < inst.num_firms(); ++f) {
        const BitSet& inc = inst.firm(f).incident;
        if (!firm_geq_at(inst, f, x & inc, y & inc)) return false;
    }
    return true;
}

} // namespace

BruteForceReport brute_stable(const Instance& inst, int max_edges) {
    const int E = inst.num_edges();
    if (E > max_edges) throw DomainError("brute_stable: instance exceeds the edge cap");
    const int W = inst.num_workers();
    const int F = inst.num_firms();

    BruteForceReport rep;

    // Gray-code walk with incremental restrictions and per-worker counts.
    Matching x(E);
    std::vector<BitSet> wr(W), fr(F);
    for (int w = 0; w < W; ++w) wr[w] = BitSet(E);
    for (int f = 0; f < F; ++f) fr[f] = BitSet(E);
    std::vector<int> wcount(W, 0);

    const std::uint64_t total = std::uint64_t(1) << E;
    std::uint64_t gray = 0;
    for (std::uint64_t m = 0;; ++m) {
        bool workers_ok = true;
        for (int w = 0; w < W && workers_ok; ++w)
            if (wcount[w] > inst.worker(w).quota) workers_ok = false;

        if (workers_ok) {
            bool stable = true;
            for (int f = 0; f < F && stable; ++f)
                if (fr[f].any() && inst.firm(f).cf.choose(fr[f]) != fr[f]) stable = false;
            for (EdgeId e = 0; e < E && stable; ++e) {
                if (x.test(e)) continue;
                int w = inst.edge_worker(e);
                BitSet zw = wr[w];
                zw.set(e);
                if (!worker_choice(inst.worker(w), zw).test(e)) continue;
                int f = inst.edge_firm(e);
                BitSet zf = fr[f];
                zf.set(e);
                if (inst.firm(f).cf.choose(zf).test(e)) stable = false;
            }
            if (stable) rep.stable.push_back(x);
        }

        if (m + 1 == total) break;
        std::uint64_t next_gray = (m + 1) ^ ((m + 1) >> 1);
        int bit = __builtin_ctzll(gray ^ next_gray);
        gray = next_gray;
        int w = inst.edge_worker(bit), f = inst.edge_firm(bit);
        if (x.test(bit)) {
            x.reset(bit);
            wr[w].reset(bit);
            fr[f].reset(bit);
            --wcount[w];
        } else {
            x.set(bit);
            wr[w].set(bit);
            fr[f].set(bit);
            ++wcount[w];
        }
    }

    if (rep.stable.empty()) throw InternalError("no stable matching found by exhaustion");
    std::sort(rep.stable.begin(), rep.stable.end());
    const int S = (int)rep.stable.size();

    rep.firm_geq.assign(S, std::vector<bool>(S, false));
    for (int i = 0; i < S; ++i)
        for (int j = 0; j < S; ++j)
            rep.firm_geq[i][j] = firm_geq_global(inst, rep.stable[i], rep.stable[j]);

    for (int i = 0; i < S; ++i) {
        bool is_min = true, is_max = true;
        for (int j = 0; j < S; ++j) {
            if (!rep.firm_geq[j][i]) is_min = false;
            if (!rep.firm_geq[i][j]) is_max = false;
        }
        if (is_min) rep.lattice_min = i;
        if (is_max) rep.lattice_max = i;
    }
    if (rep.lattice_min < 0 || rep.lattice_max < 0)
        throw InternalError("the stable set has no lattice extremes");

    rep.worker_card.assign(W, -1);
    rep.firm_card.assign(F, -1);
    for (int i = 0; i < S; ++i) {
        for (int w = 0; w < W; ++w) {
            int c = (rep.stable[i] & inst.worker(w).incident).count();
            if (rep.worker_card[w] < 0) rep.worker_card[w] = c;
            if (rep.worker_card[w] != c)
                throw InternalError("worker degree in a stable matching is not invariant");
        }
        for (int f = 0; f < F; ++f) {
            int c = (rep.stable[i] & inst.firm(f).incident).count();
            if (rep.firm_card[f] < 0) rep.firm_card[f] = c;
            if (rep.firm_card[f] != c)
                throw InternalError("firm degree in a stable matching is not invariant");
        }
    }

    // meet = maximum of the common lower bounds, join = minimum of the upper ones
    rep.meet.assign(S, std::vector<int>(S, -1));
    rep.join.assign(S, std::vector<int>(S, -1));
    for (int i = 0; i < S; ++i)
        for (int j = 0; j < S; ++j) {
            std::vector<int> lower, upper;
            for (int k = 0; k < S; ++k) {
                if (rep.firm_geq[i][k] && rep.firm_geq[j][k]) lower.push_back(k);
                if (rep.firm_geq[k][i] && rep.firm_geq[k][j]) upper.push_back(k);
            }
            for (int k : lower) {
                bool top = true;
                for (int k2 : lower)
                    if (!rep.firm_geq[k][k2]) top = false;
                if (top) {
                    if (rep.meet[i][j] >= 0) throw InternalError("meet is not unique");
                    rep.meet[i][j] = k;
                }
            }
            for (int k : upper) {
                bool bottom = true;
                for (int k2 : upper)
                    if (!rep.firm_geq[k2][k]) bottom = false;
                if (bottom) {
                    if (rep.join[i][j] >= 0) throw InternalError("join is not unique");
                    rep.join[i][j] = k;
                }
            }
            if (rep.meet[i][j] < 0 || rep.join[i][j] < 0)
                throw InternalError("the stable set is not a lattice");
        }

    for (int i = 0; i < S; ++i)
        for (int j = 0; j < S; ++j)
            for (int k = 0; k < S; ++k) {
                if (rep.meet[i][rep.join[j][k]] != rep.join[rep.meet[i][j]][rep.meet[i][k]])
                    throw InternalError("the stable lattice is not distributive");
                if (rep.join[i][rep.meet[j][k]] != rep.meet[rep.join[i][j]][rep.join[i][k]])
                    throw InternalError("the stable lattice is not distributive");
            }

    return rep;
}

namespace {

struct PrecedenceSearch {
    const Instance& inst;
    int max_rotations;
    std::vector<Rotation> catalog;
    std::vector<std::vector<bool>> seen_before; // [i][j]: i applied before j on some route
    std::unordered_map<BitSet, std::vector<Rotation>, BitSetHash> lscr_cache;
    long long routes = 0;
    int full_length = -1;

    int intern(const Rotation& r) {
        for (int i = 0; i < (int)catalog.size(); ++i)
            if (catalog[i].same_key(r)) return i;
        catalog.push_back(r);
        if ((int)catalog.size() > max_rotations)
            throw DomainError("brute_precedence: rotation count exceeds the cap");
        for (auto& row : seen_before) row.push_back(false);
        seen_before.push_back(std::vector<bool>(catalog.size(), false));
        return (int)catalog.size() - 1;
    }

    const std::vector<Rotation>& applicable(const Matching& x) {
        auto it = lscr_cache.find(x);
        if (it != lscr_cache.end()) return it->second;
        return lscr_cache.emplace(x, rotations_of(inst, x)).first->second;
    }

    void dfs(const Matching& x, std::vector<int>& applied) {
        const std::vector<Rotation> ls = applicable(x); // copy; recursion mutates the cache
        if (ls.empty()) {
            ++routes;
            if (full_length < 0) full_length = (int)applied.size();
            if (full_length != (int)applied.size())
                throw InternalError("full routes of different lengths encountered");
            return;
        }
        for (const Rotation& r : ls) {
            int id = intern(r);
            for (int prev : applied) {
                if (prev == id) throw InternalError("a rotation was applied twice on one route");
                seen_before[prev][id] = true;
            }
            applied.push_back(id);
            dfs((x - r.minus) | r.plus, applied);
            applied.pop_back();
        }
    }
};

} // namespace

PrecedenceReport brute_precedence(const Instance& inst, int max_rotations) {
    PrecedenceSearch search{inst, max_rotations, {}, {}, {}, 0, -1};
    Matching xmin = compute_xmin(inst).first;
    std::vector<int> applied;
    search.dfs(xmin, applied);

    PrecedenceReport rep;
    rep.rotations = search.catalog;
    rep.route_count = search.routes;
    const int n = (int)search.catalog.size();
    if (search.full_length != std::max(0, n) && n > 0)
        throw InternalError("some full route missed a rotation");
    rep.precedes.assign(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) rep.precedes[i][j] = !search.seen_before[j][i];
    return rep;
}

} // namespace smlat
