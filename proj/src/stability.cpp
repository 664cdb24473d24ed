#include "smlat/stability.hpp"

#include "smlat/errors.hpp"

namespace smlat {

bool acceptable_at(const Instance& inst, Vertex v, const BitSet& z) {
    return inst.choose_at(v, z) == z;
}

bool is_acceptable(const Instance& inst, const Matching& x) {
    for (int w = 0; w < inst.num_workers(); ++w) {
        Vertex v{Vertex::Side::worker, w};
        if (!acceptable_at(inst, v, inst.restriction(x, v))) return false;
    }
    for (int f = 0; f < inst.num_firms(); ++f) {
        Vertex v{Vertex::Side::firm, f};
        if (!acceptable_at(inst, v, inst.restriction(x, v))) return false;
    }
    return true;
}

bool is_interesting(const Instance& inst, Vertex v, const BitSet& z, EdgeId e) {
    if (!inst.incident(v).test(e))
        throw DomainError("is_interesting: edge is not incident to the vertex");
    if (z.test(e)) throw DomainError("is_interesting: edge already belongs to the set");
    BitSet ze = z;
    ze.set(e);
    return inst.choose_at(v, ze).test(e);
}

BitSet blocking_edges(const Instance& inst, const Matching& x) {
    if (!is_acceptable(inst, x)) throw DomainError("blocking_edges: matching is not acceptable");
    BitSet blockers(inst.num_edges());
    for (EdgeId e = 0; e < inst.num_edges(); ++e) {
        if (x.test(e)) continue;
        Vertex w{Vertex::Side::worker, inst.edge_worker(e)};
        Vertex f{Vertex::Side::firm, inst.edge_firm(e)};
        if (is_interesting(inst, w, inst.restriction(x, w), e) &&
            is_interesting(inst, f, inst.restriction(x, f), e))
            blockers.set(e);
    }
    return blockers;
}

bool is_stable(const Instance& inst, const Matching& x) {
    if (!is_acceptable(inst, x)) return false;
    for (EdgeId e = 0; e < inst.num_edges(); ++e) {
        if (x.test(e)) continue;
        Vertex w{Vertex::Side::worker, inst.edge_worker(e)};
        Vertex f{Vertex::Side::firm, inst.edge_firm(e)};
        if (is_interesting(inst, w, inst.restriction(x, w), e) &&
            is_interesting(inst, f, inst.restriction(x, f), e))
            return false;
    }
    return true;
}

VertexPreference prefer_at(const Instance& inst, Vertex v, const BitSet& z, const BitSet& z2) {
    if (!acceptable_at(inst, v, z) || !acceptable_at(inst, v, z2))
        throw DomainError("prefer_at: inputs must be acceptable");
    if (z == z2) return VertexPreference::equal;
    BitSet joined = inst.choose_at(v, z | z2);
    if (joined == z) return VertexPreference::first_preferred;
    if (joined == z2) return VertexPreference::second_preferred;
    return VertexPreference::incomparable;
}

VertexPreference prefer_global(const Instance& inst, const Matching& x, const Matching& y,
                               Vertex::Side side) {
    const int n = side == Vertex::Side::worker ? inst.num_workers() : inst.num_firms();
    bool any_first = false, any_second = false;
    for (int i = 0; i < n; ++i) {
        Vertex v{side, i};
        switch (prefer_at(inst, v, inst.restriction(x, v), inst.restriction(y, v))) {
            case VertexPreference::first_preferred: any_first = true; break;
            case VertexPreference::second_preferred: any_second = true; break;
            case VertexPreference::equal: break;
            case VertexPreference::incomparable: return VertexPreference::incomparable;
        }
        if (any_first && any_second) return VertexPreference::incomparable;
    }
    if (any_first) return VertexPreference::first_preferred;
    if (any_second) return VertexPreference::second_preferred;
    return VertexPreference::equal;
}

BitSet join_at(const Instance& inst, Vertex v, const BitSet& z, const BitSet& z2) {
    if (!acceptable_at(inst, v, z) || !acceptable_at(inst, v, z2))
        throw DomainError("join_at: inputs must be acceptable");
    return inst.choose_at(v, z | z2);
}

DeficitReport deficit_report(const Instance& inst, const Matching& x) {
    DeficitReport rep;
    for (int w = 0; w < inst.num_workers(); ++w) {
        int matched = (x & inst.worker(w).incident).count();
        if (matched < inst.worker(w).quota)
            rep.deficit.push_back(w);
        else
            rep.fully_filled.push_back(w);
    }
    return rep;
}

} // namespace smlat
