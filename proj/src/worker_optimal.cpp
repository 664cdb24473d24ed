#include "smlat/worker_optimal.hpp"

#include "smlat/errors.hpp"
#include "smlat/rotation.hpp"

namespace smlat {

std::pair<Matching, IterationTrace> compute_xmin(const Instance& inst) {
    const int E = inst.num_edges();
    IterationTrace trace;
    Matching b = inst.full_matching();
    while (true) {
        Matching x(E);
        for (int w = 0; w < inst.num_workers(); ++w) {
            const WorkerSpec& spec = inst.worker(w);
            int taken = 0;
            for (EdgeId e : spec.pref) {
                if (taken >= spec.quota) break;
                if (b.test(e)) {
                    x.set(e);
                    ++taken;
                }
            }
        }
        Matching y(E);
        for (int f = 0; f < inst.num_firms(); ++f) {
            BitSet xf = x & inst.firm(f).incident;
            if (xf.none()) continue;
            y |= inst.firm(f).cf.choose(xf);
        }
        trace.rounds.push_back(IterationRound{b, x, y});
        if (y == x) {
            trace.result = x;
            return {x, std::move(trace)};
        }
        Matching next = b - (x - y);
        if (!(next != b && next.is_subset_of(b)))
            throw InternalError("worker-optimal iteration failed to shrink the pool");
        if ((int)trace.rounds.size() > E + 1)
            throw InternalError("worker-optimal iteration exceeded the round bound");
        b = next;
    }
}

Matching compute_xmax(const Instance& inst) {
    RouteEngine engine(inst, compute_xmin(inst).first);
    while (!engine.applicable().empty()) {
        Rotation r = engine.applicable().front();
        engine.apply(r);
    }
    return engine.current();
}

} // namespace smlat
