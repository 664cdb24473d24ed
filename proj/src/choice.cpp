#include "smlat/choice.hpp"

#include <algorithm>

#include "smlat/errors.hpp"
#include "smlat/instance.hpp"

namespace smlat {

namespace {

BitSet set_from(int universe, const std::vector<EdgeId>& edges) {
    BitSet s(universe);
    for (EdgeId e : edges) s.set(e);
    return s;
}

void require_permutation(int universe, const std::vector<EdgeId>& order, const BitSet& domain,
                         const char* what) {
    if ((int)order.size() != domain.count())
        throw ValidationError(std::string(what) + " is not a permutation of the domain");
    BitSet seen(universe);
    for (EdgeId e : order) {
        if (e < 0 || e >= universe || !domain.test(e) || seen.test(e))
            throw ValidationError(std::string(what) + " is not a permutation of the domain");
        seen.set(e);
    }
}

} // namespace

ChoiceFunction::ChoiceFunction(const ChoiceFunction& o) : domain_(o.domain_), calls_(o.calls_) {
    if (auto* lq = std::get_if<LinearQuotaSpec>(&o.impl_)) impl_ = *lq;
    else if (auto* sq = std::get_if<SequentialSpec>(&o.impl_)) impl_ = *sq;
    else if (auto* tb = std::get_if<Table>(&o.impl_)) impl_ = Table{tb->entries};
    else {
        const auto& w = std::get<Wrapped>(o.impl_);
        impl_ = Wrapped{std::make_unique<ChoiceFunction>(*w.inner), w.edge_to_inner, w.copy_index};
    }
}

ChoiceFunction& ChoiceFunction::operator=(const ChoiceFunction& o) {
    if (this != &o) {
        ChoiceFunction tmp(o);
        *this = std::move(tmp);
    }
    return *this;
}

ChoiceFunction ChoiceFunction::linear_quota(int universe, std::vector<EdgeId> order, int quota) {
    if (quota < 1) throw ValidationError("choice-function quota must be >= 1");
    ChoiceFunction cf;
    cf.domain_ = set_from(universe, order);
    require_permutation(universe, order, cf.domain_, "linear_quota order");
    cf.impl_ = LinearQuotaSpec{std::move(order), quota};
    return cf;
}

ChoiceFunction ChoiceFunction::sequential(int universe, std::vector<std::vector<EdgeId>> orders) {
    if (orders.empty()) throw ValidationError("sequential choice function needs at least one order");
    ChoiceFunction cf;
    cf.domain_ = set_from(universe, orders[0]);
    for (const auto& ord : orders)
        require_permutation(universe, ord, cf.domain_, "sequential order");
    cf.impl_ = SequentialSpec{std::move(orders)};
    return cf;
}

ChoiceFunction ChoiceFunction::table(int universe, const BitSet& domain,
                                     std::unordered_map<BitSet, BitSet, BitSetHash> entries) {
    int n = domain.count();
    if (n > 20) throw ValidationError("table choice function domain too large");
    for (const auto& [in, out] : entries) {
        if (!in.is_subset_of(domain))
            throw ValidationError("table entry key outside the domain");
        if (!out.is_subset_of(in))
            throw ValidationError("table entry value not a subset of its key (non-expansiveness)");
    }
    if ((std::size_t)entries.size() != (std::size_t(1) << n))
        throw ValidationError("table must cover every subset of the domain");
    ChoiceFunction cf;
    cf.domain_ = domain;
    cf.impl_ = Table{std::move(entries)};
    return cf;
}

ChoiceFunction ChoiceFunction::wrapped(int universe, ChoiceFunction inner,
                                       std::vector<EdgeId> edge_to_inner,
                                       std::vector<int> copy_index) {
    ChoiceFunction cf;
    BitSet dom(universe);
    for (int e = 0; e < universe; ++e)
        if (edge_to_inner[e] >= 0) dom.set(e);
    cf.domain_ = dom;
    cf.impl_ = Wrapped{std::make_unique<ChoiceFunction>(std::move(inner)),
                       std::move(edge_to_inner), std::move(copy_index)};
    return cf;
}

BitSet ChoiceFunction::choose(const BitSet& z) const {
    ++calls_;
    if (auto* lq = std::get_if<LinearQuotaSpec>(&impl_)) {
        BitSet out(z.universe());
        int taken = 0;
        for (EdgeId e : lq->order) {
            if (taken >= lq->quota) break;
            if (z.test(e)) {
                out.set(e);
                ++taken;
            }
        }
        return out;
    }
    if (auto* sq = std::get_if<SequentialSpec>(&impl_)) {
        BitSet out(z.universe());
        BitSet rest = z;
        for (const auto& ord : sq->orders) {
            if (rest.none()) break;
            for (EdgeId e : ord) {
                if (rest.test(e)) {
                    out.set(e);
                    rest.reset(e);
                    break;
                }
            }
        }
        return out;
    }
    if (auto* tb = std::get_if<Table>(&impl_)) {
        auto it = tb->entries.find(z);
        if (it == tb->entries.end())
            throw DomainError("table choice function has no entry for the queried set");
        return it->second;
    }
    const auto& w = std::get<Wrapped>(impl_);
    const int inner_universe = w.inner->domain().universe();
    BitSet projected(inner_universe);
    z.for_each([&](int e) { projected.set(w.edge_to_inner[e]); });
    BitSet inner_choice = w.inner->choose(projected);
    BitSet out(z.universe());
    std::vector<int> best(inner_universe, -1);
    z.for_each([&](int e) {
        EdgeId ie = w.edge_to_inner[e];
        if (!inner_choice.test(ie)) return;
        if (best[ie] < 0 || w.copy_index[e] < w.copy_index[best[ie]]) best[ie] = e;
    });
    for (int ie = 0; ie < inner_universe; ++ie)
        if (best[ie] >= 0) out.set(best[ie]);
    return out;
}

std::optional<int> ChoiceFunction::declared_quota() const {
    if (auto* lq = std::get_if<LinearQuotaSpec>(&impl_)) return lq->quota;
    if (auto* sq = std::get_if<SequentialSpec>(&impl_)) return (int)sq->orders.size();
    return std::nullopt;
}

bool ChoiceFunction::is_table() const { return std::holds_alternative<Table>(impl_); }
bool ChoiceFunction::is_wrapped() const { return std::holds_alternative<Wrapped>(impl_); }

const ChoiceFunction::LinearQuotaSpec* ChoiceFunction::as_linear_quota() const {
    return std::get_if<LinearQuotaSpec>(&impl_);
}
const ChoiceFunction::SequentialSpec* ChoiceFunction::as_sequential() const {
    return std::get_if<SequentialSpec>(&impl_);
}
const std::unordered_map<BitSet, BitSet, BitSetHash>* ChoiceFunction::as_table() const {
    auto* tb = std::get_if<Table>(&impl_);
    return tb ? &tb->entries : nullptr;
}

bool ChoiceFunction::wrapped_is_plain_relabel() const {
    const auto& w = std::get<Wrapped>(impl_);
    std::vector<int> fiber_size(w.inner->domain().universe(), 0);
    bool plain = true;
    domain_.for_each([&](int e) {
        if (++fiber_size[w.edge_to_inner[e]] > 1) plain = false;
    });
    return plain;
}

const ChoiceFunction* ChoiceFunction::wrapped_inner() const {
    const auto& w = std::get<Wrapped>(impl_);
    return w.inner.get();
}

EdgeId ChoiceFunction::wrapped_edge_to_inner(EdgeId e) const {
    const auto& w = std::get<Wrapped>(impl_);
    return w.edge_to_inner[e];
}

BitSet choose(const ChoiceFunction& oracle, const BitSet& z) {
    if (!z.is_subset_of(oracle.domain()))
        throw DomainError("choose: argument is not a subset of the oracle domain");
    return oracle.choose(z);
}

BitSet worker_choice(const WorkerSpec& w, const BitSet& z) {
    if (!z.is_subset_of(w.incident))
        throw DomainError("worker_choice: argument is not a subset of the worker's edges");
    BitSet out(z.universe());
    int taken = 0;
    for (EdgeId e : w.pref) {
        if (taken >= w.quota) break;
        if (z.test(e)) {
            out.set(e);
            ++taken;
        }
    }
    return out;
}

AxiomReport verify_axioms(const ChoiceFunction& oracle) {
    const std::vector<int> dom = oracle.domain().to_vector();
    const int n = (int)dom.size();
    if (n > 20) throw DomainError("verify_axioms: domain too large for exhaustive check");

    const int universe = oracle.domain().universe();
    const std::uint32_t full = (n == 0) ? 0 : ((n == 32) ? ~0u : ((1u << n) - 1));

    // memoize C over all subsets; local masks index into dom
    std::vector<std::uint32_t> cof(std::size_t(full) + 1);
    std::vector<int> local_of(universe, -1);
    for (int i = 0; i < n; ++i) local_of[dom[i]] = i;
    for (std::uint32_t m = 0;; ++m) {
        BitSet z(universe);
        for (int i = 0; i < n; ++i)
            if (m & (1u << i)) z.set(dom[i]);
        BitSet c = oracle.choose(z);
        std::uint32_t cm = 0;
        c.for_each([&](int e) { cm |= 1u << local_of[e]; });
        if (!c.is_subset_of(z))
            throw InternalError("choice function is expansive: C(Z) is not a subset of Z");
        cof[m] = cm;
        if (m == full) break;
    }

    AxiomReport rep;
    rep.a1 = rep.a2 = rep.a3 = true;

    for (std::uint32_t z = 0;; ++z) {
        const std::uint32_t cz = cof[z];
        // (A1): C(Z) <= Z' <= Z implies C(Z') = C(Z)
        const std::uint32_t free = z & ~cz;
        for (std::uint32_t sub = free;; sub = (sub - 1) & free) {
            if (cof[cz | sub] != cz) { rep.a1 = false; break; }
            if (sub == 0) break;
        }
        // (A2), (A3) over all Z' <= Z
        for (std::uint32_t sub = z;; sub = (sub - 1) & z) {
            if ((cz & sub & ~cof[sub]) != 0) rep.a2 = false;
            if (__builtin_popcount(cof[sub]) > __builtin_popcount(cz)) rep.a3 = false;
            if (sub == 0) break;
        }
        if (z == full) break;
    }

    if (auto q = oracle.declared_quota()) {
        bool a4 = true;
        for (std::uint32_t z = 0;; ++z) {
            int want = std::min<int>(__builtin_popcount(z), *q);
            if (__builtin_popcount(cof[z]) != want) { a4 = false; break; }
            if (z == full) break;
        }
        rep.a4 = a4;
    }

    rep.plottian = true;
    for (std::uint32_t a = 0;; ++a) {
        for (std::uint32_t b = 0;; ++b) {
            if (cof[a | b] != cof[cof[a] | b]) { rep.plottian = false; break; }
            if (b == full) break;
        }
        if (!rep.plottian || a == full) break;
    }
    return rep;
}

} // namespace smlat
