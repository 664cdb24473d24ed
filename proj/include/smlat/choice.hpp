#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "smlat/bitset.hpp"

namespace smlat {

using EdgeId = int;
struct WorkerSpec;

// Choice-function oracle over a fixed domain of edges. Every call to
// choose() bumps the call counter by exactly one; results are pure
// functions of the argument. Non-expansive: choose(Z) is a subset of Z.
class ChoiceFunction {
public:
    // picks the min{|Z|, quota} best elements of Z along `order`
    // (most preferred first; a permutation of the domain)
    static ChoiceFunction linear_quota(int universe, std::vector<EdgeId> order, int quota);

    // rank-q sequential choice: pass i picks the maximum of the remainder
    // under orders[i]; each order is a permutation of the domain
    static ChoiceFunction sequential(int universe, std::vector<std::vector<EdgeId>> orders);

    // explicit table; must cover every subset of the domain
    static ChoiceFunction table(int universe, const BitSet& domain,
                                std::unordered_map<BitSet, BitSet, BitSetHash> entries);

    // view of an inner choice function through a fiber projection:
    // choose(Z) projects Z, asks `inner`, and keeps the lowest-index
    // fiber element present in Z for each chosen inner edge
    static ChoiceFunction wrapped(int universe, ChoiceFunction inner,
                                  std::vector<EdgeId> edge_to_inner,
                                  std::vector<int> copy_index);

    BitSet choose(const BitSet& z) const;

    const BitSet& domain() const { return domain_; }
    // quota declared by the variant: linear_quota's quota, sequential's rank
    std::optional<int> declared_quota() const;

    std::uint64_t calls() const { return calls_; }
    void reset_calls(std::uint64_t to = 0) const { calls_ = to; }

    bool is_table() const;
    bool is_wrapped() const;

    // serialization hooks used by the instance writer
    struct LinearQuotaSpec { std::vector<EdgeId> order; int quota; };
    struct SequentialSpec { std::vector<std::vector<EdgeId>> orders; };
    const LinearQuotaSpec* as_linear_quota() const;
    const SequentialSpec* as_sequential() const;
    const std::unordered_map<BitSet, BitSet, BitSetHash>* as_table() const;
    // wrapped only: true when every fiber is a singleton, i.e. the wrapper
    // is the inner function up to edge relabeling
    bool wrapped_is_plain_relabel() const;
    const ChoiceFunction* wrapped_inner() const;
    EdgeId wrapped_edge_to_inner(EdgeId e) const;

private:
    struct Table {
        std::unordered_map<BitSet, BitSet, BitSetHash> entries;
    };
    struct Wrapped {
        std::unique_ptr<ChoiceFunction> inner;
        std::vector<EdgeId> edge_to_inner; // replicated edge -> inner edge, -1 off-domain
        std::vector<int> copy_index;       // fiber position, 1-based
    };

    ChoiceFunction() = default;

    std::variant<LinearQuotaSpec, SequentialSpec, Table, Wrapped> impl_;
    BitSet domain_;
    mutable std::uint64_t calls_ = 0;

    friend struct ChoiceFunctionCopier;

public:
    ChoiceFunction(const ChoiceFunction& o);
    ChoiceFunction& operator=(const ChoiceFunction& o);
    ChoiceFunction(ChoiceFunction&&) = default;
    ChoiceFunction& operator=(ChoiceFunction&&) = default;
};

// oracle entry point with the domain precondition from the contract
BitSet choose(const ChoiceFunction& oracle, const BitSet& z);

// C_w for a linear-order worker: the min{q(w), |Z|} most-preferred
// elements of Z under w's preference list
BitSet worker_choice(const WorkerSpec& w, const BitSet& z);

struct AxiomReport {
    bool a1 = false;           // consistency
    bool a2 = false;           // substitutability
    bool a3 = false;           // cardinal monotonicity
    std::optional<bool> a4;    // quota-filling, when a quota is declared
    bool plottian = false;     // path independence
};

// Exhaustive check of the axioms over all subset pairs of the domain.
// Only feasible for small domains; refuses |domain| > 20.
AxiomReport verify_axioms(const ChoiceFunction& oracle);

} // namespace smlat
