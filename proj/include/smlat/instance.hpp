#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "smlat/bitset.hpp"
#include "smlat/choice.hpp"

namespace smlat {

// A matching is an arbitrary edge subset; acceptability and stability are
// predicates on it, not invariants.
using Matching = BitSet;

struct WorkerSpec {
    std::string id;
    int quota = 1;
    std::vector<EdgeId> pref; // most preferred first; permutation of incident edges
    BitSet incident;
    std::vector<int> rank_of; // edge -> position in pref, -1 if not incident
};

struct FirmSpec {
    std::string id;
    ChoiceFunction cf;
    BitSet incident;
};

struct Vertex {
    enum class Side { worker, firm };
    Side side;
    int index;

    bool operator==(const Vertex&) const = default;
};

struct LoadOptions {
    // accept table choice functions without the A1/A2/A3 screen
    bool unchecked_tables = false;
};

class Instance {
public:
    static Instance load(const std::string& json_text, const LoadOptions& opts = {});
    // canonical serialization; reparses to an identical instance
    std::string serialize() const;

    int num_workers() const { return (int)workers_.size(); }
    int num_firms() const { return (int)firms_.size(); }
    int num_edges() const { return (int)edge_worker_.size(); }
    int num_vertices() const { return num_workers() + num_firms(); }

    const WorkerSpec& worker(int w) const { return workers_[w]; }
    const FirmSpec& firm(int f) const { return firms_[f]; }

    int edge_worker(EdgeId e) const { return edge_worker_[e]; }
    int edge_firm(EdgeId e) const { return edge_firm_[e]; }

    std::optional<int> worker_index(const std::string& id) const;
    std::optional<int> firm_index(const std::string& id) const;
    // resolves an id on either side; throws DomainError if unknown or ambiguous
    Vertex vertex(const std::string& id) const;
    std::optional<EdgeId> edge_index(const std::string& worker_id, const std::string& firm_id) const;

    const BitSet& incident(Vertex v) const {
        return v.side == Vertex::Side::worker ? workers_[v.index].incident : firms_[v.index].incident;
    }

    // X_v = X intersected with the edges at v
    BitSet restriction(const Matching& x, Vertex v) const { return x & incident(v); }

    // C_v dispatch: worker-side linear choice or the firm oracle
    BitSet choose_at(Vertex v, const BitSet& z) const;

    std::uint64_t total_oracle_calls() const;
    void reset_oracle_calls() const;

    Matching empty_matching() const { return Matching(num_edges()); }
    Matching full_matching() const;

    // JSON helpers shared by the CLI and tests
    Matching parse_matching(const std::string& json_text) const;
    std::string matching_to_json(const Matching& x) const;
    std::pair<std::string, std::string> edge_pair(EdgeId e) const;

private:
    std::vector<WorkerSpec> workers_;
    std::vector<FirmSpec> firms_;
    std::vector<int> edge_worker_;
    std::vector<int> edge_firm_;
    std::unordered_map<std::string, int> worker_by_id_;
    std::unordered_map<std::string, int> firm_by_id_;

    friend struct InstanceBuilder;
};

// Programmatic construction; applies the same validation as the loader.
struct InstanceBuilder {
    struct WorkerIn {
        std::string id;
        int quota = 1;
        std::vector<std::pair<std::string, std::string>> pref;
    };
    struct CfIn {
        std::string type; // linear_quota | sequential | table
        int quota = 0;
        std::vector<std::pair<std::string, std::string>> order;
        std::vector<std::vector<std::pair<std::string, std::string>>> orders;
        std::vector<std::pair<std::vector<std::pair<std::string, std::string>>,
                              std::vector<std::pair<std::string, std::string>>>> table_entries;
    };
    struct FirmIn {
        std::string id;
        CfIn cf;
    };

    std::vector<WorkerIn> workers;
    std::vector<FirmIn> firms;
    std::vector<std::pair<std::string, std::string>> edges;

    Instance build(const LoadOptions& opts = {}) const;
};

} // namespace smlat
