#include "smlat/instance.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "smlat/errors.hpp"

namespace smlat {

using nlohmann::json;

namespace {

std::string pair_key(const std::string& w, const std::string& f) { return w + '\x1f' + f; }

std::pair<std::string, std::string> read_edge_pair(const json& j, const char* where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string())
        throw ParseError(std::string(where) + ": edge reference must be a [worker, firm] string pair");
    return {j[0].get<std::string>(), j[1].get<std::string>()};
}

int read_quota(const json& j, const char* where) {
    if (!j.is_number_integer())
        throw ParseError(std::string(where) + ": quota must be an integer");
    long long q = j.get<long long>();
    if (q < 1) throw ValidationError(std::string(where) + ": quota must be >= 1");
    return (int)q;
}

} // namespace

Instance InstanceBuilder::build(const LoadOptions& opts) const {
    Instance inst;

    for (const auto& w : workers) {
        if (inst.worker_by_id_.count(w.id))
            throw ValidationError("duplicate worker id '" + w.id + "'");
        inst.worker_by_id_[w.id] = (int)inst.workers_.size();
        inst.workers_.push_back(WorkerSpec{w.id, w.quota, {}, {}, {}});
    }
    for (const auto& f : firms) {
        if (inst.firm_by_id_.count(f.id))
            throw ValidationError("duplicate firm id '" + f.id + "'");
        inst.firm_by_id_[f.id] = (int)inst.firms_.size();
        inst.firms_.push_back(FirmSpec{f.id, ChoiceFunction::linear_quota(0, {}, 1), {}});
    }

    std::unordered_map<std::string, EdgeId> edge_by_pair;
    for (const auto& [wid, fid] : edges) {
        auto wi = inst.worker_by_id_.find(wid);
        auto fi = inst.firm_by_id_.find(fid);
        if (wi == inst.worker_by_id_.end())
            throw ValidationError("edge references unknown worker '" + wid + "'");
        if (fi == inst.firm_by_id_.end())
            throw ValidationError("edge references unknown firm '" + fid + "'");
        if (!edge_by_pair.emplace(pair_key(wid, fid), (EdgeId)inst.edge_worker_.size()).second)
            throw ValidationError("duplicate edge (" + wid + ", " + fid + ")");
        inst.edge_worker_.push_back(wi->second);
        inst.edge_firm_.push_back(fi->second);
    }

    const int E = inst.num_edges();
    for (auto& w : inst.workers_) {
        w.incident = BitSet(E);
        w.rank_of.assign(E, -1);
    }
    for (auto& f : inst.firms_) f.incident = BitSet(E);
    for (EdgeId e = 0; e < E; ++e) {
        inst.workers_[inst.edge_worker_[e]].incident.set(e);
        inst.firms_[inst.edge_firm_[e]].incident.set(e);
    }

    auto resolve = [&](const std::pair<std::string, std::string>& p, const char* where) -> EdgeId {
        auto it = edge_by_pair.find(pair_key(p.first, p.second));
        if (it == edge_by_pair.end())
            throw ValidationError(std::string(where) + ": (" + p.first + ", " + p.second +
                                  ") is not a declared edge");
        return it->second;
    };

    for (std::size_t i = 0; i < workers.size(); ++i) {
        auto& spec = inst.workers_[i];
        BitSet seen(E);
        for (const auto& p : workers[i].pref) {
            EdgeId e = resolve(p, ("pref of worker '" + spec.id + "'").c_str());
            if (inst.edge_worker_[e] != (int)i || seen.test(e))
                throw ValidationError("pref of worker '" + spec.id +
                                      "' is not a permutation of its incident edges");
            seen.set(e);
            spec.pref.push_back(e);
        }
        if (seen != spec.incident)
            throw ValidationError("pref of worker '" + spec.id +
                                  "' is not a permutation of its incident edges");
        for (int r = 0; r < (int)spec.pref.size(); ++r) spec.rank_of[spec.pref[r]] = r;
    }

    for (std::size_t i = 0; i < firms.size(); ++i) {
        auto& spec = inst.firms_[i];
        const CfIn& cf = firms[i].cf;
        const std::string where = "cf of firm '" + spec.id + "'";
        if (cf.type == "linear_quota") {
            std::vector<EdgeId> order;
            for (const auto& p : cf.order) {
                EdgeId e = resolve(p, where.c_str());
                if (inst.edge_firm_[e] != (int)i)
                    throw ValidationError(where + ": order mentions a foreign edge");
                order.push_back(e);
            }
            if (cf.quota < 1) throw ValidationError(where + ": quota must be >= 1");
            spec.cf = ChoiceFunction::linear_quota(E, std::move(order), cf.quota);
        } else if (cf.type == "sequential") {
            std::vector<std::vector<EdgeId>> orders;
            for (const auto& ord : cf.orders) {
                std::vector<EdgeId> resolved;
                for (const auto& p : ord) {
                    EdgeId e = resolve(p, where.c_str());
                    if (inst.edge_firm_[e] != (int)i)
                        throw ValidationError(where + ": order mentions a foreign edge");
                    resolved.push_back(e);
                }
                orders.push_back(std::move(resolved));
            }
            spec.cf = ChoiceFunction::sequential(E, std::move(orders));
        } else if (cf.type == "table") {
            std::unordered_map<BitSet, BitSet, BitSetHash> entries;
            for (const auto& [in, out] : cf.table_entries) {
                BitSet zin(E), zout(E);
                for (const auto& p : in) zin.set(resolve(p, where.c_str()));
                for (const auto& p : out) zout.set(resolve(p, where.c_str()));
                if (!entries.emplace(zin, zout).second)
                    throw ValidationError(where + ": duplicate table entry");
            }
            spec.cf = ChoiceFunction::table(E, spec.incident, std::move(entries));
            if (!opts.unchecked_tables) {
                AxiomReport rep = verify_axioms(spec.cf);
                if (!rep.a1 || !rep.a2 || !rep.a3)
                    throw ValidationError(where + ": table violates axiom " +
                                          std::string(!rep.a1 ? "A1 (consistency)"
                                                     : !rep.a2 ? "A2 (substitutability)"
                                                               : "A3 (cardinal monotonicity)") +
                                          "; pass --unchecked to accept anyway");
            }
        } else {
            throw ParseError(where + ": unknown choice-function type '" + cf.type + "'");
        }
        if (spec.cf.domain() != spec.incident)
            throw ValidationError(where + ": domain differs from the firm's incident edges");
    }

    inst.reset_oracle_calls();
    return inst;
}

Instance Instance::load(const std::string& json_text, const LoadOptions& opts) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
    if (!j.is_object()) throw ParseError("instance must be a JSON object");
    for (const char* key : {"workers", "firms", "edges"})
        if (!j.contains(key) || !j[key].is_array())
            throw ParseError(std::string("instance needs array field '") + key + "'");

    InstanceBuilder b;
    for (const auto& jw : j["workers"]) {
        if (!jw.is_object() || !jw.contains("id") || !jw["id"].is_string())
            throw ParseError("worker entries need a string 'id'");
        InstanceBuilder::WorkerIn w;
        w.id = jw["id"].get<std::string>();
        if (!jw.contains("quota")) throw ParseError("worker '" + w.id + "' needs a quota");
        w.quota = read_quota(jw["quota"], ("worker '" + w.id + "'").c_str());
        if (!jw.contains("pref") || !jw["pref"].is_array())
            throw ParseError("worker '" + w.id + "' needs a pref array");
        for (const auto& p : jw["pref"]) w.pref.push_back(read_edge_pair(p, "pref"));
        b.workers.push_back(std::move(w));
    }
    for (const auto& jf : j["firms"]) {
        if (!jf.is_object() || !jf.contains("id") || !jf["id"].is_string())
            throw ParseError("firm entries need a string 'id'");
        InstanceBuilder::FirmIn f;
        f.id = jf["id"].get<std::string>();
        if (!jf.contains("cf") || !jf["cf"].is_object())
            throw ParseError("firm '" + f.id + "' needs a cf object");
        const json& jcf = jf["cf"];
        if (!jcf.contains("type") || !jcf["type"].is_string())
            throw ParseError("cf of firm '" + f.id + "' needs a string 'type'");
        f.cf.type = jcf["type"].get<std::string>();
        if (f.cf.type == "linear_quota") {
            if (!jcf.contains("quota")) throw ParseError("linear_quota cf needs a quota");
            f.cf.quota = read_quota(jcf["quota"], ("cf of firm '" + f.id + "'").c_str());
            if (!jcf.contains("order") || !jcf["order"].is_array())
                throw ParseError("linear_quota cf needs an order array");
            for (const auto& p : jcf["order"]) f.cf.order.push_back(read_edge_pair(p, "order"));
        } else if (f.cf.type == "sequential") {
            if (!jcf.contains("orders") || !jcf["orders"].is_array())
                throw ParseError("sequential cf needs an orders array");
            for (const auto& jord : jcf["orders"]) {
                if (!jord.is_array()) throw ParseError("sequential cf orders must be arrays");
                std::vector<std::pair<std::string, std::string>> ord;
                for (const auto& p : jord) ord.push_back(read_edge_pair(p, "orders"));
                f.cf.orders.push_back(std::move(ord));
            }
        } else if (f.cf.type == "table") {
            if (!jcf.contains("entries") || !jcf["entries"].is_array())
                throw ParseError("table cf needs an entries array");
            for (const auto& je : jcf["entries"]) {
                if (!je.is_object() || !je.contains("in") || !je.contains("out") ||
                    !je["in"].is_array() || !je["out"].is_array())
                    throw ParseError("table entries need 'in' and 'out' arrays");
                std::vector<std::pair<std::string, std::string>> in, out;
                for (const auto& p : je["in"]) in.push_back(read_edge_pair(p, "table in"));
                for (const auto& p : je["out"]) out.push_back(read_edge_pair(p, "table out"));
                f.cf.table_entries.emplace_back(std::move(in), std::move(out));
            }
        }
        b.firms.push_back(std::move(f));
    }
    for (const auto& je : j["edges"]) b.edges.push_back(read_edge_pair(je, "edges"));
    return b.build(opts);
}

namespace {

json edge_pair_json(const Instance& inst, EdgeId e) {
    auto [w, f] = inst.edge_pair(e);
    return json::array({w, f});
}

json edge_list_json(const Instance& inst, const BitSet& s) {
    json arr = json::array();
    s.for_each([&](int e) { arr.push_back(edge_pair_json(inst, e)); });
    return arr;
}

json cf_to_json(const Instance& inst, const ChoiceFunction& cf);

json table_entries_json(const Instance& inst,
                        const std::vector<std::pair<BitSet, BitSet>>& entries) {
    auto sorted = entries;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    json arr = json::array();
    for (const auto& [in, out] : sorted)
        arr.push_back(json{{"in", edge_list_json(inst, in)}, {"out", edge_list_json(inst, out)}});
    return arr;
}

json materialize_wrapped(const Instance& inst, const ChoiceFunction& cf) {
    const BitSet& dom = cf.domain();
    std::vector<int> bits = dom.to_vector();
    if (bits.size() > 16)
        throw DomainError("cannot serialize a wrapped choice function over more than 16 edges");
    std::uint64_t saved = cf.calls();
    std::vector<std::pair<BitSet, BitSet>> entries;
    for (std::uint32_t m = 0; m < (1u << bits.size()); ++m) {
        BitSet z(dom.universe());
        for (std::size_t i = 0; i < bits.size(); ++i)
            if (m & (1u << i)) z.set(bits[i]);
        entries.emplace_back(z, cf.choose(z));
    }
    cf.reset_calls(saved);
    return json{{"entries", table_entries_json(inst, entries)}, {"type", "table"}};
}

json cf_to_json(const Instance& inst, const ChoiceFunction& cf) {
    if (auto* lq = cf.as_linear_quota()) {
        json order = json::array();
        for (EdgeId e : lq->order) order.push_back(edge_pair_json(inst, e));
        return json{{"order", order}, {"quota", lq->quota}, {"type", "linear_quota"}};
    }
    if (auto* sq = cf.as_sequential()) {
        json orders = json::array();
        for (const auto& ord : sq->orders) {
            json jo = json::array();
            for (EdgeId e : ord) jo.push_back(edge_pair_json(inst, e));
            orders.push_back(jo);
        }
        return json{{"orders", orders}, {"type", "sequential"}};
    }
    if (auto* tb = cf.as_table()) {
        std::vector<std::pair<BitSet, BitSet>> entries(tb->begin(), tb->end());
        return json{{"entries", table_entries_json(inst, entries)}, {"type", "table"}};
    }
    // wrapped: emit the inner function relabeled when fibers are trivial,
    // otherwise materialize the full table
    if (cf.wrapped_is_plain_relabel()) {
        const ChoiceFunction* inner = cf.wrapped_inner();
        if (inner->is_wrapped())
            throw DomainError("cannot serialize a doubly wrapped choice function");
        std::vector<EdgeId> inverse(inner->domain().universe(), -1);
        cf.domain().for_each([&](int e) { inverse[cf.wrapped_edge_to_inner(e)] = e; });
        if (auto* lq = inner->as_linear_quota()) {
            json order = json::array();
            for (EdgeId e : lq->order) order.push_back(edge_pair_json(inst, inverse[e]));
            return json{{"order", order}, {"quota", lq->quota}, {"type", "linear_quota"}};
        }
        if (auto* sq = inner->as_sequential()) {
            json orders = json::array();
            for (const auto& ord : sq->orders) {
                json jo = json::array();
                for (EdgeId e : ord) jo.push_back(edge_pair_json(inst, inverse[e]));
                orders.push_back(jo);
            }
            return json{{"orders", orders}, {"type", "sequential"}};
        }
    }
    return materialize_wrapped(inst, cf);
}

} // namespace

std::string Instance::serialize() const {
    json j;
    j["edges"] = json::array();
    for (EdgeId e = 0; e < num_edges(); ++e) j["edges"].push_back(edge_pair_json(*this, e));
    j["workers"] = json::array();
    for (const auto& w : workers_) {
        json pref = json::array();
        for (EdgeId e : w.pref) pref.push_back(edge_pair_json(*this, e));
        j["workers"].push_back(json{{"id", w.id}, {"pref", pref}, {"quota", w.quota}});
    }
    j["firms"] = json::array();
    for (const auto& f : firms_)
        j["firms"].push_back(json{{"cf", cf_to_json(*this, f.cf)}, {"id", f.id}});
    return j.dump();
}

std::optional<int> Instance::worker_index(const std::string& id) const {
    auto it = worker_by_id_.find(id);
    if (it == worker_by_id_.end()) return std::nullopt;
    return it->second;
}

std::optional<int> Instance::firm_index(const std::string& id) const {
    auto it = firm_by_id_.find(id);
    if (it == firm_by_id_.end()) return std::nullopt;
    return it->second;
}

Vertex Instance::vertex(const std::string& id) const {
    auto w = worker_index(id);
    auto f = firm_index(id);
    if (w && f) throw DomainError("vertex id '" + id + "' names both a worker and a firm");
    if (w) return Vertex{Vertex::Side::worker, *w};
    if (f) return Vertex{Vertex::Side::firm, *f};
    throw DomainError("unknown vertex id '" + id + "'");
}

std::optional<EdgeId> Instance::edge_index(const std::string& worker_id,
                                           const std::string& firm_id) const {
    auto w = worker_index(worker_id);
    auto f = firm_index(firm_id);
    if (!w || !f) return std::nullopt;
    const BitSet common = workers_[*w].incident & firms_[*f].incident;
    int e = common.next(0);
    if (e < 0) return std::nullopt;
    return e;
}

BitSet Instance::choose_at(Vertex v, const BitSet& z) const {
    if (v.side == Vertex::Side::worker) return worker_choice(workers_[v.index], z);
    return choose(firms_[v.index].cf, z);
}

std::uint64_t Instance::total_oracle_calls() const {
    std::uint64_t total = 0;
    for (const auto& f : firms_) total += f.cf.calls();
    return total;
}

void Instance::reset_oracle_calls() const {
    for (const auto& f : firms_) f.cf.reset_calls();
}

Matching Instance::full_matching() const {
    Matching x(num_edges());
    for (EdgeId e = 0; e < num_edges(); ++e) x.set(e);
    return x;
}

Matching Instance::parse_matching(const std::string& json_text) const {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
    if (!j.is_array()) throw ParseError("matching must be a JSON array of [worker, firm] pairs");
    Matching x(num_edges());
    for (const auto& p : j) {
        auto [w, f] = read_edge_pair(p, "matching");
        auto e = edge_index(w, f);
        if (!e) throw ValidationError("matching mentions unknown edge (" + w + ", " + f + ")");
        x.set(*e);
    }
    return x;
}

std::string Instance::matching_to_json(const Matching& x) const {
    return edge_list_json(*this, x).dump();
}

std::pair<std::string, std::string> Instance::edge_pair(EdgeId e) const {
    return {workers_[edge_worker_[e]].id, firms_[edge_firm_[e]].id};
}

} // namespace smlat
