#pragma once

#include "mimsolve/decomp.hpp"
#include "mimsolve/f2.hpp"
#include "mimsolve/graph.hpp"
#include "mimsolve/nec.hpp"
#include "mimsolve/oracle.hpp"
#include "mimsolve/problems.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace mimsolve {

// DP table key: inner tuple class R, outer tuple class R', and (when size
// constraints are active) the size tuple of the stored partitions.
struct TableKey {
    ClassTuple r;
    ClassTuple rp;
    std::array<std::uint8_t, max_tuple_colors> k{};
    bool sized = false;

    friend bool operator==(const TableKey& a, const TableKey& b) {
        return a.sized == b.sized && a.r == b.r && a.rp == b.rp && (!a.sized || a.k == b.k);
    }
    friend bool operator<(const TableKey& a, const TableKey& b) {
        if (!(a.r == b.r)) return a.r < b.r;
        if (!(a.rp == b.rp)) return a.rp < b.rp;
        if (a.sized != b.sized) return a.sized < b.sized;
        if (a.sized) return a.k < b.k;
        return false;
    }
};

struct TableKeyHash {
    std::size_t operator()(const TableKey& key) const {
        std::size_t h = key.r.hash() * 0x9e3779b97f4a7c15ull + key.rp.hash();
        if (key.sized) {
            for (int j = 0; j < key.r.q; ++j) h = (h ^ key.k[j]) * 0x100000001b3ull;
        }
        return h;
    }
};

struct Candidate {
    Partition x;
    Weight w = 0;
};

using CandidateList = std::vector<Candidate>;

// Entries in deterministic emission order.
struct Table {
    std::vector<std::pair<TableKey, CandidateList>> entries;

    auto begin() const { return entries.begin(); }
    auto end() const { return entries.end(); }
    std::size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }
    void clear() { entries.clear(); entries.shrink_to_fit(); }
};

struct ReduceEvent {
    int node = -1;
    const TableKey* key = nullptr;
    const CandidateList* pool = nullptr;
    const CandidateList* reduced = nullptr;
    const NecFamily* fam_out = nullptr;
    const Graph* g = nullptr;
    const ProblemSpec* spec = nullptr;
    std::int64_t bound = 0; // 2^{|C|} * snec_{d,q}(T)^{2|C|}, saturating
};

struct SolveOptions {
    bool keep_witness = true;
    int threads = 1;
    std::uint64_t budget_keys = 2'000'000; // realized table keys per node
    std::uint64_t budget_pool = 8'000'000; // pooled candidates per node
    bool debug_checks = false;             // revalidate table invariants after every join
    int log_level = 0;
    std::ostream* log = nullptr;
    // Observes every reduction with its full pre-reduction pool. Setting it
    // disables both the streaming min-weight fast path and worker threads.
    std::function<void(const ReduceEvent&)> reduce_hook;
    std::function<void(int node, const Table&)> table_hook; // observes each finished table
};

struct SolveStats {
    std::int64_t snec_scalar = 1;
    std::int64_t snec_tuple = 1;
    std::size_t max_keys = 0;
    std::size_t max_pool = 0;    // largest pre-reduction candidate list
    std::size_t max_reduced = 0; // largest post-reduction list
    std::size_t reductions = 0;
    std::size_t basis_reductions = 0; // reductions that built the GF(2) matrix
    double solve_ms = 0;
};

struct SolveResult {
    enum class Status { Feasible, Infeasible };
    Status status = Status::Infeasible;
    Weight weight = 0;
    std::vector<int> witness; // vertex -> color index; empty when infeasible
    SolveStats stats;
};

// Weight of a partial partition X of T_v completed by any outer partition of
// class `rp`: counts are |N(v) ∩ X_h| plus the capped class count, capped at d.
inline Weight weight_of(const ProblemSpec& spec, const Graph& g, const NecFamily& fam_out,
                        const Partition& x, const ClassTuple& rp) {
    Weight w = spec.domain.neutral();
    std::vector<std::uint8_t> k(spec.q);
    for (int j = 0; j < spec.q; ++j) {
        for (int v = x[j].first(); v >= 0; v = x[j].next(v)) {
            for (int h = 0; h < spec.q; ++h) {
                int c = g.neighbors(v).intersection_count(x[h]) + fam_out.neighbor_count(v, rp.at(h));
                k[h] = static_cast<std::uint8_t>(c > spec.d ? spec.d : c);
            }
            w = spec.domain.combine(w, spec.weight_eval(v, j, k));
        }
    }
    return w;
}

// Check-function part of T_v-validity of (X, R').
inline bool is_valid(const ProblemSpec& spec, const Graph& g, const NecFamily& fam_out,
                     const Partition& x, const ClassTuple& rp) {
    std::vector<std::uint8_t> k(spec.q);
    for (int j = 0; j < spec.q; ++j) {
        for (int v = x[j].first(); v >= 0; v = x[j].next(v)) {
            for (int h = 0; h < spec.q; ++h) {
                int c = g.neighbors(v).intersection_count(x[h]) + fam_out.neighbor_count(v, rp.at(h));
                k[h] = static_cast<std::uint8_t>(c > spec.d ? spec.d : c);
            }
            if (!spec.check_eval(v, j, k)) return false;
        }
    }
    return true;
}

namespace detail {

// Memoized scalar class unions across one fixed pair of fine families into a
// coarse family (the fine sides partition the coarse side).
class UnionMap {
public:
    UnionMap() = default;
    UnionMap(const NecFamily* a, const NecFamily* b, const NecFamily* c) : a_(a), b_(b), c_(c) {
        memo_.assign(static_cast<std::size_t>(a->size()) * b->size(), -1);
    }
    ClassId get(ClassId ca, ClassId cb) {
        auto& slot = memo_[static_cast<std::size_t>(ca) * b_->size() + cb];
        if (slot < 0) slot = c_->classify(a_->rep(ca) | b_->rep(cb));
        return slot;
    }

private:
    const NecFamily* a_ = nullptr;
    const NecFamily* b_ = nullptr;
    const NecFamily* c_ = nullptr;
    std::vector<std::int32_t> memo_;
};

} // namespace detail

class DpSolver {
public:
    DpSolver(const ProblemSpec& spec, const Graph& g, const DecompTree& t, SolveOptions opts)
        : spec_(spec), g_(g), t_(t), opts_(std::move(opts)) {}

    SolveResult run() {
        auto t0 = std::chrono::steady_clock::now();
        validate_inputs();
        families_ = FamilyCache::build(g_, t_, spec_.d, opts_.budget_keys);
        SnecStats sn = snec_stats(families_, spec_.q);
        stats_.snec_scalar = sn.snec_scalar;
        stats_.snec_tuple = sn.snec_tuple;
        bound_ = reduce_bound(sn);
        sized_ = spec_.sizes.active();

        compute_realized_inner();
        compute_read_out();

        tables_.assign(t_.size(), Table{});
        for (int v : t_.postorder()) {
            if (t_.is_leaf(v)) init_leaf(v);
            else join_node(v);
            stats_.max_keys = std::max(stats_.max_keys, tables_[v].size());
            if (opts_.table_hook) opts_.table_hook(v, tables_[v]);
            if (opts_.log && opts_.log_level >= 1)
                (*opts_.log) << "node " << v << ": " << tables_[v].size() << " keys\n";
            // child tables are dead once the parent is built
            if (!t_.is_leaf(v)) {
                tables_[t_.node(v).child[0]].clear();
                tables_[t_.node(v).child[1]].clear();
            }
        }

        SolveResult res = extract_root();
        auto t1 = std::chrono::steady_clock::now();
        stats_.solve_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        res.stats = stats_;
        return res;
    }

private:
    void validate_inputs() {
        t_.validate(g_);
        if (g_.has_isolated_vertex())
            throw ValidationError(
                "graph has isolated vertices; the solver requires a graph without them "
                "(add them back by hand or drop them before solving)");
        if (spec_.q < 1 || spec_.q > max_tuple_colors)
            throw ValidationError("problem has unsupported color count");
        if (spec_.d < 1) throw ValidationError("problem needs d >= 1");
        for (const auto& C : spec_.connectivity) {
            if (C.empty()) throw ValidationError("connectivity constraint with no colors");
            for (int j : C)
                if (j < 0 || j >= spec_.q) throw ValidationError("connectivity constraint names a bad color");
        }
        if (spec_.sizes.kind == SizeConstraintSet::Kind::Explicit)
            for (const auto& tup : spec_.sizes.tuples) {
                int sum = 0;
                for (int x : tup) sum += x;
                if (static_cast<int>(tup.size()) != spec_.q || sum != g_.n())
                    throw ValidationError("explicit size tuple is not a q-part partition of n");
            }
        if (spec_.sizes.active() && g_.n() > 255)
            throw ValidationError("size-constrained instances are limited to n <= 255");
    }

    std::int64_t reduce_bound(const SnecStats& sn) const {
        // 2^{|C|} * snec_{d,q}^{2|C|}, saturating at int64 max
        const std::int64_t inf = std::numeric_limits<std::int64_t>::max();
        std::int64_t b = 1;
        for (std::size_t i = 0; i < spec_.connectivity.size(); ++i) {
            if (b > inf / 2) return inf;
            b *= 2;
            for (int rep = 0; rep < 2; ++rep) {
                if (sn.snec_tuple != 0 && b > inf / sn.snec_tuple) return inf;
                b *= sn.snec_tuple;
            }
        }
        return b;
    }

    void compute_realized_inner() {
        realized_inner_.assign(t_.size(), {});
        for (int v : t_.postorder()) {
            std::unordered_set<ClassTuple, ClassTupleHash> seen;
            if (t_.is_leaf(v)) {
                const NecFamily& fam = families_.inner[v];
                int u = t_.leaf_vertex(v);
                VertexSet single(g_.n());
                single.add(u);
                ClassId cu = fam.classify(single);
                for (int j = 0; j < spec_.q; ++j) {
                    ClassTuple tup;
                    tup.q = static_cast<std::uint8_t>(spec_.q);
                    for (int h = 0; h < spec_.q; ++h) tup.set(h, h == j ? cu : fam.empty_class());
                    seen.insert(tup);
                }
            } else {
                int a = t_.node(v).child[0], b = t_.node(v).child[1];
                detail::UnionMap um(&families_.inner[a], &families_.inner[b], &families_.inner[v]);
                for (const ClassTuple& ta : realized_inner_[a])
                    for (const ClassTuple& tb : realized_inner_[b]) {
                        ClassTuple tup;
                        tup.q = static_cast<std::uint8_t>(spec_.q);
                        for (int j = 0; j < spec_.q; ++j) tup.set(j, um.get(ta.at(j), tb.at(j)));
                        seen.insert(tup);
                        if (seen.size() > opts_.budget_keys)
                            throw BudgetError("realized inner class set exceeds --budget-keys");
                    }
            }
            realized_inner_[v].assign(seen.begin(), seen.end());
            std::sort(realized_inner_[v].begin(), realized_inner_[v].end());
        }
    }

    // Outer tuple classes a parent join can ever request from this node:
    // root sees only the all-empty tuple; a child's set is every union of a
    // sibling inner class with a parent outer class.
    void compute_read_out() {
        read_out_.assign(t_.size(), {});
        int r = t_.root();
        ClassTuple zero;
        zero.q = static_cast<std::uint8_t>(spec_.q);
        for (int j = 0; j < spec_.q; ++j) zero.set(j, families_.outer[r].empty_class());
        read_out_[r].push_back(zero);

        std::vector<int> order = t_.postorder();
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            int v = *it;
            if (t_.is_leaf(v)) continue;
            int a = t_.node(v).child[0], b = t_.node(v).child[1];
            detail::UnionMap to_a(&families_.inner[b], &families_.outer[v], &families_.outer[a]);
            detail::UnionMap to_b(&families_.inner[a], &families_.outer[v], &families_.outer[b]);
            std::unordered_set<ClassTuple, ClassTupleHash> seen_a, seen_b;
            for (const ClassTuple& ro : read_out_[v]) {
                for (const ClassTuple& tb : realized_inner_[b]) {
                    ClassTuple tup;
                    tup.q = static_cast<std::uint8_t>(spec_.q);
                    for (int j = 0; j < spec_.q; ++j) tup.set(j, to_a.get(tb.at(j), ro.at(j)));
                    seen_a.insert(tup);
                }
                for (const ClassTuple& ta : realized_inner_[a]) {
                    ClassTuple tup;
                    tup.q = static_cast<std::uint8_t>(spec_.q);
                    for (int j = 0; j < spec_.q; ++j) tup.set(j, to_b.get(ta.at(j), ro.at(j)));
                    seen_b.insert(tup);
                }
                if (seen_a.size() > opts_.budget_keys || seen_b.size() > opts_.budget_keys)
                    throw BudgetError("realized outer class set exceeds --budget-keys");
            }
            read_out_[a].assign(seen_a.begin(), seen_a.end());
            std::sort(read_out_[a].begin(), read_out_[a].end());
            read_out_[b].assign(seen_b.begin(), seen_b.end());
            std::sort(read_out_[b].begin(), read_out_[b].end());
        }
    }

    void init_leaf(int v) {
        const NecFamily& fin = families_.inner[v];
        const NecFamily& fout = families_.outer[v];
        int u = t_.leaf_vertex(v);
        VertexSet single(g_.n());
        single.add(u);
        ClassId cu = fin.classify(single);
        std::vector<std::uint8_t> k(spec_.q);
        for (const ClassTuple& rp : read_out_[v]) {
            for (int h = 0; h < spec_.q; ++h)
                k[h] = static_cast<std::uint8_t>(fout.neighbor_count(u, rp.at(h)));
            for (int a = 0; a < spec_.q; ++a) {
                if (!spec_.check_eval(u, a, k)) continue;
                TableKey key;
                key.rp = rp;
                key.r.q = static_cast<std::uint8_t>(spec_.q);
                for (int h = 0; h < spec_.q; ++h) key.r.set(h, h == a ? cu : fin.empty_class());
                key.sized = sized_;
                if (sized_) key.k[a] = 1;
                Candidate cand;
                cand.x.assign(spec_.q, VertexSet(g_.n()));
                cand.x[a].add(u);
                cand.w = spec_.weight_eval(u, a, k);
                tables_[v].entries.emplace_back(std::move(key), CandidateList{std::move(cand)});
            }
        }
    }

    // One pending pool entry of the streaming min-weight path: the winning
    // child candidates are only merged into a partition at finalization.
    struct OnlineBest {
        Weight w = 0;
        const Candidate* ca = nullptr;
        const Candidate* cb = nullptr;
        std::size_t seen = 0;
    };

    void join_node(int v) {
        const int a = t_.node(v).child[0], b = t_.node(v).child[1];
        const NecFamily& fout_v = families_.outer[v];
        detail::UnionMap m_in(&families_.inner[a], &families_.inner[b], &families_.inner[v]);
        detail::UnionMap m_a_out(&families_.inner[a], &families_.outer[v], &families_.outer[b]);
        detail::UnionMap m_b_out(&families_.inner[b], &families_.outer[v], &families_.outer[a]);

        std::unordered_set<ClassTuple, ClassTupleHash> readset(read_out_[v].begin(),
                                                               read_out_[v].end());
        // per-coordinate scalar support of the outer classes this node may use
        std::vector<std::vector<char>> support(spec_.q, std::vector<char>(fout_v.size(), 0));
        for (const ClassTuple& ro : read_out_[v])
            for (int j = 0; j < spec_.q; ++j) support[j][ro.at(j)] = 1;

        // right child's keys grouped by inner class, sub-indexed by outer class
        struct BGroup {
            ClassTuple rb;
            std::unordered_map<ClassTuple, std::vector<std::size_t>, ClassTupleHash> by_rpb;
        };
        std::vector<BGroup> grouped_b;
        {
            std::unordered_map<ClassTuple, std::size_t, ClassTupleHash> pos;
            const auto& bent = tables_[b].entries;
            for (std::size_t i = 0; i < bent.size(); ++i) {
                auto [it, fresh] = pos.emplace(bent[i].first.r, grouped_b.size());
                if (fresh) grouped_b.push_back({bent[i].first.r, {}});
                grouped_b[it->second].by_rpb[bent[i].first.rp].push_back(i);
            }
        }

        // inverse fibers of m_b_out: for a fixed class over T_b, which outer
        // classes of v union into a given outer class of a
        std::unordered_map<ClassId, std::vector<std::vector<ClassId>>> inv_b;
        auto inv_row = [&](ClassId cb) -> const std::vector<std::vector<ClassId>>& {
            auto it = inv_b.find(cb);
            if (it == inv_b.end()) {
                std::vector<std::vector<ClassId>> row(families_.outer[a].size());
                for (ClassId cp = 0; cp < fout_v.size(); ++cp) row[m_b_out.get(cb, cp)].push_back(cp);
                it = inv_b.emplace(cb, std::move(row)).first;
            }
            return it->second;
        };

        // left child's entry indices grouped by outer class: keys sharing an
        // outer class share their fiber products, so walk each product once
        std::vector<std::pair<ClassTuple, std::vector<std::size_t>>> a_by_rp;
        {
            std::unordered_map<ClassTuple, std::size_t, ClassTupleHash> pos;
            const auto& aent = tables_[a].entries;
            for (std::size_t i = 0; i < aent.size(); ++i) {
                auto [it, fresh] = pos.emplace(aent[i].first.rp, a_by_rp.size());
                if (fresh) a_by_rp.push_back({aent[i].first.rp, {}});
                a_by_rp[it->second].second.push_back(i);
            }
        }

        const bool streaming = spec_.connectivity.empty() && !opts_.reduce_hook;
        std::unordered_map<TableKey, OnlineBest, TableKeyHash> best;
        std::unordered_map<TableKey, CandidateList, TableKeyHash> pool;
        std::vector<const TableKey*> emit_order; // map nodes are stable
        std::uint64_t pool_entries = 0;
        best.reserve(tables_[a].size() + tables_[b].size());

        std::vector<std::vector<ClassId>> fibers(spec_.q);
        const auto& ae = tables_[a].entries;
        const auto& be = tables_[b].entries;
        TableKey key;
        key.sized = sized_;
        key.r.q = key.rp.q = static_cast<std::uint8_t>(spec_.q);
        for (const auto& [rpa, a_idxs] : a_by_rp) {
            for (const BGroup& grp : grouped_b) {
                bool dead = false;
                for (int j = 0; j < spec_.q && !dead; ++j) {
                    const auto& row = inv_row(grp.rb.at(j));
                    fibers[j].clear();
                    for (ClassId cp : row[rpa.at(j)])
                        if (support[j][cp]) fibers[j].push_back(cp);
                    dead = fibers[j].empty();
                }
                if (dead) continue;
                // parent outer classes compatible with (R'_a, R_b)
                std::vector<ClassTuple> valid_rp;
                std::vector<std::size_t> idx(spec_.q, 0);
                while (true) {
                    ClassTuple rp;
                    rp.q = static_cast<std::uint8_t>(spec_.q);
                    for (int j = 0; j < spec_.q; ++j) rp.set(j, fibers[j][idx[j]]);
                    if (readset.count(rp)) valid_rp.push_back(rp);
                    int j = 0;
                    while (j < spec_.q && ++idx[j] == fibers[j].size()) idx[j++] = 0;
                    if (j == spec_.q) break;
                }
                if (valid_rp.empty()) continue;

                for (std::size_t ai : a_idxs) {
                    const TableKey& key_a = ae[ai].first;
                    const CandidateList& list_a = ae[ai].second;
                    for (const ClassTuple& rp : valid_rp) {
                        ClassTuple rpb;
                        rpb.q = static_cast<std::uint8_t>(spec_.q);
                        for (int j = 0; j < spec_.q; ++j)
                            rpb.set(j, m_a_out.get(key_a.r.at(j), rp.at(j)));
                        auto itb = grp.by_rpb.find(rpb);
                        if (itb == grp.by_rpb.end()) continue;
                        for (int j = 0; j < spec_.q; ++j)
                            key.r.set(j, m_in.get(key_a.r.at(j), grp.rb.at(j)));
                        key.rp = rp;
                        for (std::size_t bi : itb->second) {
                            const TableKey& key_b = be[bi].first;
                            const CandidateList& list_b = be[bi].second;
                            if (sized_)
                                for (int j = 0; j < spec_.q; ++j)
                                    key.k[j] = static_cast<std::uint8_t>(key_a.k[j] + key_b.k[j]);
                            pool_entries += list_a.size() * list_b.size();
                            if (pool_entries > opts_.budget_pool)
                                throw BudgetError("join pool exceeds --budget-pool");
                            if (streaming) {
                                auto [slot_it, fresh] = best.try_emplace(key);
                                if (fresh) emit_order.push_back(&slot_it->first);
                                OnlineBest& slot = slot_it->second;
                                for (const Candidate& ca : list_a)
                                    for (const Candidate& cb : list_b) {
                                        Weight w = spec_.domain.combine(ca.w, cb.w);
                                        ++slot.seen;
                                        if (!slot.ca || spec_.domain.less(w, slot.w)) {
                                            slot.w = w;
                                            slot.ca = &ca;
                                            slot.cb = &cb;
                                        }
                                    }
                                if (best.size() > opts_.budget_keys)
                                    throw BudgetError("join keys exceed --budget-keys");
                            } else {
                                auto [slot_it, fresh] = pool.try_emplace(key);
                                if (fresh) emit_order.push_back(&slot_it->first);
                                CandidateList& dst = slot_it->second;
                                for (const Candidate& ca : list_a)
                                    for (const Candidate& cb : list_b) {
                                        Candidate merged;
                                        merged.x.resize(spec_.q);
                                        for (int j = 0; j < spec_.q; ++j)
                                            merged.x[j] = ca.x[j] | cb.x[j];
                                        merged.w = spec_.domain.combine(ca.w, cb.w);
                                        dst.push_back(std::move(merged));
                                    }
                                if (pool.size() > opts_.budget_keys)
                                    throw BudgetError("join keys exceed --budget-keys");
                            }
                        }
                    }
                }
            }
        }

        if (streaming) finalize_streaming(v, best, emit_order);
        else reduce_all(v, pool, emit_order);
    }

    void finalize_streaming(int v, std::unordered_map<TableKey, OnlineBest, TableKeyHash>& best,
                            const std::vector<const TableKey*>& emit_order) {
        Table& out = tables_[v];
        out.entries.reserve(best.size());
        for (const TableKey* key : emit_order) {
            OnlineBest& slot = best.find(*key)->second;
            Candidate merged;
            merged.x.resize(spec_.q);
            for (int j = 0; j < spec_.q; ++j) merged.x[j] = slot.ca->x[j] | slot.cb->x[j];
            merged.w = slot.w;
            stats_.max_pool = std::max(stats_.max_pool, slot.seen);
            out.entries.emplace_back(*key, CandidateList{std::move(merged)});
        }
        stats_.reductions += best.size();
        stats_.max_reduced = std::max<std::size_t>(stats_.max_reduced, best.empty() ? 0 : 1);
        if (opts_.debug_checks)
            for (const auto& [key, list] : out.entries) debug_check_entry(v, key, list);
    }

    void reduce_all(int v, std::unordered_map<TableKey, CandidateList, TableKeyHash>& pool,
                    const std::vector<const TableKey*>& emit_order) {
        Table& out = tables_[v];
        std::vector<std::pair<const TableKey*, const CandidateList*>> items;
        items.reserve(pool.size());
        for (const TableKey* key : emit_order) items.emplace_back(key, &pool.find(*key)->second);

        std::vector<CandidateList> results(items.size());
        std::vector<std::size_t> basis_uses(items.size(), 0);
        int threads = opts_.threads;
        if (threads > 1 && (opts_.reduce_hook || opts_.debug_checks)) threads = 1;
        auto work = [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i)
                results[i] = reduce(v, *items[i].first, *items[i].second, basis_uses[i]);
        };
        if (threads <= 1 || items.size() < 2) {
            work(0, items.size());
        } else {
            std::vector<std::thread> pool_threads;
            std::size_t chunk = (items.size() + threads - 1) / threads;
            for (int tix = 0; tix < threads; ++tix) {
                std::size_t lo = tix * chunk, hi = std::min(items.size(), lo + chunk);
                if (lo >= hi) break;
                pool_threads.emplace_back(work, lo, hi);
            }
            for (auto& th : pool_threads) th.join();
        }
        stats_.reductions += items.size();
        out.entries.reserve(items.size());
        for (std::size_t i = 0; i < items.size(); ++i) {
            stats_.basis_reductions += basis_uses[i];
            stats_.max_pool = std::max(stats_.max_pool, items[i].second->size());
            if (!results[i].empty()) {
                stats_.max_reduced = std::max(stats_.max_reduced, results[i].size());
                if (opts_.debug_checks) debug_check_entry(v, *items[i].first, results[i]);
                out.entries.emplace_back(*items[i].first, std::move(results[i]));
            }
        }
    }

    // The representative-set reduction. Splits the connectivity constraints
    // into C' (outer class of C is empty) and C'' (the rest), drops
    // candidates with a dead component, and per type map tau keeps either a
    // minimum-weight candidate (no C'' columns) or a minimum-weight row basis
    // of the GF(2) component-split matrix.
    CandidateList reduce(int v, const TableKey& key, const CandidateList& pool,
                         std::size_t& basis_uses) {
        const NecFamily& fout = families_.outer[v];
        CandidateList reduced;
        if (spec_.connectivity.empty()) {
            std::size_t best = 0;
            for (std::size_t i = 1; i < pool.size(); ++i)
                if (spec_.domain.less(pool[i].w, pool[best].w)) best = i;
            reduced.push_back(pool[best]);
            fire_hook(v, key, pool, reduced, fout);
            return reduced;
        }

        const std::size_t nc = spec_.connectivity.size();
        std::vector<ClassId> rpc(nc);
        std::vector<int> cprime, csecond;
        for (std::size_t i = 0; i < nc; ++i) {
            rpc[i] = tuple_class_C(fout, key.rp, spec_.connectivity[i]);
            if (rpc[i] == fout.empty_class()) cprime.push_back(static_cast<int>(i));
            else csecond.push_back(static_cast<int>(i));
        }

        // per-candidate union sets and their components, shared by the steps below
        std::vector<std::vector<VertexSet>> unions(pool.size());
        for (std::size_t p = 0; p < pool.size(); ++p) {
            unions[p].reserve(nc);
            for (const auto& C : spec_.connectivity) {
                VertexSet u(g_.n());
                for (int j : C) u |= pool[p].x[j];
                unions[p].push_back(std::move(u));
            }
        }

        // step 3: a component of X_C with no neighbor in R'_C can never join
        // an outer part, so the candidate is dead for every completion
        std::vector<std::size_t> alive;
        // components of X_C per candidate, in C'' index order
        std::vector<std::vector<std::vector<VertexSet>>> comps(pool.size());
        for (std::size_t p = 0; p < pool.size(); ++p) {
            bool ok = true;
            std::vector<std::vector<VertexSet>> per_c;
            for (int ci : csecond) {
                auto cs = connected_components(g_, unions[p][ci]);
                for (const auto& comp : cs) {
                    bool adj = false;
                    for (int w = comp.first(); w >= 0 && !adj; w = comp.next(w))
                        adj = fout.neighbor_count(w, rpc[ci]) >= 1;
                    if (!adj) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) break;
                per_c.push_back(std::move(cs));
            }
            if (ok) {
                comps[p] = std::move(per_c);
                alive.push_back(p);
            }
        }

        std::set<std::size_t> keep;
        const std::size_t ntau = std::size_t{1} << cprime.size();
        for (std::size_t tau = 0; tau < ntau; ++tau) {
            std::vector<std::size_t> members;
            for (std::size_t p : alive) {
                bool fits = true;
                for (std::size_t i = 0; i < cprime.size() && fits; ++i) {
                    const VertexSet& xc = unions[p][cprime[i]];
                    if ((tau >> i) & 1) fits = is_connected(g_, xc);
                    else fits = xc.empty();
                }
                if (fits) members.push_back(p);
            }
            if (members.empty()) continue;
            if (csecond.empty()) {
                std::size_t best = members[0];
                for (std::size_t m : members)
                    if (spec_.domain.less(pool[m].w, pool[best].w)) best = m;
                keep.insert(best);
                continue;
            }
            // columns: one pair of scalar outer classes per C''
            std::size_t cols = 1;
            for (std::size_t i = 0; i < csecond.size(); ++i) {
                std::size_t f = static_cast<std::size_t>(fout.size());
                if (cols > (std::size_t{1} << 40) / (f * f))
                    throw BudgetError("reduce matrix column space too large");
                cols *= f * f;
            }
            if (members.size() <= cols) {
                for (std::size_t m : members) keep.insert(m);
                continue;
            }
            ++basis_uses;
            F2Matrix mat(cols);
            std::vector<Weight> weights;
            for (std::size_t m : members) {
                std::size_t row = mat.add_row();
                weights.push_back(pool[m].w);
                // adjacency of each component to each scalar outer class
                std::vector<std::vector<std::vector<char>>> adj(csecond.size());
                for (std::size_t ci = 0; ci < csecond.size(); ++ci) {
                    const auto& cs = comps[m][ci];
                    adj[ci].assign(cs.size(), std::vector<char>(fout.size(), 0));
                    for (std::size_t t = 0; t < cs.size(); ++t)
                        for (int w = cs[t].first(); w >= 0; w = cs[t].next(w))
                            for (ClassId c = 0; c < fout.size(); ++c)
                                if (fout.neighbor_count(w, c) >= 1) adj[ci][t][c] = 1;
                }
                std::vector<std::size_t> radix(csecond.size());
                for (std::size_t ci = 0; ci < csecond.size(); ++ci)
                    radix[ci] = static_cast<std::size_t>(fout.size()) * fout.size();
                // walk all column tuples; entry is 1 iff for every C'' no
                // component of X_C is adjacent to both classes of the pair
                std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t ci,
                                                                         std::size_t base) {
                    if (ci == csecond.size()) {
                        mat.set(row, base);
                        return;
                    }
                    std::size_t stride = 1;
                    for (std::size_t cj = ci + 1; cj < csecond.size(); ++cj) stride *= radix[cj];
                    for (ClassId c1 = 0; c1 < fout.size(); ++c1)
                        for (ClassId c2 = 0; c2 < fout.size(); ++c2) {
                            bool split_ok = true;
                            for (std::size_t t = 0; t < adj[ci].size() && split_ok; ++t)
                                split_ok = !(adj[ci][t][c1] && adj[ci][t][c2]);
                            if (split_ok)
                                walk(ci + 1,
                                     base + (static_cast<std::size_t>(c1) * fout.size() + c2) * stride);
                        }
                };
                walk(0, 0);
            }
            for (std::size_t kept : min_weight_basis(mat, weights, spec_.domain))
                keep.insert(members[kept]);
        }

        for (std::size_t p : keep) reduced.push_back(pool[p]);
        fire_hook(v, key, pool, reduced, fout);
        return reduced;
    }

    void fire_hook(int v, const TableKey& key, const CandidateList& pool,
                   const CandidateList& reduced, const NecFamily& fout) {
        if (!opts_.reduce_hook) return;
        ReduceEvent ev;
        ev.node = v;
        ev.key = &key;
        ev.pool = &pool;
        ev.reduced = &reduced;
        ev.fam_out = &fout;
        ev.g = &g_;
        ev.spec = &spec_;
        ev.bound = bound_;
        opts_.reduce_hook(ev);
    }

    void debug_check_entry(int v, const TableKey& key, const CandidateList& list) {
        const NecFamily& fin = families_.inner[v];
        const NecFamily& fout = families_.outer[v];
        for (const Candidate& c : list) {
            if (!(classify_tuple(fin, c.x) == key.r))
                throw std::logic_error("table invariant: candidate class differs from key");
            if (sized_)
                for (int j = 0; j < spec_.q; ++j)
                    if (c.x[j].count() != key.k[j])
                        throw std::logic_error("table invariant: candidate size differs from key");
            if (!is_valid(spec_, g_, fout, c.x, key.rp))
                throw std::logic_error("table invariant: candidate fails validity");
            if (c.w != weight_of(spec_, g_, fout, c.x, key.rp))
                throw std::logic_error("table invariant: cached weight is stale");
        }
    }

    SolveResult extract_root() {
        SolveResult res;
        res.status = SolveResult::Status::Infeasible;
        res.weight = spec_.domain.error();
        const Table& root = tables_[t_.root()];
        bool have = false;
        for (const auto& [key, list] : root.entries) {
            if (sized_) {
                std::vector<int> tup(spec_.q);
                for (int j = 0; j < spec_.q; ++j) tup[j] = key.k[j];
                if (!spec_.sizes.admits(tup)) continue;
            }
            for (const Candidate& c : list) {
                bool conn = true;
                for (const auto& C : spec_.connectivity) {
                    VertexSet u(g_.n());
                    for (int j : C) u |= c.x[j];
                    if (!is_connected(g_, u)) {
                        conn = false;
                        break;
                    }
                }
                if (!conn) continue;
                if (!have || spec_.domain.less(c.w, res.weight)) {
                    have = true;
                    res.weight = c.w;
                    if (opts_.keep_witness) {
                        res.witness.assign(g_.n(), 0);
                        for (int j = 0; j < spec_.q; ++j)
                            for (int v = c.x[j].first(); v >= 0; v = c.x[j].next(v)) res.witness[v] = j;
                    }
                }
            }
        }
        res.status = have ? SolveResult::Status::Feasible : SolveResult::Status::Infeasible;
        if (!have) res.witness.clear();
        return res;
    }

    const ProblemSpec& spec_;
    const Graph& g_;
    const DecompTree& t_;
    SolveOptions opts_;
    FamilyCache families_;
    SolveStats stats_;
    std::int64_t bound_ = 0;
    bool sized_ = false;
    std::vector<std::vector<ClassTuple>> realized_inner_;
    std::vector<std::vector<ClassTuple>> read_out_;
    std::vector<Table> tables_;
};

inline SolveResult solve(const ProblemSpec& spec, const Graph& g, const DecompTree& t,
                         const SolveOptions& opts = {}) {
    DpSolver solver(spec, g, t, opts);
    return solver.run();
}

// Structured-text result: status, domain-tagged weight, witness lines
// `<vertex> <color-name>`, then stats.
inline std::string format_result(const SolveResult& res, const ProblemSpec& spec, const Graph& g) {
    std::ostringstream out;
    bool feasible = res.status == SolveResult::Status::Feasible;
    out << "status " << (feasible ? "feasible" : "infeasible") << "\n";
    out << "weight " << spec.domain.name() << " " << spec.domain.to_string(res.weight) << "\n";
    if (feasible && !res.witness.empty()) {
        out << "witness\n";
        for (int v = 0; v < g.n(); ++v)
            out << g.label(v) << " " << spec.color_names[res.witness[v]] << "\n";
    }
    out << "stats snec_d " << res.stats.snec_scalar << "\n";
    out << "stats snec_dq " << res.stats.snec_tuple << "\n";
    out << "stats max_keys " << res.stats.max_keys << "\n";
    out << "stats max_pool " << res.stats.max_pool << "\n";
    out << "stats max_reduced " << res.stats.max_reduced << "\n";
    out << "stats reductions " << res.stats.reductions << "\n";
    out << "stats basis_reductions " << res.stats.basis_reductions << "\n";
    return out.str();
}

} // namespace mimsolve
