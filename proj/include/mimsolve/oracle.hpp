#pragma once

#include "mimsolve/graph.hpp"
#include "mimsolve/nec.hpp"
#include "mimsolve/problems.hpp"

#include <cstdint>
#include <set>
#include <vector>

namespace mimsolve {

// Reference implementations by direct enumeration. These share only the
// graph primitives and the problem tables with the solver; counting and
// class grouping are re-implemented here so equivalence tests mean something.

struct ColoringReport {
    bool proper = false;
    bool sizes_ok = false;
    bool connectivity_ok = false;
    Weight weight = 0;
    bool ok() const { return proper && sizes_ok && connectivity_ok; }
};

// Re-validates a full coloring (vertex -> color index) against the spec,
// from raw adjacency counts.
inline ColoringReport validate_coloring(const ProblemSpec& spec, const Graph& g,
                                        const std::vector<int>& coloring) {
    ColoringReport rep;
    const int n = g.n();
    rep.proper = true;
    rep.weight = spec.domain.neutral();
    std::vector<std::uint8_t> k(spec.q);
    for (int v = 0; v < n; ++v) {
        std::vector<int> raw(spec.q, 0);
        for (int u = g.neighbors(v).first(); u >= 0; u = g.neighbors(v).next(u)) ++raw[coloring[u]];
        for (int j = 0; j < spec.q; ++j)
            k[j] = static_cast<std::uint8_t>(raw[j] > spec.d ? spec.d : raw[j]);
        if (!spec.check_eval(v, coloring[v], k)) {
            rep.proper = false;
            break;
        }
        rep.weight = spec.domain.combine(rep.weight, spec.weight_eval(v, coloring[v], k));
    }
    std::vector<int> sizes(spec.q, 0);
    for (int v = 0; v < n; ++v) ++sizes[coloring[v]];
    rep.sizes_ok = spec.sizes.admits(sizes);
    rep.connectivity_ok = true;
    for (const auto& C : spec.connectivity) {
        VertexSet u(n);
        for (int v = 0; v < n; ++v)
            if (std::find(C.begin(), C.end(), coloring[v]) != C.end()) u.add(v);
        if (!is_connected(g, u)) {
            rep.connectivity_ok = false;
            break;
        }
    }
    return rep;
}

struct OracleOptions {
    std::uint64_t budget = 2'000'000; // max colorings enumerated
    int witness_cap = 64;             // optimal colorings retained
};

struct OracleResult {
    Weight weight = 0;
    bool feasible = false;
    std::vector<std::vector<int>> optimal_colorings;
    std::uint64_t optima_count = 0;
};

// Exact optimum by enumerating all q^n colorings.
inline OracleResult brute_solve(const ProblemSpec& spec, const Graph& g,
                                const OracleOptions& opt = {}) {
    const int n = g.n();
    std::uint64_t total = 1;
    for (int i = 0; i < n; ++i) {
        if (total > opt.budget / static_cast<std::uint64_t>(spec.q) + 1) {
            total = opt.budget + 1;
            break;
        }
        total *= static_cast<std::uint64_t>(spec.q);
    }
    if (total > opt.budget)
        throw BudgetError("brute_solve: q^n exceeds budget of " + std::to_string(opt.budget));

    OracleResult res;
    res.weight = spec.domain.error();
    std::vector<int> c(n, 0);
    std::vector<int> raw(spec.q);
    std::vector<std::uint8_t> k(spec.q);
    std::vector<int> sizes(spec.q);
    std::vector<std::vector<int>> nbrs(n);
    for (int v = 0; v < n; ++v) nbrs[v] = g.neighbors(v).to_vector();
    while (true) {
        bool proper = true;
        Weight w = spec.domain.neutral();
        for (int v = 0; v < n && proper; ++v) {
            std::fill(raw.begin(), raw.end(), 0);
            for (int u : nbrs[v]) ++raw[c[u]];
            for (int j = 0; j < spec.q; ++j)
                k[j] = static_cast<std::uint8_t>(raw[j] > spec.d ? spec.d : raw[j]);
            if (!spec.check_eval(v, c[v], k)) proper = false;
            else w = spec.domain.combine(w, spec.weight_eval(v, c[v], k));
        }
        if (proper && spec.sizes.active()) {
            std::fill(sizes.begin(), sizes.end(), 0);
            for (int v = 0; v < n; ++v) ++sizes[c[v]];
            proper = spec.sizes.admits(sizes);
        }
        if (proper) {
            for (const auto& C : spec.connectivity) {
                VertexSet u(n);
                for (int v = 0; v < n; ++v)
                    if (std::find(C.begin(), C.end(), c[v]) != C.end()) u.add(v);
                if (!is_connected(g, u)) {
                    proper = false;
                    break;
                }
            }
        }
        if (proper) {
            if (!res.feasible || spec.domain.less(w, res.weight)) {
                res.feasible = true;
                res.weight = w;
                res.optimal_colorings.clear();
                res.optima_count = 0;
            }
            if (res.feasible && w == res.weight) {
                ++res.optima_count;
                if (static_cast<int>(res.optimal_colorings.size()) < opt.witness_cap)
                    res.optimal_colorings.push_back(c);
            }
        }
        int j = 0;
        while (j < n && c[j] == spec.q - 1) c[j++] = 0;
        if (j == n) break;
        ++c[j];
    }
    return res;
}

struct BruteNecResult {
    int class_count = 0;
    std::set<std::vector<std::uint8_t>> signatures;
};

// Groups all 2^{|side|} subsets by their capped-count signature.
inline BruteNecResult brute_nec(const Graph& g, const VertexSet& side, int d,
                                int max_side_size = 20) {
    std::vector<int> sv = side.to_vector();
    if (static_cast<int>(sv.size()) > max_side_size)
        throw BudgetError("brute_nec: side larger than " + std::to_string(max_side_size));
    std::vector<int> opposite = (VertexSet::full(g.n()) - side).to_vector();
    BruteNecResult res;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << sv.size()); ++mask) {
        VertexSet s(g.n());
        for (std::size_t i = 0; i < sv.size(); ++i)
            if ((mask >> i) & 1) s.add(sv[i]);
        std::vector<std::uint8_t> sig(opposite.size());
        for (std::size_t i = 0; i < opposite.size(); ++i) {
            int cnt = g.neighbors(opposite[i]).intersection_count(s);
            sig[i] = static_cast<std::uint8_t>(cnt > d ? d : cnt);
        }
        res.signatures.insert(std::move(sig));
    }
    res.class_count = static_cast<int>(res.signatures.size());
    return res;
}

struct WeightedPartition {
    Partition x;
    Weight w = 0;
};

// Checks the representativity contract of a reduce call: for every outer
// partition Y of class `outer_class` and every pool member X whose unions
// X_C ∪ Y_C are all connected, the reduced list must contain an X' with the
// same property and weight no worse.
inline bool brute_representativity(const ProblemSpec& spec, const Graph& g,
                                   const NecFamily& fam_out, const ClassTuple& outer_class,
                                   const std::vector<WeightedPartition>& pool,
                                   const std::vector<WeightedPartition>& reduced,
                                   std::uint64_t budget = 4'000'000) {
    std::vector<int> outer = fam_out.side().to_vector();
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < outer.size(); ++i) {
        total *= static_cast<std::uint64_t>(spec.q);
        if (total > budget) throw BudgetError("brute_representativity: q^{|outer|} over budget");
    }
    auto conn_ok = [&](const Partition& x, const Partition& y) {
        for (const auto& C : spec.connectivity) {
            VertexSet u(g.n());
            for (int j : C) u |= x[j] | y[j];
            if (!is_connected(g, u)) return false;
        }
        return true;
    };
    std::vector<int> assign(outer.size(), 0);
    while (true) {
        Partition y(spec.q, VertexSet(g.n()));
        for (std::size_t i = 0; i < outer.size(); ++i) y[assign[i]].add(outer[i]);
        if (classify_tuple(fam_out, y) == outer_class) {
            for (const auto& cand : pool) {
                if (!conn_ok(cand.x, y)) continue;
                bool covered = false;
                for (const auto& r : reduced) {
                    if (spec.domain.leq(r.w, cand.w) && conn_ok(r.x, y)) {
                        covered = true;
                        break;
                    }
                }
                if (!covered) return false;
            }
        }
        std::size_t j = 0;
        while (j < assign.size() && assign[j] == spec.q - 1) assign[j++] = 0;
        if (j == assign.size()) break;
        ++assign[j];
    }
    return true;
}

} // namespace mimsolve
