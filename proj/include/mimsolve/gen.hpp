#pragma once

#include "mimsolve/decomp.hpp"
#include "mimsolve/graph.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace mimsolve {

// splitmix64: tiny, portable, identical output on every platform. The
// standard distributions are not reproducible across library versions, so
// generators use this directly.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    // uniform in [0, n)
    std::uint64_t below(std::uint64_t n) { return next() % n; }
    // uniform in [0, 1)
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }
};

inline Graph gen_path(int n) {
    Graph g(n);
    for (int v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
    return g;
}

inline Graph gen_cycle(int n) {
    Graph g = gen_path(n);
    if (n >= 3) g.add_edge(n - 1, 0);
    return g;
}

inline Graph gen_gnp(int n, double p, std::uint64_t seed) {
    Rng rng(seed);
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.unit() < p) g.add_edge(u, v);
    return g;
}

// G(n,p) with isolated vertices patched by one edge to a random other vertex.
inline Graph gen_gnp_no_isolated(int n, double p, std::uint64_t seed) {
    Rng rng(seed);
    Graph g(n);
    if (n < 2) return g;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.unit() < p) g.add_edge(u, v);
    for (int v = 0; v < n; ++v)
        if (g.degree(v) == 0) {
            int u = static_cast<int>(rng.below(n - 1));
            if (u >= v) ++u;
            g.add_edge(v, u);
        }
    return g;
}

inline Graph gen_connected(int n, double p, std::uint64_t seed) {
    Rng rng(seed);
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.unit() < p) g.add_edge(u, v);
    // stitch components together with random edges
    while (true) {
        auto comps = connected_components(g, VertexSet::full(n));
        if (comps.size() <= 1) break;
        auto pick = [&](const VertexSet& s) {
            auto v = s.to_vector();
            return v[rng.below(v.size())];
        };
        g.add_edge(pick(comps[0]), pick(comps[1]));
    }
    return g;
}

struct IntervalInstance {
    Graph graph;
    std::vector<Interval> intervals;
    std::vector<int> order; // left-endpoint order, caterpillar-ready
};

// Random interval graph on integer endpoints without isolated vertices
// (intervals are redrawn until they intersect something).
inline IntervalInstance gen_interval(int n, std::uint64_t seed) {
    Rng rng(seed);
    const int span = 4 * n;
    std::vector<Interval> ivs(n);
    auto draw = [&](int v) {
        int l = static_cast<int>(rng.below(span));
        int len = 1 + static_cast<int>(rng.below(std::max(2, span / 4)));
        ivs[v] = Interval{v, static_cast<double>(l), static_cast<double>(l + len)};
    };
    for (int v = 0; v < n; ++v) draw(v);
    auto intersects = [&](int a, int b) {
        return ivs[a].left <= ivs[b].right && ivs[b].left <= ivs[a].right;
    };
    if (n > 1) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (int v = 0; v < n; ++v) {
                bool any = false;
                for (int u = 0; u < n && !any; ++u) any = u != v && intersects(v, u);
                if (!any) {
                    draw(v);
                    changed = true;
                }
            }
        }
    }
    IntervalInstance inst;
    inst.graph = Graph(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (intersects(u, v)) inst.graph.add_edge(u, v);
    inst.intervals = ivs;
    inst.order = interval_order(ivs);
    return inst;
}

inline std::vector<int> random_order(int n, std::uint64_t seed) {
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);
    return order;
}

inline std::string graph_to_text(const Graph& g) {
    std::string out = "p " + std::to_string(g.n()) + " " + std::to_string(g.m()) + "\n";
    for (int u = 0; u < g.n(); ++u)
        for (int v = g.neighbors(u).first(); v >= 0; v = g.neighbors(u).next(v))
            if (v > u) out += "e " + std::to_string(u + 1) + " " + std::to_string(v + 1) + "\n";
    return out;
}

inline std::string intervals_to_text(const std::vector<Interval>& ivs) {
    std::string out;
    for (const auto& iv : ivs)
        out += std::to_string(iv.vertex + 1) + " " + std::to_string(static_cast<long>(iv.left)) +
               " " + std::to_string(static_cast<long>(iv.right)) + "\n";
    return out;
}

} // namespace mimsolve
