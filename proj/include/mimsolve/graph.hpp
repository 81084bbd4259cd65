#pragma once

#include "mimsolve/bitset.hpp"
#include "mimsolve/errors.hpp"

#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mimsolve {

// Convention used throughout: the empty vertex set induces a connected
// subgraph. Both the solver and the brute-force oracle rely on it.
inline constexpr bool empty_set_is_connected = true;

// Simple undirected graph over dense vertex ids {0, ..., n-1}.
// Immutable once built (construction happens in parse/generators).
class Graph {
public:
    Graph() = default;
    explicit Graph(int n) : n_(n), adj_(n, VertexSet(n)), labels_(n) {
        for (int v = 0; v < n; ++v) labels_[v] = std::to_string(v + 1);
    }

    int n() const { return n_; }
    int m() const {
        int deg2 = 0;
        for (const auto& a : adj_) deg2 += a.count();
        return deg2 / 2;
    }

    // Rejects self-loops; duplicate edges collapse silently.
    void add_edge(int u, int v) {
        if (u == v) throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
        adj_[u].add(v);
        adj_[v].add(u);
    }

    bool has_edge(int u, int v) const { return adj_[u].contains(v); }
    const VertexSet& neighbors(int v) const { return adj_[v]; }
    int degree(int v) const { return adj_[v].count(); }

    bool has_isolated_vertex() const {
        for (int v = 0; v < n_; ++v)
            if (adj_[v].empty()) return true;
        return false;
    }

    const std::string& label(int v) const { return labels_[v]; }
    void set_label(int v, std::string s) { labels_[v] = std::move(s); }

private:
    int n_ = 0;
    std::vector<VertexSet> adj_;
    std::vector<std::string> labels_;
};

// Text format: optional '#' comment lines, header `p <n> <m>`,
// then exactly m lines `e <u> <v>` with 1-based endpoints.
inline Graph load_graph(std::istream& in) {
    auto fail = [](int line, const std::string& msg) {
        throw ParseError("graph parse error at line " + std::to_string(line) + ": " + msg);
    };
    int lineno = 0;
    int n = -1, m = -1, edges_seen = 0;
    Graph g;
    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok[0] == '#') continue;
        if (tok == "p") {
            if (n >= 0) fail(lineno, "duplicate header");
            if (!(ls >> n >> m) || n < 0 || m < 0) fail(lineno, "malformed header, expected `p <n> <m>`");
            g = Graph(n);
        } else if (tok == "e") {
            if (n < 0) fail(lineno, "edge before header");
            int u, v;
            if (!(ls >> u >> v)) fail(lineno, "malformed edge line");
            if (u < 1 || u > n || v < 1 || v > n)
                fail(lineno, "endpoint out of range 1.." + std::to_string(n));
            if (u == v) fail(lineno, "self-loop at vertex " + std::to_string(u));
            g.add_edge(u - 1, v - 1);
            ++edges_seen;
        } else {
            fail(lineno, "unknown line type `" + tok + "`");
        }
    }
    if (n < 0) throw ParseError("graph parse error: missing `p <n> <m>` header");
    if (edges_seen != m)
        throw ParseError("graph parse error: header declares " + std::to_string(m) +
                         " edges but " + std::to_string(edges_seen) + " found");
    return g;
}

inline Graph load_graph(const std::string& text) {
    std::istringstream in(text);
    return load_graph(in);
}

// Maximal connected subsets of G[s], ordered by smallest member id.
inline std::vector<VertexSet> connected_components(const Graph& g, const VertexSet& s) {
    std::vector<VertexSet> comps;
    VertexSet seen(g.n());
    for (int start = s.first(); start >= 0; start = s.next(start)) {
        if (seen.contains(start)) continue;
        VertexSet comp(g.n());
        std::vector<int> stack{start};
        comp.add(start);
        seen.add(start);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            VertexSet nb = g.neighbors(v) & s;
            nb -= comp;
            for (int u = nb.first(); u >= 0; u = nb.next(u)) {
                comp.add(u);
                seen.add(u);
                stack.push_back(u);
            }
        }
        comps.push_back(std::move(comp));
    }
    return comps;
}

inline bool is_connected(const Graph& g, const VertexSet& s) {
    int start = s.first();
    if (start < 0) return empty_set_is_connected;
    VertexSet comp(g.n());
    std::vector<int> stack{start};
    comp.add(start);
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        VertexSet nb = g.neighbors(v) & s;
        nb -= comp;
        for (int u = nb.first(); u >= 0; u = nb.next(u)) {
            comp.add(u);
            stack.push_back(u);
        }
    }
    return comp.count() == s.count();
}

} // namespace mimsolve
