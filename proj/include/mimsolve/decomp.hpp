#pragma once

#include "mimsolve/graph.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mimsolve {

struct Cut {
    int node = -1;
    VertexSet inner; // T_v
    VertexSet outer; // complement
};

// Rooted binary decomposition tree: every internal node has exactly two
// children, leaves biject onto the graph vertices.
class DecompTree {
public:
    struct Node {
        int parent = -1;
        std::array<int, 2> child{-1, -1};
        int vertex = -1; // mapped graph vertex at leaves
        bool leaf() const { return child[0] < 0; }
    };

    int size() const { return static_cast<int>(nodes_.size()); }
    int root() const { return root_; }
    const Node& node(int id) const { return nodes_[id]; }
    bool is_leaf(int id) const { return nodes_[id].leaf(); }
    int leaf_vertex(int id) const { return nodes_[id].vertex; }

    const VertexSet& inner(int id) const { return inner_[id]; }
    Cut cut_of(int id) const {
        Cut c;
        c.node = id;
        c.inner = inner_[id];
        c.outer = VertexSet::full(n_) - inner_[id];
        return c;
    }

    // Children-before-parent order.
    std::vector<int> postorder() const {
        std::vector<int> order, stack{root_};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            order.push_back(v);
            if (!nodes_[v].leaf()) {
                stack.push_back(nodes_[v].child[0]);
                stack.push_back(nodes_[v].child[1]);
            }
        }
        std::reverse(order.begin(), order.end());
        return order;
    }

    // Left-deep tree whose leaves follow `order` left to right.
    static DecompTree caterpillar(const Graph& g, const std::vector<int>& order) {
        int n = g.n();
        if (n < 1) throw ValidationError("cannot decompose an empty graph");
        if (static_cast<int>(order.size()) != n)
            throw ValidationError("order has " + std::to_string(order.size()) +
                                  " entries, graph has " + std::to_string(n) + " vertices");
        std::vector<bool> seen(n, false);
        for (int v : order) {
            if (v < 0 || v >= n || seen[v])
                throw ValidationError("order is not a permutation of the vertices");
            seen[v] = true;
        }
        DecompTree t;
        t.n_ = n;
        auto leaf = [&](int v) {
            Node nd;
            nd.vertex = v;
            t.nodes_.push_back(nd);
            return static_cast<int>(t.nodes_.size()) - 1;
        };
        int cur = leaf(order[0]);
        for (int i = 1; i < n; ++i) {
            int right = leaf(order[i]);
            Node internal;
            internal.child = {cur, right};
            t.nodes_.push_back(internal);
            int id = static_cast<int>(t.nodes_.size()) - 1;
            t.nodes_[cur].parent = id;
            t.nodes_[right].parent = id;
            cur = id;
        }
        t.root_ = cur;
        t.finish(g);
        return t;
    }

    // One node per line: `<id> <parent-id|-> <L|I> [vertex-id-if-leaf]`,
    // vertex ids 1-based, root has parent `-`.
    static DecompTree load(std::istream& in, const Graph& g) {
        struct Raw {
            long parent; // -1 root
            bool leaf;
            int vertex; // 0-based
        };
        std::map<long, Raw> raw;
        std::string line;
        int lineno = 0;
        auto fail = [](int ln, const std::string& msg) {
            throw ParseError("decomposition parse error at line " + std::to_string(ln) + ": " + msg);
        };
        while (std::getline(in, line)) {
            ++lineno;
            std::istringstream ls(line);
            std::string idtok;
            if (!(ls >> idtok) || idtok[0] == '#') continue;
            long id;
            try {
                id = std::stol(idtok);
            } catch (...) {
                fail(lineno, "bad node id `" + idtok + "`");
                return {};
            }
            std::string ptok, kind;
            if (!(ls >> ptok >> kind)) fail(lineno, "expected `<id> <parent|-> <L|I>`");
            Raw r{};
            r.parent = ptok == "-" ? -1 : std::stol(ptok);
            if (kind == "L") {
                int v;
                if (!(ls >> v)) fail(lineno, "leaf node without vertex id");
                if (v < 1 || v > g.n()) fail(lineno, "vertex id out of range");
                r.leaf = true;
                r.vertex = v - 1;
            } else if (kind == "I") {
                r.leaf = false;
                r.vertex = -1;
            } else {
                fail(lineno, "node kind must be L or I");
            }
            if (!raw.emplace(id, r).second) fail(lineno, "duplicate node id " + std::to_string(id));
        }
        if (raw.empty()) throw ParseError("decomposition parse error: empty file");

        DecompTree t;
        t.n_ = g.n();
        std::map<long, int> dense;
        for (const auto& [id, r] : raw) {
            (void)r;
            dense[id] = static_cast<int>(dense.size());
        }
        t.nodes_.resize(raw.size());
        t.root_ = -1;
        for (const auto& [id, r] : raw) {
            int me = dense[id];
            t.nodes_[me].vertex = r.leaf ? r.vertex : -1;
            if (r.parent < 0) {
                if (t.root_ >= 0)
                    throw ValidationError("multiple roots: nodes " + std::to_string(id) + " and others");
                t.root_ = me;
            } else {
                auto it = raw.find(r.parent);
                if (it == raw.end())
                    throw ValidationError("node " + std::to_string(id) + " references unknown parent " +
                                          std::to_string(r.parent));
                if (it->second.leaf)
                    throw ValidationError("node " + std::to_string(r.parent) + " is a leaf but has children");
                int p = dense[r.parent];
                t.nodes_[me].parent = p;
                if (t.nodes_[p].child[0] < 0) t.nodes_[p].child[0] = me;
                else if (t.nodes_[p].child[1] < 0) t.nodes_[p].child[1] = me;
                else
                    throw ValidationError("node " + std::to_string(r.parent) + " has 3 children");
            }
        }
        if (t.root_ < 0) throw ValidationError("no root node (every node has a parent)");
        t.finish(g);
        return t;
    }

    void validate(const Graph& g) const {
        if (n_ != g.n()) throw ValidationError("decomposition built for a different graph size");
        std::vector<int> vertex_leaf(g.n(), -1);
        int reached = 0;
        std::vector<int> stack{root_};
        std::vector<bool> seen(nodes_.size(), false);
        while (!stack.empty()) {
            int id = stack.back();
            stack.pop_back();
            if (seen[id]) throw ValidationError("node " + std::to_string(id) + " reached twice (cycle)");
            seen[id] = true;
            ++reached;
            const Node& nd = nodes_[id];
            if (nd.leaf()) {
                if (nd.vertex < 0 || nd.vertex >= g.n())
                    throw ValidationError("leaf node " + std::to_string(id) + " has no vertex");
                if (vertex_leaf[nd.vertex] >= 0)
                    throw ValidationError("vertex " + std::to_string(nd.vertex + 1) +
                                          " mapped by two leaves");
                vertex_leaf[nd.vertex] = id;
            } else {
                if (nd.child[0] < 0 || nd.child[1] < 0)
                    throw ValidationError("internal node " + std::to_string(id) +
                                          " has fewer than 2 children");
                stack.push_back(nd.child[0]);
                stack.push_back(nd.child[1]);
            }
        }
        if (reached != size())
            throw ValidationError("tree has unreachable nodes (disconnected or cyclic)");
        for (int v = 0; v < g.n(); ++v)
            if (vertex_leaf[v] < 0)
                throw ValidationError("vertex " + std::to_string(v + 1) + " unmapped");
    }

private:
    void finish(const Graph& g) {
        validate(g);
        inner_.assign(nodes_.size(), VertexSet(n_));
        for (int id : postorder()) {
            const Node& nd = nodes_[id];
            if (nd.leaf()) {
                inner_[id].add(nd.vertex);
            } else {
                inner_[id] = inner_[nd.child[0]] | inner_[nd.child[1]];
            }
        }
    }

    int n_ = 0;
    int root_ = -1;
    std::vector<Node> nodes_;
    std::vector<VertexSet> inner_;
};

inline DecompTree load_decomposition(const std::string& text, const Graph& g) {
    std::istringstream in(text);
    return DecompTree::load(in, g);
}

// Exact maximum induced matching in the bipartite graph G[inner, outer],
// by branching over cross edges. Diagnostic only; refuses large cuts.
inline int mim_of_cut(const Graph& g, const Cut& c, int max_cross_edges = 24) {
    struct Edge {
        int a, b;
    };
    std::vector<Edge> cross;
    for (int u = c.inner.first(); u >= 0; u = c.inner.next(u)) {
        VertexSet nb = g.neighbors(u) & c.outer;
        for (int w = nb.first(); w >= 0; w = nb.next(w)) cross.push_back({u, w});
    }
    if (static_cast<int>(cross.size()) > max_cross_edges)
        throw std::runtime_error("mim_of_cut diagnostic limit: " + std::to_string(cross.size()) +
                                 " cross edges exceed " + std::to_string(max_cross_edges));
    int best = 0;
    std::vector<int> chosen;
    // Two chosen cross edges must not share endpoints nor be joined by a cross edge.
    auto compatible = [&](int i, int j) {
        const Edge& e = cross[i];
        const Edge& f = cross[j];
        if (e.a == f.a || e.b == f.b) return false;
        if (g.has_edge(e.a, f.b) || g.has_edge(f.a, e.b)) return false;
        return true;
    };
    auto rec = [&](auto&& self, int idx) -> void {
        best = std::max(best, static_cast<int>(chosen.size()));
        if (idx >= static_cast<int>(cross.size())) return;
        if (static_cast<int>(chosen.size() + cross.size() - idx) <= best) return;
        bool ok = true;
        for (int j : chosen)
            if (!compatible(idx, j)) {
                ok = false;
                break;
            }
        if (ok) {
            chosen.push_back(idx);
            self(self, idx + 1);
            chosen.pop_back();
        }
        self(self, idx + 1);
    };
    rec(rec, 0);
    return best;
}

inline int mimw_of_tree(const Graph& g, const DecompTree& t, int max_cross_edges = 24) {
    int best = 0;
    for (int id = 0; id < t.size(); ++id)
        best = std::max(best, mim_of_cut(g, t.cut_of(id), max_cross_edges));
    return best;
}

struct Interval {
    int vertex = 0; // 0-based
    double left = 0, right = 0;
};

// Lines `<vertex-id> <left> <right>`, 1-based vertex ids.
inline std::vector<Interval> load_intervals(std::istream& in, int n) {
    std::vector<Interval> out;
    std::vector<bool> seen(n, false);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok[0] == '#') continue;
        Interval iv;
        try {
            iv.vertex = std::stoi(tok) - 1;
        } catch (...) {
            throw ParseError("interval parse error at line " + std::to_string(lineno));
        }
        if (!(ls >> iv.left >> iv.right))
            throw ParseError("interval parse error at line " + std::to_string(lineno));
        if (iv.vertex < 0 || iv.vertex >= n)
            throw ParseError("interval parse error at line " + std::to_string(lineno) +
                             ": vertex out of range");
        if (seen[iv.vertex])
            throw ParseError("interval parse error at line " + std::to_string(lineno) +
                             ": duplicate vertex");
        seen[iv.vertex] = true;
        out.push_back(iv);
    }
    if (static_cast<int>(out.size()) != n)
        throw ParseError("interval file covers " + std::to_string(out.size()) + " of " +
                         std::to_string(n) + " vertices");
    return out;
}

// Sorting by left endpoint yields a mim-width-1 caterpillar order for
// interval graphs.
inline std::vector<int> interval_order(std::vector<Interval> ivs) {
    std::sort(ivs.begin(), ivs.end(), [](const Interval& a, const Interval& b) {
        if (a.left != b.left) return a.left < b.left;
        if (a.right != b.right) return a.right < b.right;
        return a.vertex < b.vertex;
    });
    std::vector<int> order;
    order.reserve(ivs.size());
    for (const auto& iv : ivs) order.push_back(iv.vertex);
    return order;
}

} // namespace mimsolve
