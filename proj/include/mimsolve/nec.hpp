#pragma once

#include "mimsolve/decomp.hpp"
#include "mimsolve/graph.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mimsolve {

using ClassId = int;
inline constexpr int max_tuple_colors = 16;

// d-neighbor-equivalence classes of the subsets of one side of a cut.
// Two subsets are equivalent when every vertex on the opposite side sees the
// same number of neighbors in both, counted up to the cap d. The signature of
// a class is that capped-count vector over the opposite side in vertex order.
class NecFamily {
public:
    struct Class {
        VertexSet rep;                  // canonical: first BFS discovery
        std::vector<std::uint8_t> sig;  // capped counts, one per opposite vertex
    };

    NecFamily() = default;

    // Breadth-first closure from the empty set: every discovered
    // representative is extended by each side vertex in id order, so class 0
    // is the class of the empty set and representatives are minimal-size.
    // max_classes = 0 means unlimited.
    static NecFamily enumerate(const Graph& g, const VertexSet& side, int d,
                               std::size_t max_classes = 0) {
        NecFamily f;
        f.g_ = &g;
        f.d_ = d;
        f.side_ = side;
        f.opposite_ = (VertexSet::full(g.n()) - side).to_vector();
        f.opp_pos_.assign(g.n(), -1);
        for (std::size_t i = 0; i < f.opposite_.size(); ++i) f.opp_pos_[f.opposite_[i]] = static_cast<int>(i);

        VertexSet empty(g.n());
        f.insert_class(empty, f.signature(empty));
        std::deque<ClassId> queue{0};
        std::vector<int> side_vec = side.to_vector();
        while (!queue.empty()) {
            ClassId c = queue.front();
            queue.pop_front();
            VertexSet base = f.classes_[c].rep; // copy: classes_ may reallocate
            for (int u : side_vec) {
                if (base.contains(u)) continue;
                VertexSet ext = base;
                ext.add(u);
                auto sig = f.signature(ext);
                if (f.index_.find(f.sig_key(sig)) == f.index_.end()) {
                    if (max_classes && f.classes_.size() >= max_classes)
                        throw BudgetError("neighbor-equivalence family exceeds " +
                                          std::to_string(max_classes) + " classes");
                    queue.push_back(f.insert_class(ext, std::move(sig)));
                }
            }
        }
        return f;
    }

    int size() const { return static_cast<int>(classes_.size()); }
    int d() const { return d_; }
    const VertexSet& side() const { return side_; }
    const std::vector<int>& opposite() const { return opposite_; }
    const VertexSet& rep(ClassId c) const { return classes_[c].rep; }
    const std::vector<std::uint8_t>& sig(ClassId c) const { return classes_[c].sig; }
    ClassId empty_class() const { return 0; }

    std::vector<std::uint8_t> signature(const VertexSet& s) const {
        std::vector<std::uint8_t> sig(opposite_.size());
        for (std::size_t i = 0; i < opposite_.size(); ++i) {
            int cnt = g_->neighbors(opposite_[i]).intersection_count(s);
            sig[i] = static_cast<std::uint8_t>(cnt > d_ ? d_ : cnt);
        }
        return sig;
    }

    ClassId classify(const VertexSet& s) const {
        auto it = index_.find(sig_key(signature(s)));
        if (it == index_.end())
            throw std::logic_error("nec: subset of the side has no class (family incomplete)");
        return it->second;
    }

    // Capped neighbor count of opposite-side vertex w inside class c.
    int neighbor_count(int w, ClassId c) const {
        int pos = opp_pos_[w];
        if (pos < 0) throw std::invalid_argument("vertex not on the opposite side");
        return classes_[c].sig[pos];
    }

private:
    ClassId insert_class(VertexSet rep, std::vector<std::uint8_t> sig) {
        ClassId id = static_cast<ClassId>(classes_.size());
        classes_.push_back({std::move(rep), std::move(sig)});
        index_.emplace(sig_key(classes_.back().sig), id);
        return id;
    }

    static std::string sig_key(const std::vector<std::uint8_t>& sig) {
        return std::string(reinterpret_cast<const char*>(sig.data()), sig.size());
    }

    const Graph* g_ = nullptr;
    int d_ = 1;
    VertexSet side_;
    std::vector<int> opposite_;
    std::vector<int> opp_pos_;
    std::vector<Class> classes_;
    std::unordered_map<std::string, ClassId> index_;
};

// q-tuple of scalar class ids drawn from one family.
struct ClassTuple {
    std::array<std::uint16_t, max_tuple_colors> c{};
    std::uint8_t q = 0;

    ClassId at(int j) const { return c[j]; }
    void set(int j, ClassId id) {
        if (id < 0 || id > 0xffff) throw std::overflow_error("class id exceeds tuple encoding");
        c[j] = static_cast<std::uint16_t>(id);
    }

    friend bool operator==(const ClassTuple& a, const ClassTuple& b) {
        if (a.q != b.q) return false;
        for (int j = 0; j < a.q; ++j)
            if (a.c[j] != b.c[j]) return false;
        return true;
    }
    friend bool operator<(const ClassTuple& a, const ClassTuple& b) {
        for (int j = 0; j < a.q; ++j)
            if (a.c[j] != b.c[j]) return a.c[j] < b.c[j];
        return false;
    }
    std::size_t hash() const {
        std::size_t h = 0x9e3779b97f4a7c15ull + q;
        for (int j = 0; j < q; ++j) h = (h ^ c[j]) * 0x100000001b3ull;
        return h;
    }
};

struct ClassTupleHash {
    std::size_t operator()(const ClassTuple& t) const { return t.hash(); }
};

using Partition = std::vector<VertexSet>; // q pairwise-disjoint sets

inline ClassTuple classify_tuple(const NecFamily& fam, const Partition& x) {
    ClassTuple t;
    t.q = static_cast<std::uint8_t>(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) t.set(static_cast<int>(j), fam.classify(x[j]));
    return t;
}

// Scalar class of the union of the tuple entries selected by C.
inline ClassId tuple_class_C(const NecFamily& fam, const ClassTuple& t, const std::vector<int>& colors) {
    VertexSet u(fam.side().universe());
    for (int j : colors) u |= fam.rep(t.at(j));
    return fam.classify(u);
}

// Class, in the coarse family, of the union of one class from each of two
// fine families whose sides partition the coarse side. Well-defined because
// the coarse relation only inspects vertices outside the coarse side.
inline ClassId class_union_classify(const NecFamily& coarse, const NecFamily& fa, ClassId ca,
                                    const NecFamily& fb, ClassId cb) {
    if (fa.side().intersects(fb.side()) || (fa.side() | fb.side()) != coarse.side())
        throw ValidationError("class_union_classify: fine sides do not partition the coarse side");
    return coarse.classify(fa.rep(ca) | fb.rep(cb));
}

// Families for both sides of every tree node, computed once up front.
struct FamilyCache {
    std::vector<NecFamily> inner; // indexed by node id, side = T_v
    std::vector<NecFamily> outer; // side = complement

    static FamilyCache build(const Graph& g, const DecompTree& t, int d,
                             std::size_t max_classes = 0) {
        FamilyCache fc;
        fc.inner.resize(t.size());
        fc.outer.resize(t.size());
        VertexSet all = VertexSet::full(g.n());
        for (int id = 0; id < t.size(); ++id) {
            fc.inner[id] = NecFamily::enumerate(g, t.inner(id), d, max_classes);
            fc.outer[id] = NecFamily::enumerate(g, all - t.inner(id), d, max_classes);
        }
        return fc;
    }
};

struct SnecStats {
    std::int64_t snec_scalar = 1;  // snec_d(T)
    std::int64_t snec_tuple = 1;   // snec_{d,q}(T) = snec_d(T)^q, saturating
};

inline SnecStats snec_stats(const FamilyCache& fc, int q) {
    SnecStats st;
    for (const auto& f : fc.inner) st.snec_scalar = std::max<std::int64_t>(st.snec_scalar, f.size());
    for (const auto& f : fc.outer) st.snec_scalar = std::max<std::int64_t>(st.snec_scalar, f.size());
    st.snec_tuple = 1;
    for (int j = 0; j < q; ++j) {
        if (st.snec_tuple > std::numeric_limits<std::int64_t>::max() / st.snec_scalar) {
            st.snec_tuple = std::numeric_limits<std::int64_t>::max();
            break;
        }
        st.snec_tuple *= st.snec_scalar;
    }
    return st;
}

} // namespace mimsolve
