#pragma once

#include <bit>
#include <cstdint>
#include <cstddef>
#include <functional>
#include <vector>

namespace mimsolve {

// Dense bit-indexed set over a fixed universe {0, ..., n-1}.
// Value type; all set operations require operands over the same universe.
// Universes up to 128 vertices live inline, larger ones spill to the heap.
class VertexSet {
    static constexpr std::uint32_t k_inline = 2;

public:
    VertexSet() = default;
    explicit VertexSet(int universe)
        : n_(universe), nw_(static_cast<std::uint32_t>((universe + 63) / 64)) {
        if (nw_ > k_inline) heap_.assign(nw_, 0);
    }

    static VertexSet full(int universe) {
        VertexSet s(universe);
        for (int v = 0; v < universe; ++v) s.add(v);
        return s;
    }

    int universe() const { return n_; }

    void add(int v) { words()[v >> 6] |= (std::uint64_t{1} << (v & 63)); }
    void remove(int v) { words()[v >> 6] &= ~(std::uint64_t{1} << (v & 63)); }
    bool contains(int v) const {
        if (v < 0 || v >= n_) return false;
        return (words()[v >> 6] >> (v & 63)) & 1;
    }

    int count() const {
        int c = 0;
        const std::uint64_t* w = words();
        for (std::uint32_t i = 0; i < nw_; ++i) c += std::popcount(w[i]);
        return c;
    }
    bool empty() const {
        const std::uint64_t* w = words();
        for (std::uint32_t i = 0; i < nw_; ++i)
            if (w[i]) return false;
        return true;
    }
    void clear() {
        std::uint64_t* w = words();
        for (std::uint32_t i = 0; i < nw_; ++i) w[i] = 0;
    }

    VertexSet& operator|=(const VertexSet& o) {
        std::uint64_t* w = words();
        const std::uint64_t* ow = o.words();
        for (std::uint32_t i = 0; i < nw_; ++i) w[i] |= ow[i];
        return *this;
    }
    VertexSet& operator&=(const VertexSet& o) {
        std::uint64_t* w = words();
        const std::uint64_t* ow = o.words();
        for (std::uint32_t i = 0; i < nw_; ++i) w[i] &= ow[i];
        return *this;
    }
    VertexSet& operator-=(const VertexSet& o) {
        std::uint64_t* w = words();
        const std::uint64_t* ow = o.words();
        for (std::uint32_t i = 0; i < nw_; ++i) w[i] &= ~ow[i];
        return *this;
    }

    friend VertexSet operator|(VertexSet a, const VertexSet& b) { a |= b; return a; }
    friend VertexSet operator&(VertexSet a, const VertexSet& b) { a &= b; return a; }
    friend VertexSet operator-(VertexSet a, const VertexSet& b) { a -= b; return a; }

    friend bool operator==(const VertexSet& a, const VertexSet& b) {
        if (a.n_ != b.n_) return false;
        const std::uint64_t* aw = a.words();
        const std::uint64_t* bw = b.words();
        for (std::uint32_t i = 0; i < a.nw_; ++i)
            if (aw[i] != bw[i]) return false;
        return true;
    }
    friend bool operator!=(const VertexSet& a, const VertexSet& b) { return !(a == b); }
    friend bool operator<(const VertexSet& a, const VertexSet& b) {
        const std::uint64_t* aw = a.words();
        const std::uint64_t* bw = b.words();
        std::uint32_t nw = a.nw_ < b.nw_ ? a.nw_ : b.nw_;
        for (std::uint32_t i = 0; i < nw; ++i)
            if (aw[i] != bw[i]) return aw[i] < bw[i];
        return a.nw_ < b.nw_;
    }

    bool intersects(const VertexSet& o) const {
        const std::uint64_t* w = words();
        const std::uint64_t* ow = o.words();
        for (std::uint32_t i = 0; i < nw_; ++i)
            if (w[i] & ow[i]) return true;
        return false;
    }
    bool is_subset_of(const VertexSet& o) const {
        const std::uint64_t* w = words();
        const std::uint64_t* ow = o.words();
        for (std::uint32_t i = 0; i < nw_; ++i)
            if (w[i] & ~ow[i]) return false;
        return true;
    }
    int intersection_count(const VertexSet& o) const {
        int c = 0;
        const std::uint64_t* w = words();
        const std::uint64_t* ow = o.words();
        for (std::uint32_t i = 0; i < nw_; ++i) c += std::popcount(w[i] & ow[i]);
        return c;
    }

    // First member, or -1 when empty.
    int first() const { return next(-1); }
    // Smallest member > v, or -1.
    int next(int v) const {
        std::uint32_t w = static_cast<std::uint32_t>(v + 1) >> 6;
        if (w >= nw_) return -1;
        const std::uint64_t* ws = words();
        std::uint64_t cur = ws[w] & (~std::uint64_t{0} << ((v + 1) & 63));
        while (true) {
            if (cur) return static_cast<int>((w << 6) + std::countr_zero(cur));
            if (++w >= nw_) return -1;
            cur = ws[w];
        }
    }

    std::vector<int> to_vector() const {
        std::vector<int> out;
        for (int v = first(); v >= 0; v = next(v)) out.push_back(v);
        return out;
    }

    template <class F>
    void for_each(F&& f) const {
        for (int v = first(); v >= 0; v = next(v)) f(v);
    }

    std::size_t hash() const {
        std::size_t h = 0xcbf29ce484222325ull;
        const std::uint64_t* w = words();
        for (std::uint32_t i = 0; i < nw_; ++i) {
            h ^= w[i];
            h *= 0x100000001b3ull;
        }
        return h;
    }

private:
    std::uint64_t* words() { return nw_ <= k_inline ? inline_ : heap_.data(); }
    const std::uint64_t* words() const { return nw_ <= k_inline ? inline_ : heap_.data(); }

    int n_ = 0;
    std::uint32_t nw_ = 0;
    std::uint64_t inline_[k_inline] = {0, 0};
    std::vector<std::uint64_t> heap_;
};

struct VertexSetHash {
    std::size_t operator()(const VertexSet& s) const { return s.hash(); }
};

} // namespace mimsolve
