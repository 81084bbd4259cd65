#pragma once

#include "mimsolve/weights.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

namespace mimsolve {

// Row-major bit matrix over GF(2).
class F2Matrix {
public:
    F2Matrix() = default;
    explicit F2Matrix(std::size_t cols) : cols_(cols), words_((cols + 63) / 64) {}

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }

    std::size_t add_row() {
        rows_.emplace_back(words_, 0);
        return rows_.size() - 1;
    }

    void set(std::size_t r, std::size_t c) { rows_[r][c >> 6] |= std::uint64_t{1} << (c & 63); }
    bool get(std::size_t r, std::size_t c) const {
        return (rows_[r][c >> 6] >> (c & 63)) & 1;
    }

    bool row_zero(std::size_t r) const {
        for (auto w : rows_[r])
            if (w) return false;
        return true;
    }

    void xor_into(std::vector<std::uint64_t>& acc, std::size_t r) const {
        for (std::size_t i = 0; i < words_; ++i) acc[i] ^= rows_[r][i];
    }

    const std::vector<std::uint64_t>& row(std::size_t r) const { return rows_[r]; }

    F2Matrix multiplied_by(const F2Matrix& other) const {
        F2Matrix out(other.cols());
        for (std::size_t r = 0; r < rows(); ++r) {
            std::size_t id = out.add_row();
            for (std::size_t j = 0; j < cols_; ++j)
                if (get(r, j)) out.rows_[id] = xor_words(out.rows_[id], other.rows_[j]);
        }
        return out;
    }

    friend bool operator==(const F2Matrix& a, const F2Matrix& b) {
        return a.cols_ == b.cols_ && a.rows_ == b.rows_;
    }

private:
    static std::vector<std::uint64_t> xor_words(std::vector<std::uint64_t> a,
                                                const std::vector<std::uint64_t>& b) {
        for (std::size_t i = 0; i < a.size(); ++i) a[i] ^= b[i];
        return a;
    }

    std::size_t cols_ = 0;
    std::size_t words_ = 0;
    std::vector<std::vector<std::uint64_t>> rows_;
};

// Greedy minimum-weight row basis: visit rows in ascending weight order
// (stable on ties, Error weights last because Error is the order maximum)
// and keep each row that is independent of the rows already kept. Matroid
// exchange makes the greedy choice optimal. Returns original row indices in
// ascending order.
inline std::vector<std::size_t> min_weight_basis(const F2Matrix& m, std::span<const Weight> weights,
                                                 const WeightDomain& dom) {
    std::vector<std::size_t> order(m.rows());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return dom.less(weights[a], weights[b]);
    });

    struct Pivot {
        std::size_t col;
        std::vector<std::uint64_t> bits;
    };
    std::vector<Pivot> pivots;
    std::vector<std::size_t> kept;
    for (std::size_t r : order) {
        std::vector<std::uint64_t> acc = m.row(r);
        for (const Pivot& p : pivots) {
            if ((acc[p.col >> 6] >> (p.col & 63)) & 1)
                for (std::size_t i = 0; i < acc.size(); ++i) acc[i] ^= p.bits[i];
        }
        std::size_t lead = acc.size();
        for (std::size_t i = 0; i < acc.size(); ++i)
            if (acc[i]) {
                lead = i;
                break;
            }
        if (lead == acc.size()) continue; // dependent
        std::size_t col = (lead << 6) + static_cast<std::size_t>(std::countr_zero(acc[lead]));
        pivots.push_back({col, std::move(acc)});
        kept.push_back(r);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

} // namespace mimsolve
