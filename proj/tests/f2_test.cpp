#include "doctest.h"

#include "mimsolve/f2.hpp"
#include "mimsolve/gen.hpp"

using namespace mimsolve;

namespace {
F2Matrix from_rows(std::size_t cols, const std::vector<std::vector<int>>& bits) {
    F2Matrix m(cols);
    for (const auto& row : bits) {
        std::size_t r = m.add_row();
        for (std::size_t c = 0; c < row.size(); ++c)
            if (row[c]) m.set(r, c);
    }
    return m;
}

std::size_t rank_of(const F2Matrix& m, const std::vector<std::size_t>& rows) {
    std::vector<std::vector<std::uint64_t>> basis;
    std::size_t rank = 0;
    for (std::size_t r : rows) {
        auto acc = m.row(r);
        for (const auto& b : basis) {
            // reduce by the leading bit of b
            std::size_t lead = 0;
            while (lead < b.size() && !b[lead]) ++lead;
            if (lead == b.size()) continue;
            std::size_t bit = (lead << 6) + std::countr_zero(b[lead]);
            if ((acc[bit >> 6] >> (bit & 63)) & 1)
                for (std::size_t i = 0; i < acc.size(); ++i) acc[i] ^= b[i];
        }
        bool zero = true;
        for (auto w : acc) zero = zero && !w;
        if (!zero) {
            basis.push_back(acc);
            ++rank;
        }
    }
    return rank;
}
} // namespace

TEST_CASE("min_weight_basis keeps the cheap spanning rows") {
    WeightDomain dom(DomainKind::MinPlus);
    F2Matrix m = from_rows(2, {{1, 0}, {0, 1}, {1, 1}});
    std::vector<Weight> w{1, 2, 3};
    CHECK(min_weight_basis(m, w, dom) == std::vector<std::size_t>{0, 1});
}

TEST_CASE("min_weight_basis drops the heavier duplicate") {
    WeightDomain dom(DomainKind::MinPlus);
    F2Matrix m = from_rows(2, {{1, 1}, {1, 1}});
    std::vector<Weight> w{4, 1};
    CHECK(min_weight_basis(m, w, dom) == std::vector<std::size_t>{1});
}

TEST_CASE("all-zero rows give an empty basis") {
    WeightDomain dom(DomainKind::MinPlus);
    F2Matrix m = from_rows(3, {{0, 0, 0}, {0, 0, 0}});
    std::vector<Weight> w{1, 2};
    CHECK(min_weight_basis(m, w, dom).empty());
}

TEST_CASE("error weights sort last but are kept when needed") {
    WeightDomain dom(DomainKind::MinPlus);
    F2Matrix m = from_rows(2, {{1, 0}, {0, 1}});
    std::vector<Weight> w{dom.error(), 3};
    auto basis = min_weight_basis(m, w, dom);
    CHECK(basis == std::vector<std::size_t>{0, 1}); // both needed to span
}

TEST_CASE("greedy basis is minimum weight against exhaustive search") {
    WeightDomain dom(DomainKind::MinPlus);
    for (int trial = 0; trial < 60; ++trial) {
        Rng rng(4000 + trial);
        std::size_t rows = 2 + rng.below(7);
        std::size_t cols = 1 + rng.below(6);
        F2Matrix m(cols);
        std::vector<Weight> w;
        for (std::size_t r = 0; r < rows; ++r) {
            m.add_row();
            for (std::size_t c = 0; c < cols; ++c)
                if (rng.below(2)) m.set(r, c);
            w.push_back(static_cast<Weight>(rng.below(20)));
        }
        auto greedy = min_weight_basis(m, w, dom);
        std::vector<std::size_t> all(rows);
        std::iota(all.begin(), all.end(), 0);
        std::size_t full_rank = rank_of(m, all);
        CHECK(greedy.size() == full_rank);
        // every original row reduces to zero against the kept ones
        CHECK(rank_of(m, greedy) == full_rank);
        Weight greedy_total = 0;
        for (std::size_t r : greedy) greedy_total += w[r];
        // exhaustive minimum over all spanning independent subsets
        Weight best = std::numeric_limits<Weight>::max();
        for (std::uint32_t mask = 0; mask < (1u << rows); ++mask) {
            std::vector<std::size_t> subset;
            Weight total = 0;
            for (std::size_t r = 0; r < rows; ++r)
                if ((mask >> r) & 1) {
                    subset.push_back(r);
                    total += w[r];
                }
            if (subset.size() != full_rank) continue;
            if (rank_of(m, subset) != full_rank) continue;
            best = std::min(best, total);
        }
        CHECK(greedy_total == best);
    }
}

TEST_CASE("matrix multiply over GF(2)") {
    F2Matrix a = from_rows(2, {{1, 1}, {0, 1}});
    F2Matrix b = from_rows(3, {{1, 0, 1}, {0, 1, 1}});
    F2Matrix c = a.multiplied_by(b);
    F2Matrix expect = from_rows(3, {{1, 1, 0}, {0, 1, 1}});
    CHECK(c == expect);
}
