#include "doctest.h"

#include "mimsolve/gen.hpp"
#include "mimsolve/weights.hpp"

#include <vector>

using namespace mimsolve;

TEST_CASE("domain basics") {
    WeightDomain minplus(DomainKind::MinPlus);
    CHECK(minplus.combine(2, 3) == 5);
    CHECK(minplus.min(2, 3) == 2);
    CHECK(minplus.is_error(minplus.combine(1, minplus.error())));

    WeightDomain maxplus(DomainKind::MaxPlus);
    CHECK(maxplus.min(2, 3) == 3); // the order is reversed
    CHECK(maxplus.less(5, 1));
    CHECK(maxplus.is_error(maxplus.combine(maxplus.error(), 7)));

    WeightDomain boolmax(DomainKind::BoolMax);
    CHECK(boolmax.error() == 1);
    CHECK(boolmax.combine(0, 1) == 1);
    CHECK(boolmax.combine(0, 0) == 0);
    CHECK(boolmax.valid_element(1));
    CHECK_FALSE(boolmax.valid_element(2));
}

TEST_CASE("built-in domains satisfy the laws") {
    WeightDomain minplus(DomainKind::MinPlus);
    std::vector<Weight> s1{0, 1, 5, minplus.error()};
    CHECK(validate_domain_laws(minplus, s1).ok);

    WeightDomain maxplus(DomainKind::MaxPlus);
    std::vector<Weight> s2{maxplus.error(), 0, 3};
    CHECK(validate_domain_laws(maxplus, s2).ok);

    WeightDomain boolmax(DomainKind::BoolMax);
    std::vector<Weight> s3{0, 1};
    CHECK(validate_domain_laws(boolmax, s3).ok);
}

TEST_CASE("built-in domains pass on random samples") {
    for (int trial = 0; trial < 100; ++trial) {
        Rng rng(42 + trial);
        for (DomainKind kind : {DomainKind::MinPlus, DomainKind::MaxPlus, DomainKind::BoolMax}) {
            WeightDomain dom(kind);
            std::vector<Weight> sample;
            for (int i = 0; i < 6; ++i) {
                if (kind == DomainKind::BoolMax) sample.push_back(static_cast<Weight>(rng.below(2)));
                else sample.push_back(static_cast<Weight>(rng.below(1000)));
            }
            sample.push_back(dom.error());
            auto rep = validate_domain_laws(dom, sample);
            CHECK_MESSAGE(rep.ok, rep.violation);
        }
    }
}

// Addition mod 7 is commutative and associative but not order-monotone.
struct Mod7Domain {
    Weight neutral() const { return 0; }
    Weight error() const { return 100; }
    bool is_error(Weight w) const { return w == 100; }
    bool less(Weight a, Weight b) const { return a < b; }
    bool leq(Weight a, Weight b) const { return a <= b; }
    Weight min(Weight a, Weight b) const { return a < b ? a : b; }
    Weight combine(Weight a, Weight b) const {
        if (is_error(a) || is_error(b)) return error();
        return (a + b) % 7;
    }
};

TEST_CASE("a broken domain is reported with the violated law") {
    Mod7Domain bad;
    std::vector<Weight> sample{0, 1, 2, 5, 6, 100};
    auto rep = validate_domain_laws(bad, sample);
    CHECK_FALSE(rep.ok);
    CHECK(rep.violation.find("monotone") != std::string::npos);
}
