#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

namespace mimsolve {

// Weight values live in a totally ordered commutative monoid whose maximum
// element (Error) absorbs under the combine operation and whose combine is
// monotone in the order. Three built-in instances cover the catalog:
//   minplus: (N ∪ {+inf}, <=, +), Error = +inf
//   maxplus: (N ∪ {-inf}, >=, +), Error = -inf
//   boolmax: ({0,1}, <=, max),    Error = 1
using Weight = std::int64_t;

enum class DomainKind { MinPlus, MaxPlus, BoolMax };

class WeightDomain {
public:
    WeightDomain() = default;
    explicit WeightDomain(DomainKind k) : kind_(k) {}

    DomainKind kind() const { return kind_; }

    Weight neutral() const { return 0; }

    Weight error() const {
        switch (kind_) {
        case DomainKind::MinPlus: return std::numeric_limits<Weight>::max();
        case DomainKind::MaxPlus: return std::numeric_limits<Weight>::min();
        case DomainKind::BoolMax: return 1;
        }
        return 0;
    }

    bool is_error(Weight w) const { return w == error(); }

    // Strict order a ≺ b. For maxplus the order is the reversed numeric one.
    bool less(Weight a, Weight b) const {
        if (kind_ == DomainKind::MaxPlus) return a > b;
        return a < b;
    }
    bool leq(Weight a, Weight b) const { return !less(b, a); }

    Weight min(Weight a, Weight b) const { return less(b, a) ? b : a; }

    Weight combine(Weight a, Weight b) const {
        if (is_error(a) || is_error(b)) return error();
        if (kind_ == DomainKind::BoolMax) return a > b ? a : b;
        Weight r;
        if (__builtin_add_overflow(a, b, &r) || is_error(r)) return error(); // saturate
        return r;
    }

    bool valid_element(Weight w) const {
        if (kind_ == DomainKind::BoolMax) return w == 0 || w == 1;
        return true;
    }

    std::string name() const {
        switch (kind_) {
        case DomainKind::MinPlus: return "minplus";
        case DomainKind::MaxPlus: return "maxplus";
        case DomainKind::BoolMax: return "boolmax";
        }
        return "?";
    }

    std::string to_string(Weight w) const {
        if (is_error(w)) return "error";
        return std::to_string(w);
    }

private:
    DomainKind kind_ = DomainKind::MinPlus;
};

inline WeightDomain domain_by_name(const std::string& name) {
    if (name == "minplus") return WeightDomain(DomainKind::MinPlus);
    if (name == "maxplus") return WeightDomain(DomainKind::MaxPlus);
    if (name == "boolmax") return WeightDomain(DomainKind::BoolMax);
    throw std::invalid_argument("unknown weight domain `" + name + "`");
}

struct DomainLawReport {
    bool ok = true;
    std::string violation; // first failing law, with the witnesses
};

// Checks the weight-set laws on every pair/triple drawn from the sample:
// commutativity, associativity, neutral identity, absorbing Error, Error
// maximality, and order-monotonicity of combine. Templated so tests can run
// it against deliberately broken domains.
template <class Domain>
DomainLawReport validate_domain_laws(const Domain& dom, std::span<const Weight> sample) {
    DomainLawReport rep;
    auto fail = [&](const std::string& msg) {
        rep.ok = false;
        rep.violation = msg;
        return rep;
    };
    const Weight e = dom.error();
    const Weight id = dom.neutral();
    for (Weight a : sample) {
        if (dom.combine(a, id) != a || dom.combine(id, a) != a)
            return fail("neutral is not an identity at " + std::to_string(a));
        if (dom.combine(a, e) != e || dom.combine(e, a) != e)
            return fail("Error does not absorb at " + std::to_string(a));
        if (dom.less(e, a))
            return fail("Error is not the maximum, exceeded by " + std::to_string(a));
        if (dom.less(a, a))
            return fail("order is not irreflexive at " + std::to_string(a));
    }
    for (Weight a : sample)
        for (Weight b : sample) {
            if (dom.combine(a, b) != dom.combine(b, a))
                return fail("combine not commutative at (" + std::to_string(a) + ", " +
                            std::to_string(b) + ")");
            if (dom.less(a, b) && dom.less(b, a))
                return fail("order not antisymmetric");
            if (dom.min(a, b) != dom.min(b, a))
                return fail("min not symmetric");
        }
    for (Weight a : sample)
        for (Weight b : sample)
            for (Weight c : sample) {
                if (dom.combine(dom.combine(a, b), c) != dom.combine(a, dom.combine(b, c)))
                    return fail("combine not associative at (" + std::to_string(a) + ", " +
                                std::to_string(b) + ", " + std::to_string(c) + ")");
                if (dom.leq(a, b) && !dom.leq(dom.combine(a, c), dom.combine(b, c)))
                    return fail("combine not monotone: " + std::to_string(a) + " <= " +
                                std::to_string(b) + " but not after combining " + std::to_string(c));
            }
    return rep;
}

} // namespace mimsolve
