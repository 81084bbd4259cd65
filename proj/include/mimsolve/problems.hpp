#pragma once

#include "mimsolve/errors.hpp"
#include "mimsolve/weights.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace mimsolve {

inline constexpr int max_colors = 16;

// Admissible tuples of color-class sizes. Explicit tuples are checked by
// membership, predicates are evaluated per tuple at the root of the DP.
struct SizeConstraintSet {
    enum class Kind { All, Explicit, Predicate };

    Kind kind = Kind::All;
    std::set<std::vector<int>> tuples;
    std::string predicate_name;
    std::function<bool(std::span<const int>)> predicate;

    static SizeConstraintSet all() { return {}; }
    static SizeConstraintSet explicit_tuples(std::set<std::vector<int>> ts) {
        SizeConstraintSet s;
        s.kind = Kind::Explicit;
        s.tuples = std::move(ts);
        return s;
    }
    static SizeConstraintSet named_predicate(std::string name,
                                             std::function<bool(std::span<const int>)> p) {
        SizeConstraintSet s;
        s.kind = Kind::Predicate;
        s.predicate_name = std::move(name);
        s.predicate = std::move(p);
        return s;
    }

    bool active() const { return kind != Kind::All; }

    bool admits(std::span<const int> k) const {
        switch (kind) {
        case Kind::All: return true;
        case Kind::Explicit: return tuples.count(std::vector<int>(k.begin(), k.end())) > 0;
        case Kind::Predicate: return predicate(k);
        }
        return true;
    }
};

// A d-stable locally checkable problem instance description: colors, the
// check/weight tables over capped count vectors, size constraints and
// connectivity constraints. Tables are indexed only by capped counts, which
// makes d-stability structural.
class ProblemSpec {
public:
    std::string name;
    int q = 0;
    int d = 0;
    std::vector<std::string> color_names;
    WeightDomain domain;
    SizeConstraintSet sizes;
    std::vector<std::vector<int>> connectivity; // 0-based color index subsets, each sorted

    std::vector<std::uint8_t> check_table; // q * (d+1)^q entries
    std::vector<Weight> weight_table;

    // per-vertex variation
    std::unordered_map<int, std::uint32_t> allowed_colors; // vertex -> color bitmask
    std::unordered_map<std::int64_t, Weight> vertex_weight_override; // (v*q+color) -> weight

    int stride() const {
        int s = 1;
        for (int j = 0; j < q; ++j) s *= d + 1;
        return s;
    }

    std::size_t table_index(int color, std::span<const std::uint8_t> k) const {
        std::size_t idx = 0, mul = 1;
        for (int j = 0; j < q; ++j) {
            idx += static_cast<std::size_t>(k[j]) * mul;
            mul *= d + 1;
        }
        return static_cast<std::size_t>(color) * mul + idx;
    }

    bool color_allowed(int v, int color) const {
        auto it = allowed_colors.find(v);
        if (it == allowed_colors.end()) return true;
        return (it->second >> color) & 1u;
    }

    bool check_eval(int v, int color, std::span<const std::uint8_t> k) const {
        if (color < 0 || color >= q) throw std::out_of_range("color index out of range");
        if (!color_allowed(v, color)) return false;
        return check_table[table_index(color, k)] != 0;
    }

    Weight weight_eval(int v, int color, std::span<const std::uint8_t> k) const {
        if (color < 0 || color >= q) throw std::out_of_range("color index out of range");
        auto it = vertex_weight_override.find(static_cast<std::int64_t>(v) * q + color);
        if (it != vertex_weight_override.end()) return it->second;
        return weight_table[table_index(color, k)];
    }

    int color_index(const std::string& cname) const {
        for (int j = 0; j < q; ++j)
            if (color_names[j] == cname) return j;
        throw std::invalid_argument("unknown color `" + cname + "`");
    }

    // Fills both tables by evaluating formulas on every capped count vector.
    template <class CheckF, class WeightF>
    void fill_tables(CheckF&& check, WeightF&& weight) {
        std::size_t rows = static_cast<std::size_t>(q) * stride();
        check_table.assign(rows, 0);
        weight_table.assign(rows, domain.neutral());
        std::vector<std::uint8_t> k(q, 0);
        while (true) {
            for (int a = 0; a < q; ++a) {
                std::size_t idx = table_index(a, k);
                check_table[idx] = check(a, std::span<const std::uint8_t>(k)) ? 1 : 0;
                weight_table[idx] = weight(a, std::span<const std::uint8_t>(k));
            }
            int j = 0;
            while (j < q && k[j] == d) k[j++] = 0;
            if (j == q) break;
            ++k[j];
        }
    }
};

namespace detail {

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

inline int param(const std::map<std::string, int>& params, const std::string& key, int dflt = -1) {
    auto it = params.find(key);
    if (it != params.end()) return it->second;
    require(dflt >= 0, "missing required parameter `" + key + "`");
    return dflt;
}

} // namespace detail

struct CatalogEntry {
    std::string name;
    std::string params; // human-readable parameter summary
    std::string summary;
};

inline std::vector<CatalogEntry> catalog_list() {
    return {
        {"mis", "", "maximum independent set; q=2, d=1, maxplus"},
        {"dominating-set", "", "minimum dominating set; q=2, d=1, minplus"},
        {"connected-dominating-set", "", "minimum connected dominating set; q=2, d=1, minplus, C={{S}}"},
        {"equitable", "q", "equitable q-coloring; d=1, boolmax, explicit size tuples floor/ceil(n/q)"},
        {"k-roman", "k", "[k]-Roman domination; q=k+2, d=k, minplus"},
        {"cfon-star", "k", "conflict-free open-neighborhood coloring with color 0; q=k+1, d=2, boolmax"},
        {"cfcn-star", "k", "conflict-free closed-neighborhood coloring with color 0; q=k+1, d=2, boolmax"},
        {"cfon", "k", "conflict-free open-neighborhood k-coloring; q=k, d=2, boolmax"},
        {"cfcn", "k", "conflict-free closed-neighborhood k-coloring; q=k, d=2, boolmax"},
        {"b-coloring", "k", "b-coloring with k colors; q=2k, d=1, boolmax, K(-a)>=1 sizes"},
    };
}

// Built-in problem catalog. `n` is the vertex count of the target graph;
// only problems with explicit size constraints use it.
inline ProblemSpec catalog(const std::string& name, const std::map<std::string, int>& params,
                           int n) {
    using detail::param;
    using detail::require;
    ProblemSpec s;
    s.name = name;

    auto subset_problem = [&](bool connected) {
        s.q = 2;
        s.d = 1;
        s.color_names = {"S", "~S"};
        s.fill_tables(
            [&](int a, std::span<const std::uint8_t> k) {
                if (name == "mis") return a == 1 || k[0] == 0;
                return a == 0 || k[0] >= 1; // domination
            },
            [&](int a, std::span<const std::uint8_t>) -> Weight { return a == 0 ? 1 : 0; });
        if (connected) s.connectivity = {{0}};
    };

    if (name == "mis") {
        s.domain = WeightDomain(DomainKind::MaxPlus);
        subset_problem(false);
    } else if (name == "dominating-set") {
        s.domain = WeightDomain(DomainKind::MinPlus);
        subset_problem(false);
    } else if (name == "connected-dominating-set") {
        s.domain = WeightDomain(DomainKind::MinPlus);
        subset_problem(true);
    } else if (name == "equitable") {
        int q = param(params, "q");
        require(q >= 1 && q <= max_colors, "equitable: q out of range");
        s.q = q;
        s.d = 1;
        s.domain = WeightDomain(DomainKind::BoolMax);
        for (int j = 1; j <= q; ++j) s.color_names.push_back(std::to_string(j));
        s.fill_tables([&](int a, std::span<const std::uint8_t> k) { return k[a] == 0; },
                      [&](int, std::span<const std::uint8_t>) -> Weight { return 0; });
        int lo = n / q, hi = (n + q - 1) / q;
        std::set<std::vector<int>> tuples;
        std::vector<int> t(q, lo);
        for (std::uint32_t mask = 0; mask < (1u << q); ++mask) {
            int sum = 0;
            for (int j = 0; j < q; ++j) {
                t[j] = ((mask >> j) & 1u) ? hi : lo;
                sum += t[j];
            }
            if (sum == n) tuples.insert(t);
        }
        s.sizes = SizeConstraintSet::explicit_tuples(std::move(tuples));
    } else if (name == "k-roman") {
        int k = param(params, "k");
        require(k >= 1 && k + 2 <= max_colors, "k-roman: k out of range");
        s.q = k + 2;
        s.d = k;
        s.domain = WeightDomain(DomainKind::MinPlus);
        for (int j = 0; j <= k + 1; ++j) s.color_names.push_back(std::to_string(j));
        // label value of color index j is j itself
        s.fill_tables(
            [&](int a, std::span<const std::uint8_t> cnt) {
                long lhs = a, rhs = k;
                for (int j = 0; j < s.q; ++j) {
                    lhs += static_cast<long>(j) * cnt[j];
                    if (j >= 1) rhs += cnt[j];
                }
                return lhs >= rhs;
            },
            [&](int a, std::span<const std::uint8_t>) -> Weight { return a; });
    } else if (name == "cfon-star" || name == "cfcn-star" || name == "cfon" || name == "cfcn") {
        int k = param(params, "k");
        bool star = name == "cfon-star" || name == "cfcn-star";
        bool closed = name == "cfcn-star" || name == "cfcn";
        require(k >= 1 && k + (star ? 1 : 0) <= max_colors, name + ": k out of range");
        s.q = star ? k + 1 : k;
        s.d = 2;
        s.domain = WeightDomain(DomainKind::BoolMax);
        for (int j = star ? 0 : 1; j <= k; ++j) s.color_names.push_back(std::to_string(j));
        int first_real = star ? 1 : 0; // color "0" never counts as conflict-free
        s.fill_tables(
            [&](int a, std::span<const std::uint8_t> cnt) {
                for (int j = first_real; j < s.q; ++j) {
                    int occ = cnt[j] + (closed && a == j ? 1 : 0);
                    if (occ == 1) return true;
                }
                return false;
            },
            [&](int, std::span<const std::uint8_t>) -> Weight { return 0; });
    } else if (name == "b-coloring") {
        int k = param(params, "k");
        require(k >= 1 && 2 * k <= max_colors, "b-coloring: k out of range");
        s.q = 2 * k;
        s.d = 1;
        s.domain = WeightDomain(DomainKind::BoolMax);
        // color index i < k is "-(k-i)", index i >= k is "(i-k+1)"
        for (int i = 0; i < 2 * k; ++i)
            s.color_names.push_back(i < k ? "-" + std::to_string(k - i) : std::to_string(i - k + 1));
        auto plus_idx = [k](int val) { return k + val - 1; };
        auto minus_idx = [k](int val) { return k - val; };
        s.fill_tables(
            [&](int a, std::span<const std::uint8_t> cnt) {
                int val = a < k ? k - a : a - k + 1;
                bool negative = a < k;
                if (cnt[plus_idx(val)] + cnt[minus_idx(val)] != 0) return false;
                if (!negative) return true;
                for (int i = 1; i <= k; ++i) {
                    if (i == val) continue;
                    if (cnt[plus_idx(i)] + cnt[minus_idx(i)] < 1) return false;
                }
                return true;
            },
            [&](int, std::span<const std::uint8_t>) -> Weight { return 0; });
        s.sizes = SizeConstraintSet::named_predicate(
            "b-coloring-negatives", [k](std::span<const int> kk) {
                for (int i = 0; i < k; ++i)
                    if (kk[i] < 1) return false;
                return true;
            });
    } else {
        throw std::invalid_argument("unknown catalog problem `" + name + "`");
    }
    return s;
}

// Parses "name" or "name:k=2" or "name:2" (bare value binds to the entry's
// single documented parameter).
inline ProblemSpec catalog_parse(const std::string& desc, int n) {
    auto colon = desc.find(':');
    std::string name = desc.substr(0, colon);
    std::map<std::string, int> params;
    if (colon != std::string::npos) {
        std::string rest = desc.substr(colon + 1);
        std::istringstream ss(rest);
        std::string item;
        while (std::getline(ss, item, ',')) {
            auto eq = item.find('=');
            if (eq == std::string::npos) {
                std::string key = "k";
                for (const auto& e : catalog_list())
                    if (e.name == name && !e.params.empty()) key = e.params;
                params[key] = std::stoi(item);
            } else {
                params[item.substr(0, eq)] = std::stoi(item.substr(eq + 1));
            }
        }
    }
    return catalog(name, params, n);
}

// ---------------------------------------------------------------------------
// Problem-definition files
//
//   q <int>                 d <int>
//   domain minplus|maxplus|boolmax
//   colors <name...>        (optional; defaults to 1..q)
//   check <color> <k_1> ... <k_q> <0|1>
//   check default <0|1>
//   weight <color> <k_1> ... <k_q> <value|error>
//   weight default <value|error>
//   allow <vertex> <color...>
//   vweight <vertex> <color> <value>
//   sizes all | sizes explicit <K_1,..,K_q> ... | sizes predicate <name>
//   connect <color...>
// ---------------------------------------------------------------------------

inline ProblemSpec load_problem_file(std::istream& in,
                                     std::size_t table_budget = 1'000'000) {
    ProblemSpec s;
    s.name = "file";
    s.domain = WeightDomain(DomainKind::MinPlus);
    bool have_q = false, have_d = false;
    std::vector<char> check_set, weight_set;
    bool check_default_set = false, weight_default_set = false;
    std::uint8_t check_default = 0;
    Weight weight_default = 0;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw ParseErrorAt(lineno, msg);
    };

    struct Deferred {
        int lineno;
        std::string line;
    };
    std::vector<Deferred> rows; // check/weight/allow/vweight/connect need q,d,colors first

    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key) || key[0] == '#') continue;
        if (key == "q") {
            if (!(ls >> s.q) || s.q < 1 || s.q > max_colors) fail("bad q");
            have_q = true;
        } else if (key == "d") {
            if (!(ls >> s.d) || s.d < 1) fail("bad d (must be >= 1)");
            have_d = true;
        } else if (key == "domain") {
            std::string dn;
            if (!(ls >> dn)) fail("missing domain name");
            s.domain = domain_by_name(dn);
        } else if (key == "colors") {
            s.color_names.clear();
            std::string c;
            while (ls >> c) s.color_names.push_back(c);
        } else {
            rows.push_back({lineno, line});
        }
    }
    if (!have_q) throw ParseErrorAt(0, "missing `q`");
    if (!have_d) throw ParseErrorAt(0, "missing `d`");
    if (s.color_names.empty())
        for (int j = 1; j <= s.q; ++j) s.color_names.push_back(std::to_string(j));
    if (static_cast<int>(s.color_names.size()) != s.q) throw ParseErrorAt(0, "colors list length != q");

    std::size_t rows_needed = static_cast<std::size_t>(s.q);
    for (int j = 0; j < s.q; ++j) {
        rows_needed *= static_cast<std::size_t>(s.d + 1);
        if (rows_needed > table_budget)
            throw ParseErrorAt(0, "table size q*(d+1)^q exceeds budget of " +
                                      std::to_string(table_budget) + " rows");
    }
    s.check_table.assign(rows_needed, 0);
    s.weight_table.assign(rows_needed, s.domain.neutral());
    check_set.assign(rows_needed, 0);
    weight_set.assign(rows_needed, 0);

    auto parse_weight_value = [&](const std::string& tok) -> Weight {
        if (tok == "error" || tok == "inf") return s.domain.error();
        try {
            return static_cast<Weight>(std::stoll(tok));
        } catch (...) {
            fail("bad weight value `" + tok + "`");
            return 0;
        }
    };

    for (const auto& row : rows) {
        lineno = row.lineno;
        std::istringstream ls(row.line);
        std::string key;
        ls >> key;
        if (key == "check" || key == "weight") {
            std::string first;
            if (!(ls >> first)) fail("truncated row");
            if (first == "default") {
                std::string val;
                if (!(ls >> val)) fail("missing default value");
                if (key == "check") {
                    if (val != "0" && val != "1") fail("check default must be 0 or 1");
                    check_default = static_cast<std::uint8_t>(val == "1");
                    check_default_set = true;
                } else {
                    weight_default = parse_weight_value(val);
                    weight_default_set = true;
                }
                continue;
            }
            int color = -1;
            try {
                color = s.color_index(first);
            } catch (...) {
                fail("unknown color `" + first + "`");
            }
            std::vector<std::uint8_t> k(s.q);
            for (int j = 0; j < s.q; ++j) {
                int x;
                if (!(ls >> x)) fail("row needs q count entries");
                if (x < 0 || x > s.d) fail("count entry out of range 0.." + std::to_string(s.d));
                k[j] = static_cast<std::uint8_t>(x);
            }
            std::string val;
            if (!(ls >> val)) fail("missing row value");
            std::size_t idx = s.table_index(color, k);
            if (key == "check") {
                if (val != "0" && val != "1") fail("check value must be 0 or 1");
                s.check_table[idx] = static_cast<std::uint8_t>(val == "1");
                check_set[idx] = 1;
            } else {
                Weight w = parse_weight_value(val);
                if (!s.domain.valid_element(w)) fail("weight value outside domain");
                s.weight_table[idx] = w;
                weight_set[idx] = 1;
            }
        } else if (key == "allow") {
            int v;
            if (!(ls >> v) || v < 1) fail("allow needs a 1-based vertex id");
            std::uint32_t mask = 0;
            std::string c;
            while (ls >> c) mask |= 1u << s.color_index(c);
            if (mask == 0) fail("allow lists no colors");
            s.allowed_colors[v - 1] = mask;
        } else if (key == "vweight") {
            int v;
            std::string c, val;
            if (!(ls >> v >> c >> val) || v < 1) fail("vweight needs `<vertex> <color> <value>`");
            s.vertex_weight_override[static_cast<std::int64_t>(v - 1) * s.q + s.color_index(c)] =
                parse_weight_value(val);
        } else if (key == "sizes") {
            std::string kind;
            if (!(ls >> kind)) fail("sizes needs a kind");
            if (kind == "all") {
                s.sizes = SizeConstraintSet::all();
            } else if (kind == "explicit") {
                std::set<std::vector<int>> tuples;
                std::string tup;
                while (ls >> tup) {
                    std::vector<int> t;
                    std::istringstream ts(tup);
                    std::string item;
                    while (std::getline(ts, item, ',')) t.push_back(std::stoi(item));
                    if (static_cast<int>(t.size()) != s.q) fail("size tuple arity != q");
                    tuples.insert(std::move(t));
                }
                s.sizes = SizeConstraintSet::explicit_tuples(std::move(tuples));
            } else if (kind == "predicate") {
                std::string pname;
                if (!(ls >> pname)) fail("sizes predicate needs a name");
                if (pname == "b-coloring-negatives") {
                    int half = s.q / 2;
                    s.sizes = SizeConstraintSet::named_predicate(
                        pname, [half](std::span<const int> kk) {
                            for (int i = 0; i < half; ++i)
                                if (kk[i] < 1) return false;
                            return true;
                        });
                } else {
                    fail("unknown size predicate `" + pname + "`");
                }
            } else {
                fail("sizes kind must be all/explicit/predicate");
            }
        } else if (key == "connect") {
            std::vector<int> c;
            std::string cn;
            while (ls >> cn) c.push_back(s.color_index(cn));
            if (c.empty()) fail("connect lists no colors");
            std::sort(c.begin(), c.end());
            c.erase(std::unique(c.begin(), c.end()), c.end());
            s.connectivity.push_back(std::move(c));
        } else {
            fail("unknown directive `" + key + "`");
        }
    }

    for (std::size_t i = 0; i < rows_needed; ++i) {
        if (!check_set[i]) {
            if (!check_default_set) {
                // reconstruct (color, counts) for the message
                std::size_t stride = rows_needed / s.q;
                int color = static_cast<int>(i / stride);
                std::size_t rest = i % stride;
                std::string counts;
                for (int j = 0; j < s.q; ++j) {
                    counts += (j ? "," : "") + std::to_string(rest % (s.d + 1));
                    rest /= s.d + 1;
                }
                throw ParseErrorAt(0, "missing check row for color `" + s.color_names[color] +
                                          "` counts (" + counts + ") and no default declared");
            }
            s.check_table[i] = check_default;
        }
        if (!weight_set[i]) {
            if (weight_default_set) s.weight_table[i] = weight_default;
            // otherwise neutral, which is a sensible default for weights
        }
    }
    return s;
}

inline ProblemSpec load_problem_file(const std::string& text, std::size_t table_budget = 1'000'000) {
    std::istringstream in(text);
    return load_problem_file(in, table_budget);
}

} // namespace mimsolve
