#pragma once

#include <stdexcept>
#include <string>

namespace mimsolve {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a configured resource cap (table keys, pool size, brute-force
// enumeration budget) would be exceeded; callers map it to a distinct exit code.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline ParseError ParseErrorAt(int line, const std::string& msg) {
    if (line <= 0) return ParseError("parse error: " + msg);
    return ParseError("parse error at line " + std::to_string(line) + ": " + msg);
}

} // namespace mimsolve
