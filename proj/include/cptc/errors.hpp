#pragma once

#include <stdexcept>
#include <string>

namespace cptc {

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg, int line = -1)
        : std::runtime_error(line >= 0 ? "parse error at line " + std::to_string(line) + ": " + msg
                                       : "parse error: " + msg),
          lineNumber(line) {}
    int lineNumber;
};

struct BoundsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DuplicateEntry : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyIndexSet : std::runtime_error {
    EmptyIndexSet() : std::runtime_error("index set must be nonempty") {}
};

struct FullIndexSet : std::runtime_error {
    FullIndexSet() : std::runtime_error("index set must be a proper subset of the modes") {}
};

struct ModeOutOfRange : std::runtime_error {
    explicit ModeOutOfRange(int mode, int d)
        : std::runtime_error("mode " + std::to_string(mode) + " out of range for order " + std::to_string(d)) {}
};

struct EmptyInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Assumption1Violated : std::runtime_error {
    explicit Assumption1Violated(int row)
        : std::runtime_error("assumption 1 violated at mode-d row " + std::to_string(row)), row(row) {}
    int row;
};

struct BasisNotObserved : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptySelection : std::runtime_error {
    EmptySelection() : std::runtime_error("slice selection must be nonempty") {}
};

struct InvalidEpsilon : std::runtime_error {
    InvalidEpsilon() : std::runtime_error("epsilon must lie in (0,1)") {}
};

struct OrderTooSmall : std::runtime_error {
    OrderTooSmall() : std::runtime_error("bound requires tensor order d > 2") {}
};

struct InvalidIsize : std::runtime_error {
    InvalidIsize() : std::runtime_error("|I| must satisfy 1 <= |I| < d") {}
};

struct SingularSystem : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FieldTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cptc
