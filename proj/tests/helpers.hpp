#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <vector>

#include "cptc/constraint.hpp"
#include "cptc/pattern.hpp"

namespace cptc::testing {

// 2x2x2 rank-1 pattern with four observed entries; the smallest instance
// where the unobserved entries are pinned down by products of the observed
// ones.
inline SamplingPattern motivatingPattern() {
    return SamplingPattern({2, 2, 2}, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
}

// 3x3x3 rank-2 pattern with 9 observed entries, 4/3/2 per mode-3 row.
inline SamplingPattern example1Pattern() {
    return SamplingPattern({3, 3, 3}, {{0, 0, 0},
                                       {0, 1, 0},
                                       {1, 2, 0},
                                       {2, 2, 0},
                                       {0, 0, 1},
                                       {1, 0, 1},
                                       {2, 1, 1},
                                       {0, 2, 2},
                                       {2, 1, 2}});
}

// The published basis choice for example1Pattern at r=2 (not the
// lexicographic default).
inline BasisChoice example1Basis() {
    BasisChoice b;
    b.perRow = {{{1, 2, 0}, {2, 2, 0}}, {{0, 0, 1}, {1, 0, 1}}, {{0, 2, 2}, {2, 1, 2}}};
    return b;
}

// Expected nonzero set of the constraint tensor for example1Pattern with
// example1Basis, sorted; last coordinate is the slice id.
inline std::vector<Index> example1ConstraintNonzeros() {
    std::vector<Index> s = {{0, 0, 0}, {1, 2, 0}, {2, 2, 0}, {0, 1, 1}, {1, 2, 1},
                            {2, 2, 1}, {0, 0, 2}, {1, 0, 2}, {2, 1, 2}};
    std::sort(s.begin(), s.end());
    return s;
}

inline std::string testDataDir() {
    const char* env = std::getenv("CPTC_TEST_DATA");
    return env ? env : "tests/data";
}

}  // namespace cptc::testing
