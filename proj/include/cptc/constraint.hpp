#pragma once

#include <string>
#include <vector>

#include "cptc/pattern.hpp"

namespace cptc {

/// Per mode-d row: observation count and whether it meets the rank threshold.
struct Assumption1Report {
    std::vector<long long> rowCounts;  // one per mode-d row
    int rank = 0;
    bool pass() const {
        for (long long c : rowCounts) {
            if (c < rank) return false;
        }
        return true;
    }
    int firstFailingRow() const {
        for (size_t y = 0; y < rowCounts.size(); ++y) {
            if (rowCounts[y] < rank) return static_cast<int>(y);
        }
        return -1;
    }
};

/// For each mode-d row, the r observed entries used to eliminate the last
/// factor matrix. Tuples are full d-way indices.
struct BasisChoice {
    std::vector<std::vector<Index>> perRow;
};

/// The constraint tensor: K slices over modes 1..d-1, each slice holding the
/// r basis positions of its block plus one extra observed position.
struct ConstraintTensor {
    struct Slice {
        std::vector<Index> basis;  // r positions, (d-1)-tuples
        Index extra;               // 1 position, (d-1)-tuple
        int row = 0;               // originating mode-d row
    };

    std::vector<int> dims;      // n_1..n_{d-1}
    int lastDim = 0;            // n_d of the source pattern
    int rank = 0;
    std::vector<int> kPerRow;   // k_y = N_Omega(Y_y) - r
    std::vector<Slice> slices;  // ordered by (row, extra lexicographic)

    int K() const { return static_cast<int>(slices.size()); }
    int order() const { return static_cast<int>(dims.size()) + 1; }
    /// All r+1 nonzero positions of one slice, as (d-1)-tuples.
    std::vector<Index> sliceSupport(int sliceId) const;
    /// Nonzero set of the whole tensor as d-tuples over dims x K.
    std::vector<Index> nonzeros() const;
};

Assumption1Report checkAssumption1(const SamplingPattern& pattern, int r);

/// Lexicographically smallest r observed tuples per mode-d row.
BasisChoice defaultBasis(const SamplingPattern& pattern, int r);

ConstraintTensor buildConstraintTensor(const SamplingPattern& pattern, int r,
                                       const BasisChoice& basis);
ConstraintTensor buildConstraintTensor(const SamplingPattern& pattern, int r);

/// Basis files reuse the pattern text format; tuples are grouped by their
/// last coordinate, r per mode-d row.
BasisChoice readBasis(const std::string& path, const SamplingPattern& pattern, int r,
                      bool oneBased = false);

/// The constraint tensor as a pattern over dims (n_1..n_{d-1}, K).
SamplingPattern constraintAsPattern(const ConstraintTensor& ct);

}  // namespace cptc
