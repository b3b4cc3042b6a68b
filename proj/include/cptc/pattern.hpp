#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cptc/errors.hpp"

namespace cptc {

/// A multi-index into a d-way tensor, 0-based.
using Index = std::vector<int>;

/// Binary sampling pattern of a d-way tensor, stored as the sorted set of
/// observed multi-indices.
struct SamplingPattern {
    std::vector<int> dims;        // n_1..n_d, each >= 1, d >= 2
    std::vector<Index> observed;  // strictly sorted lexicographically

    SamplingPattern() = default;
    SamplingPattern(std::vector<int> dims, std::vector<Index> entries);

    int order() const { return static_cast<int>(dims.size()); }
    long long observedCount() const { return static_cast<long long>(observed.size()); }
    long long cellCount() const;
    bool isObserved(const Index& x) const;
};

/// Nonempty, strictly increasing subset of the modes {0..d-1}.
struct IndexSet {
    std::vector<int> modes;

    IndexSet() = default;
    explicit IndexSet(std::vector<int> m) : modes(std::move(m)) {}
};

/// Sparse unfolding of a sampling pattern: modes in I index rows, the rest
/// index columns, both through mixed-radix encodings (earlier mode most
/// significant).
struct UnfoldingMatrix {
    long long rows = 0;
    long long cols = 0;
    std::vector<std::pair<long long, long long>> nonzeros;  // sorted
    std::vector<int> rowModes;  // I
    std::vector<int> colModes;  // complement of I
    std::vector<int> dims;      // full tensor dims

    long long encodeRow(const Index& x) const;
    long long encodeCol(const Index& x) const;
    Index decodeRow(long long row) const;
    Index decodeCol(long long col) const;
};

/// m_i = number of distinct values of coordinate i among a set of indices.
using ModeCounts = std::vector<int>;

UnfoldingMatrix unfold(const SamplingPattern& pattern, const IndexSet& I);
UnfoldingMatrix matricization(const SamplingPattern& pattern, int mode);

ModeCounts modeCounts(const std::vector<Index>& indices, const std::vector<int>& dims);
ModeCounts modeCounts(const SamplingPattern& pattern);

/// Text format: header line "dims: n_1 ... n_d", then one observed tuple per
/// line. A dense variant with the same header followed by row-major 0/1
/// digit strings is also accepted on read.
SamplingPattern readPattern(std::istream& in, bool oneBased = false);
SamplingPattern readPattern(const std::string& path, bool oneBased = false);
void writePattern(const SamplingPattern& pattern, std::ostream& out);
void writePattern(const SamplingPattern& pattern, const std::string& path);

}  // namespace cptc
