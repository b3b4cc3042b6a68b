#include "cptc/constraint.hpp"

#include <algorithm>

namespace cptc {

namespace {

Index project(const Index& x) {  // drop the last coordinate
    return Index(x.begin(), x.end() - 1);
}

// Observed entries grouped by mode-d row, each kept lexicographically sorted.
std::vector<std::vector<Index>> groupByRow(const SamplingPattern& pattern) {
    const int nd = pattern.dims.back();
    std::vector<std::vector<Index>> rows(nd);
    for (const Index& x : pattern.observed) rows[x.back()].push_back(x);
    return rows;
}

}  // namespace

std::vector<Index> ConstraintTensor::sliceSupport(int sliceId) const {
    const Slice& s = slices.at(sliceId);
    std::vector<Index> out = s.basis;
    out.push_back(s.extra);
    return out;
}

std::vector<Index> ConstraintTensor::nonzeros() const {
    std::vector<Index> out;
    for (int s = 0; s < K(); ++s) {
        for (Index pos : sliceSupport(s)) {
            pos.push_back(s);
            out.push_back(std::move(pos));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Assumption1Report checkAssumption1(const SamplingPattern& pattern, int r) {
    Assumption1Report rep;
    rep.rank = r;
    auto rows = groupByRow(pattern);
    rep.rowCounts.reserve(rows.size());
    for (const auto& row : rows) rep.rowCounts.push_back(static_cast<long long>(row.size()));
    return rep;
}

BasisChoice defaultBasis(const SamplingPattern& pattern, int r) {
    auto rows = groupByRow(pattern);
    BasisChoice basis;
    basis.perRow.resize(rows.size());
    for (size_t y = 0; y < rows.size(); ++y) {
        if (static_cast<int>(rows[y].size()) < r) throw Assumption1Violated(static_cast<int>(y));
        basis.perRow[y].assign(rows[y].begin(), rows[y].begin() + r);
    }
    return basis;
}

ConstraintTensor buildConstraintTensor(const SamplingPattern& pattern, int r,
                                       const BasisChoice& basis) {
    const int d = pattern.order();
    const int nd = pattern.dims.back();
    auto rows = groupByRow(pattern);
    if (static_cast<int>(basis.perRow.size()) != nd) {
        throw BasisNotObserved("basis must list one group per mode-d row");
    }

    ConstraintTensor ct;
    ct.dims.assign(pattern.dims.begin(), pattern.dims.end() - 1);
    ct.lastDim = nd;
    ct.rank = r;
    ct.kPerRow.resize(nd, 0);

    for (int y = 0; y < nd; ++y) {
        if (static_cast<int>(rows[y].size()) < r) throw Assumption1Violated(y);
        const auto& chosen = basis.perRow[y];
        if (static_cast<int>(chosen.size()) != r) {
            throw BasisNotObserved("basis row " + std::to_string(y) + " must hold exactly " +
                                   std::to_string(r) + " tuples");
        }
        std::vector<Index> basisProj;
        std::vector<Index> sortedChosen = chosen;
        std::sort(sortedChosen.begin(), sortedChosen.end());
        if (std::adjacent_find(sortedChosen.begin(), sortedChosen.end()) != sortedChosen.end()) {
            throw BasisNotObserved("repeated basis tuple in row " + std::to_string(y));
        }
        for (const Index& x : sortedChosen) {
            if (static_cast<int>(x.size()) != d || x.back() != y || !pattern.isObserved(x)) {
                throw BasisNotObserved("basis tuple is not an observed entry of row " +
                                       std::to_string(y));
            }
            basisProj.push_back(project(x));
        }
        ct.kPerRow[y] = static_cast<int>(rows[y].size()) - r;

        // Non-basis entries in lexicographic order, one fresh slice each.
        for (const Index& x : rows[y]) {
            if (std::binary_search(sortedChosen.begin(), sortedChosen.end(), x)) continue;
            ConstraintTensor::Slice s;
            s.basis = basisProj;
            s.extra = project(x);
            s.row = y;
            ct.slices.push_back(std::move(s));
        }
    }
    return ct;
}

ConstraintTensor buildConstraintTensor(const SamplingPattern& pattern, int r) {
    return buildConstraintTensor(pattern, r, defaultBasis(pattern, r));
}

BasisChoice readBasis(const std::string& path, const SamplingPattern& pattern, int r,
                      bool oneBased) {
    SamplingPattern listed = readPattern(path, oneBased);
    if (listed.dims != pattern.dims) throw ParseError("basis file dims do not match pattern dims");
    BasisChoice basis;
    basis.perRow.resize(pattern.dims.back());
    for (const Index& x : listed.observed) basis.perRow[x.back()].push_back(x);
    for (size_t y = 0; y < basis.perRow.size(); ++y) {
        if (static_cast<int>(basis.perRow[y].size()) != r) {
            throw BasisNotObserved("basis file lists " + std::to_string(basis.perRow[y].size()) +
                                   " tuples for row " + std::to_string(y) + ", expected " +
                                   std::to_string(r));
        }
    }
    return basis;
}

SamplingPattern constraintAsPattern(const ConstraintTensor& ct) {
    std::vector<int> dims = ct.dims;
    dims.push_back(std::max(ct.K(), 1));
    std::vector<Index> entries;
    for (int s = 0; s < ct.K(); ++s) {
        for (const Index& pos : ct.sliceSupport(s)) {
            Index x = pos;
            x.push_back(s);
            entries.push_back(std::move(x));
        }
    }
    return SamplingPattern(dims, std::move(entries));
}

}  // namespace cptc
