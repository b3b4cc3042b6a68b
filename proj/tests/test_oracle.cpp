#include <numeric>
#include <set>

#include "cptc/oracle.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace cptc;
using namespace cptc::testing;

namespace {

std::uint32_t neg(std::uint32_t a) { return fp::sub(0, a); }
std::uint32_t frac(std::uint32_t num, std::uint32_t den) { return fp::mul(num, fp::inv(den)); }

SamplingPattern fullPattern(const std::vector<int>& dims) {
    std::vector<Index> cells;
    Index x(dims.size(), 0);
    while (true) {
        cells.push_back(x);
        int i = int(dims.size()) - 1;
        while (i >= 0 && ++x[i] == dims[i]) x[i--] = 0;
        if (i < 0) break;
    }
    return SamplingPattern(dims, cells);
}

FactorMatrices randomFactors(std::vector<int> dims, int r, std::uint64_t seed) {
    FactorMatrices f(std::move(dims), r);
    std::uint64_t state = seed * 2654435769u + 1;
    auto next = [&] {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return std::uint32_t(1 + state % (fp::kPrime - 1));
    };
    for (auto& a : f.A)
        for (auto& v : a.data) v = next();
    return f;
}

}  // namespace

TEST_CASE("field arithmetic and rank") {
    CHECK(fp::mul(fp::inv(7), 7) == 1);
    CHECK(fp::add(fp::kPrime - 1, 1) == 0);
    CHECK_THROWS_AS(fp::inv(0), SingularSystem);

    FieldMatrix m(3, 3);
    m.at(0, 0) = 1;
    m.at(1, 1) = 2;
    m.at(2, 0) = 5;  // row 2 dependent on row 0
    CHECK(fieldRank(m) == 2);

    FieldMatrix a(2, 2);
    a.at(0, 0) = 2;
    a.at(1, 1) = 3;
    auto x = fieldSolve(a, {4, 9});
    CHECK(x == std::vector<std::uint32_t>{2, 3});
    FieldMatrix s(2, 2);  // singular
    s.at(0, 0) = s.at(1, 0) = 1;
    CHECK_THROWS_AS(fieldSolve(s, {1, 2}), SingularSystem);
}

TEST_CASE("evaluateEntry") {
    SUBCASE("rank 1, all ones") {
        FactorMatrices f({2, 2, 2}, 1);
        for (auto& a : f.A)
            for (auto& v : a.data) v = 1;
        CHECK(evaluateEntry(f, {1, 0, 1}) == 1);
    }
    SUBCASE("d=2 is the matrix product") {
        FactorMatrices f = randomFactors({3, 4}, 2, 7);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 4; ++j) {
                std::uint32_t expect = 0;
                for (int l = 0; l < 2; ++l)
                    expect = fp::add(expect, fp::mul(f.A[0].at(i, l), f.A[1].at(j, l)));
                CHECK(evaluateEntry(f, {i, j}) == expect);
            }
        }
    }
    SUBCASE("published rank-2 canonical decomposition reconstructs X") {
        // X = Y Z with the identity block fixed in the first two rows of Y.
        const std::uint32_t X[4][4] = {
            {1, neg(1), 0, neg(1)},
            {2, 2, 4, 6},
            {neg(1), 3, 2, 5},
            {1, 2, 3, 5},
        };
        FactorMatrices f({4, 4}, 2);
        // Y: identity block then the published fractional block
        f.A[0].at(0, 0) = 1;
        f.A[0].at(1, 1) = 1;
        f.A[0].at(2, 0) = neg(2);
        f.A[0].at(2, 1) = frac(1, 2);
        f.A[0].at(3, 0) = neg(frac(1, 2));
        f.A[0].at(3, 1) = frac(3, 4);
        // Z = first two rows of X, stored as the second factor's columns
        for (int j = 0; j < 4; ++j) {
            f.A[1].at(j, 0) = X[0][j];
            f.A[1].at(j, 1) = X[1][j];
        }
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) CHECK(evaluateEntry(f, {i, j}) == X[i][j]);
    }
    SUBCASE("out-of-bounds index") {
        FactorMatrices f({2, 2}, 1);
        CHECK_THROWS_AS(evaluateEntry(f, {2, 0}), BoundsError);
    }
}

TEST_CASE("canonical pattern fixes r^2 + r(d-2) entries") {
    CanonicalPattern cp({3, 4, 5}, 2);
    CHECK(cp.fixedCount() == 4 + 2);
    CHECK(cp.isFixed(0, 0, 0));
    CHECK(cp.fixedValue(0, 0, 0) == 1);
    CHECK(cp.fixedValue(0, 0, 1) == 0);
    CHECK(cp.isFixed(1, 0, 0));
    CHECK(cp.fixedValue(1, 0, 1) == 1);  // all-ones row
    CHECK_FALSE(cp.isFixed(2, 0, 0));    // last factor entirely free
    long long total = (3 + 4 + 5) * 2;
    CHECK((long long)cp.freeVariables().size() == total - cp.fixedCount());
}

TEST_CASE("solveLastFactor") {
    SUBCASE("r=1 closed form") {
        std::vector<int> dims = {2, 2, 2};
        FactorMatrices f = randomFactors(dims, 1, 3);
        BasisChoice basis = defaultBasis(motivatingPattern(), 1);
        std::vector<std::vector<std::uint32_t>> values(2);
        for (int y = 0; y < 2; ++y) values[y] = {evaluateEntry(f, basis.perRow[y][0])};
        FieldMatrix ad =
            solveLastFactor({f.A[0], f.A[1]}, dims, 1, basis, values);
        for (int y = 0; y < 2; ++y) {
            const Index& b = basis.perRow[y][0];
            std::uint32_t prod = fp::mul(f.A[0].at(b[0], 0), f.A[1].at(b[1], 0));
            CHECK(ad.at(y, 0) == fp::mul(values[y][0], fp::inv(prod)));
        }
    }
    SUBCASE("motivating pattern reproduces the last-mode factor") {
        std::vector<int> dims = {2, 2, 2};
        FactorMatrices f = randomFactors(dims, 1, 11);
        BasisChoice basis = defaultBasis(motivatingPattern(), 1);
        std::vector<std::vector<std::uint32_t>> values(2);
        for (int y = 0; y < 2; ++y) values[y] = {evaluateEntry(f, basis.perRow[y][0])};
        FieldMatrix ad = solveLastFactor({f.A[0], f.A[1]}, dims, 1, basis, values);
        CHECK(ad.at(0, 0) == f.A[2].at(0, 0));
        CHECK(ad.at(1, 0) == f.A[2].at(1, 0));
    }
    SUBCASE("random d=3 r=2 instance reproduces all basis samples") {
        std::vector<int> dims = {3, 3, 3};
        SamplingPattern p = fullPattern(dims);
        BasisChoice basis = defaultBasis(p, 2);
        FactorMatrices f = randomFactors(dims, 2, 17);
        std::vector<std::vector<std::uint32_t>> values(3);
        for (int y = 0; y < 3; ++y)
            for (const Index& b : basis.perRow[y]) values[y].push_back(evaluateEntry(f, b));
        FieldMatrix ad = solveLastFactor({f.A[0], f.A[1]}, dims, 2, basis, values);
        FactorMatrices g = f;
        g.A[2] = ad;
        for (int y = 0; y < 3; ++y)
            for (size_t k = 0; k < basis.perRow[y].size(); ++k)
                CHECK(evaluateEntry(g, basis.perRow[y][k]) == values[y][k]);
    }
}

TEST_CASE("genericJacobianRank") {
    SUBCASE("motivating pattern: reducedRank = dReq = 2, paper verdict finite") {
        OracleReport rep = genericJacobianRank(motivatingPattern(), 1);
        CHECK(rep.assumption1);
        CHECK(rep.required == 2);
        CHECK(rep.reducedRank == 2);
        CHECK(rep.verdictPaperFinite());
        CHECK(rep.verdictVarietyFinite());
        CHECK(rep.basisRank == 2);  // r * n_d
        CHECK(rep.stableTrials == rep.trials);
    }
    SUBCASE("basis-only pattern has reducedRank 0") {
        SamplingPattern p({2, 2, 2}, {{0, 0, 0}, {0, 0, 1}});
        OracleReport rep = genericJacobianRank(p, 1);
        CHECK(rep.reducedRank == 0);
        CHECK_FALSE(rep.verdictPaperFinite());  // dReq = 2
    }
    SUBCASE("d=2 fully observed variety rank is the matrix-manifold dimension") {
        OracleReport rep = genericJacobianRank(fullPattern({4, 4}), 2);
        CHECK(rep.varietyRank == 12);  // r(n1+n2) - r^2
        CHECK(rep.verdictVarietyFinite());
    }
    SUBCASE("elimination identity") {
        OracleReport rep = genericJacobianRank(example1Pattern(), 2);
        CHECK(rep.basisRank == 2 * 3);
        CHECK(rep.reducedRank <= rep.fullRank);
        CHECK(rep.fullRank <= rep.varietyRank);
    }
    SUBCASE("determinism for a fixed seed") {
        OracleReport a = genericJacobianRank(example1Pattern(), 2, OracleMode::All, 3, 42);
        OracleReport b = genericJacobianRank(example1Pattern(), 2, OracleMode::All, 3, 42);
        CHECK(a.reducedRank == b.reducedRank);
        CHECK(a.fullRank == b.fullRank);
        CHECK(a.varietyRank == b.varietyRank);
    }
}

TEST_CASE("rank monotonicity in the observed set") {
    SamplingPattern base({3, 3, 3}, {{0, 0, 0}, {1, 1, 0}, {0, 0, 1}, {2, 2, 1},
                                     {0, 1, 2}, {1, 0, 2}});
    std::vector<Index> cells = base.observed;
    OracleReport prev = genericJacobianRank(base, 1, OracleMode::All, 2, 5);
    for (Index add : {Index{2, 0, 0}, Index{0, 2, 1}, Index{2, 2, 2}, Index{1, 2, 0}}) {
        cells.push_back(add);
        OracleReport cur =
            genericJacobianRank(SamplingPattern({3, 3, 3}, cells), 1, OracleMode::All, 2, 5);
        CHECK(cur.reducedRank >= prev.reducedRank);
        CHECK(cur.fullRank >= prev.fullRank);
        prev = cur;
    }
}

TEST_CASE("scaling-gauge nullity bounds the variety rank") {
    for (int r : {1, 2}) {
        OracleReport rep = genericJacobianRank(fullPattern({3, 3, 3}), r);
        CHECK(rep.varietyRank <= (long long)r * 9 - (long long)r * 2);
    }
}

TEST_CASE("oracle verdict is invariant across random basis choices") {
    // crossValidate builds the default basis; here we permute which entries
    // serve as basis by reordering rows of the pattern via selectionReducedRank
    // inputs. Verdict equality across 5 bases, 5 random patterns.
    std::uint64_t state = 31;
    auto next = [&] {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return state >> 33;
    };
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<Index> cells;
        std::set<Index> have;
        for (int k = 0; k < 18; ++k) {
            Index x = {int(next() % 3), int(next() % 3), int(next() % 3)};
            if (have.insert(x).second) cells.push_back(x);
        }
        SamplingPattern p({3, 3, 3}, cells);
        if (!checkAssumption1(p, 1).pass()) continue;

        // group observations per mode-3 row, then rotate the basis choice
        std::vector<std::vector<Index>> byRow(3);
        for (const Index& x : p.observed) byRow[x[2]].push_back(x);
        bool baseVerdict = genericJacobianRank(p, 1).verdictPaperFinite();
        for (int rot = 1; rot < 5; ++rot) {
            BasisChoice basis;
            basis.perRow.resize(3);
            for (int y = 0; y < 3; ++y)
                basis.perRow[y] = {byRow[y][rot % byRow[y].size()]};
            ConstraintTensor ct = buildConstraintTensor(p, 1, basis);
            SliceSelection all;
            all.sliceIds.resize(ct.K());
            std::iota(all.sliceIds.begin(), all.sliceIds.end(), 0);
            long long rank = ct.K() == 0
                                 ? 0
                                 : selectionReducedRank(p, 1, basis, ct, all, 2, 7 * rot);
            CHECK((rank == requiredCount({3, 3, 3}, 1)) == baseVerdict);
        }
    }
}

TEST_CASE("crossValidate agreement on small instances") {
    SUBCASE("motivating pattern: all verdicts agree finite") {
        AgreementReport rep = crossValidate(motivatingPattern(), 1);
        CHECK(rep.combinatorial.verdict == FiniteVerdict::Finite);
        CHECK(rep.oracle.verdictPaperFinite());
        CHECK(rep.oracle.verdictVarietyFinite());
        CHECK(rep.allAgree);
    }
    SUBCASE("random 4x4 matrices, r=1: every seed agrees") {
        std::uint64_t state = 2024;
        auto next = [&] {
            state = state * 6364136223846793005ull + 1442695040888963407ull;
            return state >> 33;
        };
        int conclusive = 0;
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<Index> cells;
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    if (next() % 2 == 0) cells.push_back({a, b});
            SamplingPattern p({4, 4}, cells);
            AgreementReport rep = crossValidate(p, 1, {}, 2, trial);
            CHECK(rep.paperVsVariety);
            CHECK(rep.allAgree);
            if (rep.combinatorialConclusive) ++conclusive;
        }
        CHECK(conclusive == 100);
    }
}
