#include <algorithm>
#include <map>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"

using namespace cptc;
using cptc::testing::example1Pattern;
using cptc::testing::motivatingPattern;

namespace {

std::map<long long, int> rowOccupancy(const UnfoldingMatrix& u) {
    std::map<long long, int> occ;
    for (const auto& [row, col] : u.nonzeros) occ[row]++;
    return occ;
}

}  // namespace

TEST_CASE("pattern canonical form and validation") {
    SamplingPattern p({2, 2}, {{1, 1}, {0, 0}});
    CHECK(p.observed == std::vector<Index>{{0, 0}, {1, 1}});
    CHECK(p.observedCount() == 2);
    CHECK(p.cellCount() == 4);
    CHECK(p.isObserved({1, 1}));
    CHECK_FALSE(p.isObserved({0, 1}));

    CHECK_THROWS_AS(SamplingPattern({2, 2}, {{0, 0}, {0, 0}}), DuplicateEntry);
    CHECK_THROWS_AS(SamplingPattern({2, 2}, {{0, 2}}), BoundsError);
    CHECK_THROWS_AS(SamplingPattern({2, 2}, {{-1, 0}}), BoundsError);
    CHECK_THROWS_AS(SamplingPattern({5}, {}), BoundsError);   // d >= 2
    CHECK_THROWS_AS(SamplingPattern({2, 0}, {}), BoundsError);  // n_i >= 1
}

TEST_CASE("unfold basic cases") {
    SUBCASE("origin maps to origin") {
        SamplingPattern p({2, 2, 2}, {{0, 0, 0}});
        UnfoldingMatrix u = unfold(p, IndexSet{{0}});
        CHECK(u.rows == 2);
        CHECK(u.cols == 4);
        CHECK(u.nonzeros == std::vector<std::pair<long long, long long>>{{0, 0}});
    }
    SUBCASE("example-1 mode-3 matricization has rows 4,3,2") {
        UnfoldingMatrix u = unfold(example1Pattern(), IndexSet{{2}});
        auto occ = rowOccupancy(u);
        CHECK(occ[0] == 4);
        CHECK(occ[1] == 3);
        CHECK(occ[2] == 2);
    }
    SUBCASE("full observation") {
        std::vector<Index> all;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 3; ++b)
                for (int c = 0; c < 4; ++c) all.push_back({a, b, c});
        SamplingPattern p({2, 3, 4}, all);
        UnfoldingMatrix u = unfold(p, IndexSet{{0, 1}});
        CHECK(u.rows == 6);
        CHECK(u.cols == 4);
        CHECK(u.nonzeros.size() == 24);
    }
    SUBCASE("errors") {
        SamplingPattern p({2, 2}, {{0, 0}});
        CHECK_THROWS_AS(unfold(p, IndexSet{{}}), EmptyIndexSet);
        CHECK_THROWS_AS(unfold(p, IndexSet{{0, 1}}), FullIndexSet);
        CHECK_THROWS_AS(unfold(p, IndexSet{{2}}), ModeOutOfRange);
    }
}

TEST_CASE("matricization equals singleton unfold") {
    SUBCASE("two rows one column") {
        SamplingPattern p({2, 2, 2}, {{0, 0, 0}, {1, 0, 0}});
        UnfoldingMatrix u = matricization(p, 0);
        CHECK(u.nonzeros == std::vector<std::pair<long long, long long>>{{0, 0}, {1, 0}});
    }
    SUBCASE("motivating pattern mode 2 occupancy 3,1") {
        auto occ = rowOccupancy(matricization(motivatingPattern(), 2));
        CHECK(occ[0] == 3);
        CHECK(occ[1] == 1);
    }
    SUBCASE("bit-for-bit identical to unfold") {
        SamplingPattern p = example1Pattern();
        for (int i = 0; i < 3; ++i) {
            UnfoldingMatrix a = matricization(p, i);
            UnfoldingMatrix b = unfold(p, IndexSet{{i}});
            CHECK(a.rows == b.rows);
            CHECK(a.cols == b.cols);
            CHECK(a.nonzeros == b.nonzeros);
        }
    }
    SUBCASE("mode out of range") {
        CHECK_THROWS_AS(matricization(motivatingPattern(), 3), ModeOutOfRange);
    }
}

TEST_CASE("encode/decode round-trips every cell") {
    SamplingPattern p({3, 4, 5}, {{0, 0, 0}});
    for (int isz = 1; isz < 3; ++isz) {
        std::vector<int> modes(isz);
        for (int i = 0; i < isz; ++i) modes[i] = i;
        UnfoldingMatrix u = unfold(p, IndexSet{modes});
        for (long long row = 0; row < u.rows; ++row) {
            for (long long col = 0; col < u.cols; ++col) {
                Index rx = u.decodeRow(row);
                Index cx = u.decodeCol(col);
                Index full(3, -1);
                for (size_t i = 0; i < u.rowModes.size(); ++i) full[u.rowModes[i]] = rx[i];
                for (size_t i = 0; i < u.colModes.size(); ++i) full[u.colModes[i]] = cx[i];
                CHECK(u.encodeRow(full) == row);
                CHECK(u.encodeCol(full) == col);
            }
        }
    }
}

TEST_CASE("modeCounts") {
    CHECK(modeCounts({{1, 2, 0}}, {3, 3, 3}) == ModeCounts{1, 1, 1});
    CHECK(modeCounts(example1Pattern()) == ModeCounts{3, 3, 3});
    CHECK(modeCounts({{0, 1, 1}, {1, 1, 1}}, {2, 2, 2}) == ModeCounts{2, 1, 1});
    CHECK_THROWS_AS(modeCounts({}, {2, 2}), EmptyInput);
}

TEST_CASE("modeCounts is mode-permutation equivariant") {
    SamplingPattern p = example1Pattern();
    SamplingPattern q({3, 3, 3}, [&] {
        std::vector<Index> swapped;
        for (const Index& x : p.observed) swapped.push_back({x[1], x[2], x[0]});
        return swapped;
    }());
    ModeCounts mp = modeCounts(p);
    ModeCounts mq = modeCounts(q);
    CHECK(mq[0] == mp[1]);
    CHECK(mq[1] == mp[2]);
    CHECK(mq[2] == mp[0]);
}

TEST_CASE("pattern file round trip") {
    SamplingPattern p = example1Pattern();
    std::ostringstream out;
    writePattern(p, out);
    std::istringstream in(out.str());
    SamplingPattern q = readPattern(in);
    CHECK(q.dims == p.dims);
    CHECK(q.observed == p.observed);
}

TEST_CASE("pattern file parsing") {
    SUBCASE("out-of-range coordinate") {
        std::istringstream in("dims: 2 2\n0 2\n");
        CHECK_THROWS_AS(readPattern(in), BoundsError);
    }
    SUBCASE("bad header") {
        std::istringstream in("2 2\n0 0\n");
        CHECK_THROWS_AS(readPattern(in), ParseError);
    }
    SUBCASE("one-based file matches zero-based file") {
        SamplingPattern a = readPattern(cptc::testing::testDataDir() + "/example1.pat");
        SamplingPattern b =
            readPattern(cptc::testing::testDataDir() + "/example1_one_based.pat", true);
        CHECK(a.observed == b.observed);
        CHECK(a.observed == example1Pattern().observed);
    }
    SUBCASE("comments and blank lines are ignored") {
        std::istringstream in("# header comment\ndims: 2 2\n\n0 0  # trailing\n1 1\n");
        SamplingPattern p = readPattern(in);
        CHECK(p.observedCount() == 2);
    }
    SUBCASE("dense 0/1 body") {
        std::istringstream in("dims: 2 2 2\n1000\n0001\n");
        SamplingPattern p = readPattern(in);
        // row-major over (2,2,2): cells 0 and 4+3=7 observed
        CHECK(p.observed == std::vector<Index>{{0, 0, 0}, {1, 1, 1}});
    }
}
