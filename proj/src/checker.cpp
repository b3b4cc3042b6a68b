#include "cptc/checker.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <random>

namespace cptc {

long long requiredCount(const std::vector<int>& dims, int r) {
    const int d = static_cast<int>(dims.size());
    long long sum = 0;
    for (int i = 0; i + 1 < d; ++i) sum += dims[i];
    return static_cast<long long>(r) * sum - static_cast<long long>(r) * r -
           static_cast<long long>(r) * (d - 2);
}

long long requiredCount(const ConstraintTensor& ct) {
    std::vector<int> dims = ct.dims;
    dims.push_back(ct.lastDim);
    return requiredCount(dims, ct.rank);
}

namespace {

// Per-slice occupancy bitmasks, one bit run per mode, packed into one word
// vector so unions are plain ORs.
struct MaskTable {
    std::vector<int> offsets;  // word offset of each mode
    std::vector<int> words;    // word count of each mode
    int totalWords = 0;
    int numModes = 0;
    std::vector<std::vector<std::uint64_t>> slice;  // per slice

    explicit MaskTable(const ConstraintTensor& ct) {
        numModes = static_cast<int>(ct.dims.size());
        for (int i = 0; i < numModes; ++i) {
            offsets.push_back(totalWords);
            int w = (ct.dims[i] + 63) / 64;
            words.push_back(w);
            totalWords += w;
        }
        slice.resize(ct.K());
        for (int s = 0; s < ct.K(); ++s) {
            slice[s].assign(totalWords, 0);
            for (const Index& pos : ct.sliceSupport(s)) {
                for (int i = 0; i < numModes; ++i) {
                    slice[s][offsets[i] + pos[i] / 64] |= std::uint64_t{1} << (pos[i] % 64);
                }
            }
        }
    }

    int modeCount(const std::vector<std::uint64_t>& u, int mode) const {
        int c = 0;
        for (int w = 0; w < words[mode]; ++w) c += std::popcount(u[offsets[mode] + w]);
        return c;
    }
};

// LHS of the independence inequality for the union mask of a subset.
long long boundOfUnion(const MaskTable& mt, const std::vector<std::uint64_t>& u, int r) {
    long long sum = 0;
    int maxM = 0;
    for (int i = 0; i < mt.numModes; ++i) {
        int m = mt.modeCount(u, i);
        sum += m;
        maxM = std::max(maxM, m);
    }
    // numModes = d-1, so the paper's (d-2) term is numModes-1.
    return static_cast<long long>(r) * (sum - std::min<long long>(maxM, r) - (mt.numModes - 1));
}

void orInto(std::vector<std::uint64_t>& dst, const std::vector<std::uint64_t>& src) {
    for (size_t w = 0; w < dst.size(); ++w) dst[w] |= src[w];
}

// Basis-free rank certificate. Slice supports depend on which r observed
// entries serve as the basis of each mode-d row, so the subset inequality can
// hold for the chosen basis even though a different basis would expose a
// dependency (e.g. a fully observed (r+1)x(r+1) submatrix when d = 2). The
// bound below does not depend on that choice: for any sub-box
// T = T_1 x ... x T_{d-1} of the first d-1 modes, a mode-d row y whose
// observed positions S_y meet the box in more than r places can have its
// basis re-chosen inside the box, yielding c_y(T) = (|S_y ∩ T| - r)+
// constraints that involve only variables at rows of T. Those are capped by
// the variable count of the box (gauge directions project into the box with
// the same dimension the main inequality subtracts), so
//   rank(P) <= vars(T) + sum_y (k_y - c_y(T))
// for every box. Returns the minimum over all boxes, or LLONG_MAX when the
// leading modes are too large to enumerate.
long long boxRankUpperBound(const ConstraintTensor& ct) {
    const int dm = static_cast<int>(ct.dims.size());
    int totalBits = 0;
    for (int n : ct.dims) totalBits += n;
    if (totalBits > 18) return std::numeric_limits<long long>::max();

    // Observed positions per mode-d row, recovered from that row's slices
    // (shared basis plus one extra each).
    std::vector<std::vector<Index>> cells(ct.lastDim);
    for (const ConstraintTensor::Slice& s : ct.slices) {
        if (cells[s.row].empty()) cells[s.row] = s.basis;
        cells[s.row].push_back(s.extra);
    }

    const long long r = ct.rank;
    long long best = std::numeric_limits<long long>::max();
    const std::uint64_t boxes = std::uint64_t{1} << totalBits;
    for (std::uint64_t box = 1; box < boxes; ++box) {
        long long sum = 0;
        int maxM = 0;
        bool emptyMode = false;
        int shift = 0;
        for (int i = 0; i < dm; ++i) {
            int m = std::popcount((box >> shift) & ((std::uint64_t{1} << ct.dims[i]) - 1));
            shift += ct.dims[i];
            if (m == 0) emptyMode = true;
            sum += m;
            maxM = std::max(maxM, m);
        }
        if (emptyMode) continue;  // no constraint involves zero rows of a mode
        long long vars = r * (sum - std::min<long long>(maxM, r) - (dm - 1));
        vars = std::max<long long>(vars, 0);
        long long localized = 0;
        for (const std::vector<Index>& rowCells : cells) {
            int inside = 0;
            for (const Index& pos : rowCells) {
                bool in = true;
                int off = 0;
                for (int i = 0; i < dm; ++i) {
                    if (!((box >> (off + pos[i])) & 1)) {
                        in = false;
                        break;
                    }
                    off += ct.dims[i];
                }
                inside += in;
            }
            localized += std::max<long long>(inside - r, 0);
        }
        best = std::min(best, vars + ct.K() - localized);
    }
    return best;
}

// Enumerates subsets of ids[from..] unioned onto (base, baseCount), failing
// fast on the first violation. Every enumerated subset also contains the
// entries already folded into base.
bool subsetsOk(const MaskTable& mt, int r, const std::vector<int>& ids, size_t from,
               const std::vector<std::uint64_t>& base, int baseCount,
               std::vector<int>& chosen, std::vector<int>* violation) {
    if (baseCount > 0 && boundOfUnion(mt, base, r) < baseCount) {
        if (violation) *violation = chosen;
        return false;
    }
    for (size_t i = from; i < ids.size(); ++i) {
        std::vector<std::uint64_t> next = base;
        orInto(next, mt.slice[ids[i]]);
        chosen.push_back(ids[i]);
        bool ok = subsetsOk(mt, r, ids, i + 1, next, baseCount + 1, chosen, violation);
        chosen.pop_back();
        if (!ok) return false;
    }
    return true;
}

}  // namespace

long long independenceUpperBound(const ConstraintTensor& ct, const SliceSelection& sel) {
    if (sel.sliceIds.empty()) throw EmptySelection();
    std::vector<Index> support;
    for (int s : sel.sliceIds) {
        for (Index pos : ct.sliceSupport(s)) support.push_back(std::move(pos));
    }
    ModeCounts m = modeCounts(support, ct.dims);
    long long sum = 0;
    int maxM = 0;
    for (int mi : m) {
        sum += mi;
        maxM = std::max(maxM, mi);
    }
    const int dm = static_cast<int>(ct.dims.size());
    return static_cast<long long>(ct.rank) *
           (sum - std::min<long long>(maxM, ct.rank) - (dm - 1));
}

bool satisfiesEq9(const ConstraintTensor& ct, const SliceSelection& sel) {
    return independenceUpperBound(ct, sel) >= static_cast<long long>(sel.sliceIds.size());
}

SubsetReport allSubsetsSatisfyEq9(const ConstraintTensor& ct, const SliceSelection& sel,
                                  const CheckerLimits& limits) {
    if (sel.sliceIds.empty()) throw EmptySelection();
    MaskTable mt(ct);
    const int t = static_cast<int>(sel.sliceIds.size());
    SubsetReport rep;

    if (t <= limits.maxSubsetExhaustive) {
        std::vector<std::uint64_t> base(mt.totalWords, 0);
        std::vector<int> chosen;
        std::vector<int> violation;
        if (subsetsOk(mt, ct.rank, sel.sliceIds, 0, base, 0, chosen, &violation)) {
            rep.verdict = SubsetVerdict::Verified;
        } else {
            rep.verdict = SubsetVerdict::Refuted;
            rep.witness = violation;
        }
        return rep;
    }

    // Too many subsets: seeded random falsification only.
    std::mt19937_64 rng(limits.seed);
    for (long long iter = 0; iter < limits.randomSubsetSamples; ++iter) {
        std::vector<std::uint64_t> u(mt.totalWords, 0);
        std::vector<int> subset;
        for (int s : sel.sliceIds) {
            if (rng() & 1) {
                subset.push_back(s);
                orInto(u, mt.slice[s]);
            }
        }
        if (subset.empty()) continue;
        if (boundOfUnion(mt, u, ct.rank) < static_cast<long long>(subset.size())) {
            rep.verdict = SubsetVerdict::Refuted;
            rep.witness = subset;
            return rep;
        }
    }
    rep.verdict = SubsetVerdict::Inconclusive;
    return rep;
}

namespace {

struct Budget {
    long long remaining;
    bool exceeded = false;
    bool spend() {
        if (remaining-- <= 0) {
            exceeded = true;
            return false;
        }
        return true;
    }
};

// True iff every subset of `stack` extended by slice `cand` satisfies the
// inequality. `stack` is assumed already verified, so only subsets containing
// `cand` need checking.
bool augmentOk(const MaskTable& mt, int r, const std::vector<int>& stack, int cand) {
    std::vector<std::uint64_t> base = mt.slice[cand];
    std::vector<int> chosen{cand};
    return subsetsOk(mt, r, stack, 0, base, 1, chosen, nullptr);
}

// Depth-first search for a selection of size `target` drawn from `pool`
// (index order) whose every subset satisfies `augmentOk`-style conditions.
// The family of valid selections is downward closed, so index-ordered DFS
// with pruning enumerates it completely.
bool dfsSelect(const MaskTable& mt, int r, const std::vector<int>& pool, size_t from,
               std::vector<int>& stack, int target, Budget& budget) {
    if (static_cast<int>(stack.size()) == target) return true;
    for (size_t i = from; i < pool.size(); ++i) {
        if (pool.size() - i < static_cast<size_t>(target) - stack.size()) break;
        if (!budget.spend()) return false;
        if (!augmentOk(mt, r, stack, pool[i])) continue;
        stack.push_back(pool[i]);
        if (dfsSelect(mt, r, pool, i + 1, stack, target, budget)) return true;
        stack.pop_back();
        if (budget.exceeded) return false;
    }
    return false;
}

// Condition per subset T containing cand: m_mode(T) - offset >= |T|.
bool singleModeSubsetsOk(const MaskTable& mt, int mode, int offset, const std::vector<int>& ids,
                         size_t from, const std::vector<std::uint64_t>& base, int baseCount) {
    if (mt.modeCount(base, mode) - offset < baseCount) return false;
    for (size_t i = from; i < ids.size(); ++i) {
        std::vector<std::uint64_t> next = base;
        orInto(next, mt.slice[ids[i]]);
        if (!singleModeSubsetsOk(mt, mode, offset, ids, i + 1, next, baseCount + 1)) return false;
    }
    return true;
}

bool singleModeAugmentOk(const MaskTable& mt, int mode, int offset,
                         const std::vector<int>& stack, int cand) {
    return singleModeSubsetsOk(mt, mode, offset, stack, 0, mt.slice[cand], 1);
}

bool dfsSelectSingleMode(const MaskTable& mt, int mode, int offset, const std::vector<int>& pool,
                         std::vector<char>& used, std::vector<int>& stack, int target,
                         size_t from, Budget& budget) {
    if (static_cast<int>(stack.size()) == target) return true;
    for (size_t i = from; i < pool.size(); ++i) {
        if (used[i]) continue;
        if (!budget.spend()) return false;
        if (!singleModeAugmentOk(mt, mode, offset, stack, pool[i])) continue;
        used[i] = 1;
        stack.push_back(pool[i]);
        if (dfsSelectSingleMode(mt, mode, offset, pool, used, stack, target, i + 1, budget)) {
            return true;
        }
        stack.pop_back();
        used[i] = 0;
        if (budget.exceeded) return false;
    }
    return false;
}

}  // namespace

FiniteReport checkFinite(const ConstraintTensor& ct, const CheckerLimits& limits) {
    FiniteReport rep;
    rep.required = requiredCount(ct);

    if (rep.required <= 0) {
        rep.verdict = FiniteVerdict::Finite;
        rep.exhausted = true;
        rep.reason = "required count is zero";
        return rep;
    }
    if (ct.K() < rep.required) {
        rep.verdict = FiniteVerdict::NotFinite;
        rep.exhausted = true;
        rep.reason = "K < required count";
        return rep;
    }

    long long boxBound = boxRankUpperBound(ct);
    if (boxBound < rep.required) {
        rep.verdict = FiniteVerdict::NotFinite;
        rep.exhausted = true;
        rep.reason = "localized constraint bound " + std::to_string(boxBound) +
                     " below required count";
        return rep;
    }

    MaskTable mt(ct);
    std::vector<int> pool(ct.K());
    for (int s = 0; s < ct.K(); ++s) pool[s] = s;
    Budget budget{limits.maxCandidateSearch};
    std::vector<int> stack;
    bool found = dfsSelect(mt, ct.rank, pool, 0, stack, static_cast<int>(rep.required), budget);
    rep.nodesVisited = limits.maxCandidateSearch - budget.remaining;
    if (found) {
        rep.verdict = FiniteVerdict::Finite;
        rep.witness = stack;
    } else if (budget.exceeded) {
        rep.verdict = FiniteVerdict::Inconclusive;
        rep.reason = "search budget exhausted";
    } else {
        rep.verdict = FiniteVerdict::NotFinite;
        rep.exhausted = true;
        rep.reason = "exhaustive search found no verifying selection";
    }
    return rep;
}

FiniteReport checkFinite(const SamplingPattern& pattern, int r, const CheckerLimits& limits) {
    Assumption1Report a1 = checkAssumption1(pattern, r);
    if (!a1.pass()) {
        FiniteReport rep;
        rep.required = requiredCount(pattern.dims, r);
        long long sliceCells = 1;
        for (size_t i = 0; i + 1 < pattern.dims.size(); ++i) sliceCells *= pattern.dims[i];
        int row = a1.firstFailingRow();
        if (a1.rowCounts[row] < sliceCells) {
            rep.verdict = FiniteVerdict::NotFinite;
            rep.reason = "assumption 1 fails at mode-d row " + std::to_string(row);
        } else {
            rep.verdict = FiniteVerdict::Inconclusive;
            rep.reason = "assumption 1 fails but the failing row is fully observed";
        }
        return rep;
    }
    return checkFinite(buildConstraintTensor(pattern, r), limits);
}

UniqueReport checkUnique(const ConstraintTensor& ct, const CheckerLimits& limits) {
    UniqueReport rep;
    FiniteReport fin = checkFinite(ct, limits);
    if (fin.verdict == FiniteVerdict::NotFinite) {
        rep.verdict = UniqueVerdict::NotApplicable;
        rep.reason = "not finitely completable";
        return rep;
    }
    if (fin.verdict == FiniteVerdict::Inconclusive) {
        rep.verdict = UniqueVerdict::Inconclusive;
        rep.reason = "finite check inconclusive";
        return rep;
    }

    const int dm = static_cast<int>(ct.dims.size());
    const int r = ct.rank;
    MaskTable mt(ct);

    std::vector<char> consumed(ct.K(), 0);
    for (int s : fin.witness) consumed[s] = 1;
    std::vector<int> pool;
    for (int s = 0; s < ct.K(); ++s) {
        if (!consumed[s]) pool.push_back(s);
    }

    UniqueWitness wit;
    wit.finitePart = fin.witness;
    Budget budget{limits.maxCandidateSearch};
    std::vector<char> used(pool.size(), 0);

    for (int i = 0; i < 2 * dm; ++i) {
        const int mode = i < dm ? i : i - dm;
        const int offset = i < dm ? 1 : r;
        const int target = std::max(0, ct.dims[mode] - offset);
        std::vector<int> stack;
        if (target > 0 &&
            !dfsSelectSingleMode(mt, mode, offset, pool, used, stack, target, 0, budget)) {
            rep.verdict = UniqueVerdict::Inconclusive;
            rep.reason = budget.exceeded ? "search budget exhausted"
                                         : "could not assemble disjoint selection " +
                                               std::to_string(i + 1);
            return rep;
        }
        wit.extras.push_back(stack);
    }
    rep.verdict = UniqueVerdict::Unique;
    rep.witness = wit;
    return rep;
}

UniqueReport checkUnique(const SamplingPattern& pattern, int r, const CheckerLimits& limits) {
    Assumption1Report a1 = checkAssumption1(pattern, r);
    if (!a1.pass()) {
        UniqueReport rep;
        rep.verdict = UniqueVerdict::NotApplicable;
        rep.reason = "assumption 1 fails at mode-d row " + std::to_string(a1.firstFailingRow());
        return rep;
    }
    return checkUnique(buildConstraintTensor(pattern, r), limits);
}

}  // namespace cptc
