#include "cptc/oracle.hpp"

#include <algorithm>
#include <array>
#include <random>

namespace cptc {

FactorMatrices::FactorMatrices(std::vector<int> d, int r) : dims(std::move(d)), rank(r) {
    for (int n : dims) A.emplace_back(n, r);
}

CanonicalPattern::CanonicalPattern(std::vector<int> d, int r, int jMode)
    : dims(std::move(d)), rank(r), j(jMode) {
    if (j < 0 || j >= static_cast<int>(dims.size()) - 1) {
        throw ModeOutOfRange(j, static_cast<int>(dims.size()) - 1);
    }
    if (dims[j] < r) throw BoundsError("mode j must have at least r rows for the identity block");
}

bool CanonicalPattern::isFixed(int mode, int row, int col) const {
    (void)col;
    const int d = static_cast<int>(dims.size());
    if (mode == d - 1) return false;
    if (mode == j) return row < rank;
    return row == 0;
}

std::uint32_t CanonicalPattern::fixedValue(int mode, int row, int col) const {
    if (mode == j) return row == col ? 1u : 0u;
    return 1u;
}

long long CanonicalPattern::fixedCount() const {
    const int d = static_cast<int>(dims.size());
    return static_cast<long long>(rank) * rank + static_cast<long long>(rank) * (d - 2);
}

std::vector<std::array<int, 3>> CanonicalPattern::freeVariables() const {
    std::vector<std::array<int, 3>> vars;
    for (int mode = 0; mode < static_cast<int>(dims.size()); ++mode) {
        for (int row = 0; row < dims[mode]; ++row) {
            for (int col = 0; col < rank; ++col) {
                if (!isFixed(mode, row, col)) vars.push_back({mode, row, col});
            }
        }
    }
    return vars;
}

std::uint32_t evaluateEntry(const FactorMatrices& factors, const Index& x) {
    if (x.size() != factors.dims.size()) throw BoundsError("index arity mismatch");
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] < 0 || x[i] >= factors.dims[i]) throw BoundsError("index out of range");
    }
    std::uint32_t sum = 0;
    for (int l = 0; l < factors.rank; ++l) {
        std::uint32_t prod = 1;
        for (size_t i = 0; i < x.size(); ++i) prod = fp::mul(prod, factors.A[i].at(x[i], l));
        sum = fp::add(sum, prod);
    }
    return sum;
}

FieldMatrix solveLastFactor(const std::vector<FieldMatrix>& leading, const std::vector<int>& dims,
                            int r, const BasisChoice& basis,
                            const std::vector<std::vector<std::uint32_t>>& values) {
    const int d = static_cast<int>(dims.size());
    const int nd = dims.back();
    if (static_cast<int>(leading.size()) != d - 1) {
        throw BoundsError("expected d-1 leading factors");
    }
    FieldMatrix lastFactor(nd, r);
    for (int y = 0; y < nd; ++y) {
        if (static_cast<int>(basis.perRow[y].size()) != r ||
            static_cast<int>(values[y].size()) != r) {
            throw Assumption1Violated(y);
        }
        FieldMatrix coeffs(r, r);  // the matrix C: one row per basis sample
        for (int k = 0; k < r; ++k) {
            const Index& x = basis.perRow[y][k];
            for (int l = 0; l < r; ++l) {
                std::uint32_t prod = 1;
                for (int i = 0; i < d - 1; ++i) prod = fp::mul(prod, leading[i].at(x[i], l));
                coeffs.at(k, l) = prod;
            }
        }
        std::vector<std::uint32_t> row = fieldSolve(std::move(coeffs), values[y]);
        for (int l = 0; l < r; ++l) lastFactor.at(y, l) = row[l];
    }
    return lastFactor;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// When a canonical pattern is supplied, its fixed entries are held constant
// (excluded from the variable set) but evaluated at fresh random values each
// trial rather than the documented identity/ones defaults: Lemma-3-style
// gauge fixing works for any generic full-rank block, and the identity's
// structural zeros would make some basis choices singular identically
// instead of only on a measure-zero set.
FactorMatrices randomFactors(const std::vector<int>& dims, int r, std::mt19937_64& rng,
                             const CanonicalPattern* pattern) {
    (void)pattern;
    std::uniform_int_distribution<std::uint32_t> dist(1, fp::kPrime - 1);
    FactorMatrices factors(dims, r);
    for (size_t mode = 0; mode < dims.size(); ++mode) {
        for (int row = 0; row < dims[mode]; ++row) {
            for (int col = 0; col < r; ++col) {
                factors.A[mode].at(row, col) = dist(rng);
            }
        }
    }
    return factors;
}

// One Jacobian row per equation (observed entry), one column per variable.
// d(sum_l prod_i A_i[x_i,l]) / d A_m[x_m,l] = prod_{i != m} A_i[x_i,l].
FieldMatrix buildJacobian(const std::vector<Index>& equations, const FactorMatrices& factors,
                          const std::vector<std::array<int, 3>>& vars) {
    FieldMatrix jac(equations.size(), vars.size());
    for (size_t e = 0; e < equations.size(); ++e) {
        const Index& x = equations[e];
        // Per component l: full product and per-mode partials.
        for (size_t v = 0; v < vars.size(); ++v) {
            const auto [mode, row, col] = vars[v];
            if (x[mode] != row) continue;
            std::uint32_t prod = 1;
            for (size_t i = 0; i < x.size(); ++i) {
                if (static_cast<int>(i) == mode) continue;
                prod = fp::mul(prod, factors.A[i].at(x[i], col));
            }
            jac.at(e, v) = prod;
        }
    }
    return jac;
}

std::vector<Index> allCells(const std::vector<int>& dims) {
    std::vector<Index> cells;
    Index x(dims.size(), 0);
    while (true) {
        cells.push_back(x);
        int i = static_cast<int>(dims.size()) - 1;
        while (i >= 0 && ++x[i] == dims[i]) x[i--] = 0;
        if (i < 0) break;
    }
    return cells;
}

// Lexicographically smallest min(r, count) observed entries per mode-d row.
std::vector<char> basisEquationMask(const SamplingPattern& pattern, int r) {
    std::vector<int> taken(pattern.dims.back(), 0);
    std::vector<char> mask(pattern.observed.size(), 0);
    for (size_t e = 0; e < pattern.observed.size(); ++e) {
        int y = pattern.observed[e].back();
        if (taken[y] < r) {
            mask[e] = 1;
            ++taken[y];
        }
    }
    return mask;
}

}  // namespace

OracleReport genericJacobianRank(const SamplingPattern& pattern, int r, OracleMode mode,
                                 int trials, std::uint64_t seed) {
    OracleReport rep;
    rep.required = requiredCount(pattern.dims, r);
    rep.trials = trials;
    rep.seed = seed;
    rep.assumption1 = checkAssumption1(pattern, r).pass();

    const bool wantReduced = mode == OracleMode::Reduced || mode == OracleMode::All;
    const bool wantFull = mode == OracleMode::Full || mode == OracleMode::All;
    const bool wantVariety = mode == OracleMode::Variety || mode == OracleMode::All;

    CanonicalPattern canon;
    std::vector<std::array<int, 3>> reducedVars;
    if (wantReduced) {
        canon = CanonicalPattern(pattern.dims, r);
        reducedVars = canon.freeVariables();
    }
    std::vector<std::array<int, 3>> allVars;
    if (wantFull || wantVariety) {
        for (size_t mode_ = 0; mode_ < pattern.dims.size(); ++mode_) {
            for (int row = 0; row < pattern.dims[mode_]; ++row) {
                for (int col = 0; col < r; ++col) {
                    allVars.push_back({static_cast<int>(mode_), row, col});
                }
            }
        }
    }
    std::vector<Index> fullCells;
    if (wantVariety) fullCells = allCells(pattern.dims);
    std::vector<char> basisMask = basisEquationMask(pattern, r);
    std::vector<Index> basisEquations;
    for (size_t e = 0; e < pattern.observed.size(); ++e) {
        if (basisMask[e]) basisEquations.push_back(pattern.observed[e]);
    }

    const long long expectedBasisRank =
        static_cast<long long>(r) * pattern.dims.back();

    long long bestReduced = -1, bestBasis = -1, bestFull = -1, bestVariety = -1;
    std::vector<long long> perTrialKey;

    for (int t = 0; t < trials; ++t) {
        long long reduced = -1, basisRank = -1, full = -1, variety = -1;
        if (wantReduced) {
            int attempts = 0;
            while (true) {
                std::mt19937_64 rng(splitmix64(seed + 0x1000 * t + attempts));
                FactorMatrices factors = randomFactors(pattern.dims, r, rng, &canon);
                FieldMatrix jac = buildJacobian(pattern.observed, factors, reducedVars);
                long long total = static_cast<long long>(fieldRank(jac));
                FieldMatrix jbasis = buildJacobian(basisEquations, factors, reducedVars);
                basisRank = static_cast<long long>(fieldRank(jbasis));
                reduced = total - basisRank;
                if (!rep.assumption1 || basisRank == expectedBasisRank || ++attempts > 10) break;
            }
            if (rep.assumption1 && basisRank != expectedBasisRank) {
                throw SingularSystem("basis equations degenerate after retry budget");
            }
        }
        if (wantFull || wantVariety) {
            std::mt19937_64 rng(splitmix64(seed + 0x1000 * t + 0x500));
            FactorMatrices factors = randomFactors(pattern.dims, r, rng, nullptr);
            if (wantFull) {
                full = static_cast<long long>(
                    fieldRank(buildJacobian(pattern.observed, factors, allVars)));
            }
            if (wantVariety) {
                variety = static_cast<long long>(
                    fieldRank(buildJacobian(fullCells, factors, allVars)));
            }
        }
        perTrialKey.push_back(reduced + full + variety);
        bestReduced = std::max(bestReduced, reduced);
        bestBasis = std::max(bestBasis, basisRank);
        bestFull = std::max(bestFull, full);
        bestVariety = std::max(bestVariety, variety);
    }
    rep.reducedRank = bestReduced;
    rep.basisRank = bestBasis;
    rep.fullRank = bestFull;
    rep.varietyRank = bestVariety;
    long long bestKey = bestReduced + bestFull + bestVariety;
    rep.stableTrials =
        static_cast<int>(std::count(perTrialKey.begin(), perTrialKey.end(), bestKey));
    return rep;
}

long long selectionReducedRank(const SamplingPattern& pattern, int r, const BasisChoice& basis,
                               const ConstraintTensor& ct, const SliceSelection& sel, int trials,
                               std::uint64_t seed) {
    // The Eq-8 count places the fixed gauge pattern inside the rows covered
    // by the selection, so the variable set must be adapted per selection:
    // leading-factor entries in covered rows only, minus min(r, max m_i)
    // gauged rows in the mode with the largest coverage and one gauged row
    // per remaining leading mode. A_d stays fully variable; the basis-block
    // subtraction then measures the reduced polynomials' rank exactly.
    const int dm = static_cast<int>(ct.dims.size());
    std::vector<std::vector<char>> covered(dm);
    for (int i = 0; i < dm; ++i) covered[i].assign(ct.dims[i], 0);
    for (int s : sel.sliceIds) {
        for (const Index& pos : ct.sliceSupport(s)) {
            for (int i = 0; i < dm; ++i) covered[i][pos[i]] = 1;
        }
    }
    std::vector<int> m(dm, 0);
    for (int i = 0; i < dm; ++i) {
        for (char c : covered[i]) m[i] += c;
    }
    const int jStar =
        static_cast<int>(std::max_element(m.begin(), m.end()) - m.begin());
    std::vector<std::array<int, 3>> vars;
    for (int mode = 0; mode < dm; ++mode) {
        int toFix = mode == jStar ? std::min(r, m[mode]) : 1;
        for (int row = 0; row < ct.dims[mode]; ++row) {
            if (!covered[mode][row]) continue;
            if (toFix > 0) {
                --toFix;
                continue;
            }
            for (int col = 0; col < r; ++col) vars.push_back({mode, row, col});
        }
    }
    for (int row = 0; row < pattern.dims.back(); ++row) {
        for (int col = 0; col < r; ++col) vars.push_back({dm, row, col});
    }

    std::vector<Index> basisEquations;
    for (const auto& row : basis.perRow) {
        basisEquations.insert(basisEquations.end(), row.begin(), row.end());
    }
    std::vector<Index> equations = basisEquations;
    for (int s : sel.sliceIds) {
        Index x = ct.slices.at(s).extra;
        x.push_back(ct.slices.at(s).row);
        equations.push_back(std::move(x));
    }

    long long best = -1;
    for (int t = 0; t < trials; ++t) {
        std::mt19937_64 rng(splitmix64(seed + 0x1000 * t));
        FactorMatrices factors = randomFactors(pattern.dims, r, rng, nullptr);
        long long total = static_cast<long long>(fieldRank(buildJacobian(equations, factors, vars)));
        long long basisRank =
            static_cast<long long>(fieldRank(buildJacobian(basisEquations, factors, vars)));
        best = std::max(best, total - basisRank);
    }
    return best;
}

AgreementReport crossValidate(const SamplingPattern& pattern, int r, const CheckerLimits& limits,
                              int trials, std::uint64_t seed) {
    AgreementReport rep;
    rep.combinatorial = checkFinite(pattern, r, limits);
    rep.oracle = genericJacobianRank(pattern, r, OracleMode::All, trials, seed);
    const bool paper = rep.oracle.verdictPaperFinite();
    const bool variety = rep.oracle.verdictVarietyFinite();
    rep.paperVsVariety = paper == variety;
    rep.combinatorialConclusive = rep.combinatorial.verdict != FiniteVerdict::Inconclusive;
    if (rep.combinatorialConclusive) {
        rep.combVsPaper = (rep.combinatorial.verdict == FiniteVerdict::Finite) == paper;
    }
    rep.allAgree = rep.paperVsVariety && (!rep.combinatorialConclusive || rep.combVsPaper);
    return rep;
}

}  // namespace cptc
