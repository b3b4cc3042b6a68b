#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cptc/checker.hpp"
#include "cptc/constraint.hpp"
#include "cptc/field.hpp"
#include "cptc/pattern.hpp"

namespace cptc {

/// CP factor matrices A_1..A_d over F_p; A_i has shape n_i x r.
struct FactorMatrices {
    std::vector<int> dims;
    int rank = 0;
    std::vector<FieldMatrix> A;

    FactorMatrices() = default;
    FactorMatrices(std::vector<int> dims, int r);
};

/// The fixed entries selecting one decomposition per equivalence class:
/// an r x r identity block in the first r rows of A_j (j = 0) and an
/// all-ones row 0 in every other factor except the last.
struct CanonicalPattern {
    std::vector<int> dims;
    int rank = 0;
    int j = 0;

    CanonicalPattern() = default;
    CanonicalPattern(std::vector<int> dims, int r, int j = 0);

    bool isFixed(int mode, int row, int col) const;
    std::uint32_t fixedValue(int mode, int row, int col) const;
    long long fixedCount() const;
    /// Unfixed entries as (mode, row, col), in a deterministic order.
    std::vector<std::array<int, 3>> freeVariables() const;
};

std::uint32_t evaluateEntry(const FactorMatrices& factors, const Index& x);

/// Solves each row of the last factor from the r basis samples of that row.
/// `leading` holds A_1..A_{d-1}; `values.perRow[y][k]` is the sample at
/// `basis.perRow[y][k]`.
FieldMatrix solveLastFactor(const std::vector<FieldMatrix>& leading,
                            const std::vector<int>& dims, int r, const BasisChoice& basis,
                            const std::vector<std::vector<std::uint32_t>>& values);

enum class OracleMode { Reduced, Full, Variety, All };

struct OracleReport {
    long long reducedRank = -1;   // independent count among P(Omega)
    long long basisRank = -1;     // rank of the basis-equation block
    long long fullRank = -1;      // rank over all variables, observed cells
    long long varietyRank = -1;   // rank over all variables, every cell observed
    long long required = 0;       // Lemma-4 count
    bool assumption1 = false;
    int trials = 0;
    int stableTrials = 0;  // trials whose rank matched the reported maximum
    std::uint64_t seed = 0;
    std::uint32_t fieldPrime = fp::kPrime;

    bool verdictPaperFinite() const { return assumption1 && reducedRank == required; }
    bool verdictVarietyFinite() const { return fullRank >= 0 && fullRank == varietyRank; }
};

OracleReport genericJacobianRank(const SamplingPattern& pattern, int r,
                                 OracleMode mode = OracleMode::All, int trials = 3,
                                 std::uint64_t seed = 0);

/// Generic rank of the polynomials selected from a constraint tensor
/// (basis equations folded in and subtracted out), for bound cross-checks.
long long selectionReducedRank(const SamplingPattern& pattern, int r, const BasisChoice& basis,
                               const ConstraintTensor& ct, const SliceSelection& sel,
                               int trials = 3, std::uint64_t seed = 0);

struct AgreementReport {
    FiniteReport combinatorial;
    OracleReport oracle;
    bool paperVsVariety = false;       // verdicts agree
    bool combinatorialConclusive = false;
    bool combVsPaper = false;          // meaningful only when conclusive
    bool allAgree = false;
};

AgreementReport crossValidate(const SamplingPattern& pattern, int r,
                              const CheckerLimits& limits = {}, int trials = 3,
                              std::uint64_t seed = 0);

}  // namespace cptc
