#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cptc/constraint.hpp"

namespace cptc {

struct SliceSelection {
    std::vector<int> sliceIds;  // duplicate-free, sorted
};

struct CheckerLimits {
    int maxSubsetExhaustive = 20;
    long long maxCandidateSearch = 200000;  // DFS node budget
    long long randomSubsetSamples = 20000;  // falsification budget above the exhaustive cap
    std::uint64_t seed = 0;
};

/// Lemma-4 dimension count: r(sum of the first d-1 sizes) - r^2 - r(d-2).
long long requiredCount(const std::vector<int>& dims, int r);
long long requiredCount(const ConstraintTensor& ct);

long long independenceUpperBound(const ConstraintTensor& ct, const SliceSelection& sel);
bool satisfiesEq9(const ConstraintTensor& ct, const SliceSelection& sel);

enum class SubsetVerdict { Verified, Refuted, Inconclusive };

struct SubsetReport {
    SubsetVerdict verdict = SubsetVerdict::Inconclusive;
    std::vector<int> witness;  // a violating subset, when refuted
};

/// Checks every nonempty subset of the selection against the independence
/// inequality; randomized falsification above the exhaustive cap.
SubsetReport allSubsetsSatisfyEq9(const ConstraintTensor& ct, const SliceSelection& sel,
                                  const CheckerLimits& limits = {});

enum class FiniteVerdict { Finite, NotFinite, Inconclusive };

struct FiniteReport {
    FiniteVerdict verdict = FiniteVerdict::Inconclusive;
    long long required = 0;
    std::vector<int> witness;  // selection of size dReq, when finite
    long long nodesVisited = 0;
    bool exhausted = false;  // search space fully enumerated
    std::string reason;
};

FiniteReport checkFinite(const ConstraintTensor& ct, const CheckerLimits& limits = {});

/// Convenience wrapper that also handles Assumption 1 failure (reported as
/// notFinite with a reason rather than an exception).
FiniteReport checkFinite(const SamplingPattern& pattern, int r, const CheckerLimits& limits = {});

enum class UniqueVerdict { Unique, Inconclusive, NotApplicable };

struct UniqueWitness {
    std::vector<int> finitePart;
    std::vector<std::vector<int>> extras;  // 2d-2 disjoint selections
};

struct UniqueReport {
    UniqueVerdict verdict = UniqueVerdict::NotApplicable;
    std::optional<UniqueWitness> witness;
    std::string reason;
};

UniqueReport checkUnique(const ConstraintTensor& ct, const CheckerLimits& limits = {});
UniqueReport checkUnique(const SamplingPattern& pattern, int r, const CheckerLimits& limits = {});

}  // namespace cptc
