#pragma once

#include <cstdint>
#include <vector>

#include "cptc/checker.hpp"
#include "cptc/pattern.hpp"

namespace cptc {

struct GenConfig {
    std::vector<int> dims;
    double p = 0.0;  // per-entry inclusion probability
    std::uint64_t seed = 0;
    bool enforceAssumption1 = false;
    int rank = 0;  // only used when enforcing assumption 1
};

struct GenResult {
    SamplingPattern pattern;
    long long forcedAdditions = 0;  // entries added to reach r per mode-d row
};

GenResult generatePattern(const GenConfig& cfg);

enum class CheckerKind { OracleReduced, OracleFull, Combinatorial };

struct ExperimentConfig {
    std::vector<int> dims;
    int rank = 1;
    std::vector<double> pGrid;  // sorted ascending
    int trialsPerP = 1;
    std::uint64_t seed = 0;
    CheckerKind checker = CheckerKind::OracleReduced;
    bool enforceAssumption1 = false;
    int oracleTrials = 2;
    CheckerLimits limits{.maxCandidateSearch = 2000};
};

struct ExperimentRow {
    double p = 0.0;
    double finiteFraction = 0.0;
    double uniqueFraction = 0.0;
    double meanReducedRank = 0.0;
    double assumption1FailFraction = 0.0;
};

std::vector<ExperimentRow> runExperiment(const ExperimentConfig& cfg);

}  // namespace cptc
