#include "cptc/experiments.hpp"

#include <algorithm>
#include <random>

#include "cptc/oracle.hpp"

namespace cptc {

namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

GenResult generatePattern(const GenConfig& cfg) {
    if (cfg.p < 0.0 || cfg.p > 1.0) throw BoundsError("sampling probability must be in [0,1]");
    std::mt19937_64 rng(cfg.seed);
    std::bernoulli_distribution keep(cfg.p);

    const int d = static_cast<int>(cfg.dims.size());
    std::vector<Index> entries;
    Index x(d, 0);
    while (true) {
        if (cfg.p >= 1.0 || (cfg.p > 0.0 && keep(rng))) entries.push_back(x);
        int i = d - 1;
        while (i >= 0 && ++x[i] == cfg.dims[i]) x[i--] = 0;
        if (i < 0) break;
    }

    GenResult res{SamplingPattern(cfg.dims, entries), 0};
    if (!cfg.enforceAssumption1 || cfg.rank <= 0) return res;

    // Top up mode-d rows that fall short of r observations.
    const int nd = cfg.dims.back();
    std::vector<std::vector<Index>> perRow(nd);
    for (const Index& e : res.pattern.observed) perRow[e.back()].push_back(e);
    std::vector<Index> added;
    for (int y = 0; y < nd; ++y) {
        long long sliceCells = 1;
        for (int i = 0; i + 1 < d; ++i) sliceCells *= cfg.dims[i];
        while (static_cast<long long>(perRow[y].size()) < cfg.rank &&
               static_cast<long long>(perRow[y].size()) < sliceCells) {
            std::uniform_int_distribution<long long> cell(0, sliceCells - 1);
            long long code = cell(rng);
            Index cand(d);
            cand[d - 1] = y;
            long long rest = code;
            for (int i = d - 2; i >= 0; --i) {
                cand[i] = static_cast<int>(rest % cfg.dims[i]);
                rest /= cfg.dims[i];
            }
            if (std::find(perRow[y].begin(), perRow[y].end(), cand) != perRow[y].end()) continue;
            perRow[y].push_back(cand);
            added.push_back(cand);
            ++res.forcedAdditions;
        }
    }
    if (!added.empty()) {
        std::vector<Index> all = res.pattern.observed;
        all.insert(all.end(), added.begin(), added.end());
        res.pattern = SamplingPattern(cfg.dims, std::move(all));
    }
    return res;
}

std::vector<ExperimentRow> runExperiment(const ExperimentConfig& cfg) {
    std::vector<ExperimentRow> rows;
    const long long dReq = requiredCount(cfg.dims, cfg.rank);

    for (size_t pi = 0; pi < cfg.pGrid.size(); ++pi) {
        ExperimentRow row;
        row.p = cfg.pGrid[pi];
        long long finite = 0, unique = 0, a1fail = 0;
        double rankSum = 0.0;

        for (int trial = 0; trial < cfg.trialsPerP; ++trial) {
            GenConfig gen;
            gen.dims = cfg.dims;
            gen.p = row.p;
            gen.seed = mix(cfg.seed, pi * 1000003ULL + trial);
            gen.enforceAssumption1 = cfg.enforceAssumption1;
            gen.rank = cfg.rank;
            SamplingPattern pattern = generatePattern(gen).pattern;

            const bool a1 = checkAssumption1(pattern, cfg.rank).pass();
            if (!a1) ++a1fail;

            OracleReport oracle = genericJacobianRank(
                pattern, cfg.rank,
                cfg.checker == CheckerKind::OracleFull ? OracleMode::All : OracleMode::Reduced,
                cfg.oracleTrials, mix(gen.seed, 7));
            rankSum += static_cast<double>(std::max<long long>(0, oracle.reducedRank));

            bool isFinite = false;
            switch (cfg.checker) {
                case CheckerKind::OracleReduced:
                    isFinite = oracle.verdictPaperFinite();
                    break;
                case CheckerKind::OracleFull:
                    isFinite = oracle.verdictVarietyFinite();
                    break;
                case CheckerKind::Combinatorial:
                    isFinite = checkFinite(pattern, cfg.rank, cfg.limits).verdict ==
                               FiniteVerdict::Finite;
                    break;
            }
            if (isFinite) ++finite;

            if (isFinite && a1 && dReq > 0) {
                CheckerLimits uniqueLimits = cfg.limits;
                if (checkUnique(pattern, cfg.rank, uniqueLimits).verdict ==
                    UniqueVerdict::Unique) {
                    ++unique;
                }
            }
        }
        row.finiteFraction = static_cast<double>(finite) / cfg.trialsPerP;
        row.uniqueFraction = static_cast<double>(unique) / cfg.trialsPerP;
        row.meanReducedRank = rankSum / cfg.trialsPerP;
        row.assumption1FailFraction = static_cast<double>(a1fail) / cfg.trialsPerP;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace cptc
