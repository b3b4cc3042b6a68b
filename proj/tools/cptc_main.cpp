// cptc: finite/unique completability of partially observed CP-rank tensors.
//
// Exit codes: 0 definitive verdict, 2 inconclusive, 1 error/usage.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cptc/bounds.hpp"
#include "cptc/checker.hpp"
#include "cptc/constraint.hpp"
#include "cptc/experiments.hpp"
#include "cptc/oracle.hpp"
#include "cptc/pattern.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInconclusive = 2;

std::uint64_t defaultSeed() {
    if (const char* env = std::getenv("CPTC_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return 0;
}

json boundToJson(const cptc::BoundResult& b) {
    json j;
    j["per_column_l"] = b.perColumnL;
    j["total_samples"] = b.totalSamples;
    json flags = json::object();
    for (const auto& [name, ok] : b.applicability) flags[name] = ok;
    j["applicability"] = flags;
    return j;
}

const char* finiteName(cptc::FiniteVerdict v) {
    switch (v) {
        case cptc::FiniteVerdict::Finite: return "finite";
        case cptc::FiniteVerdict::NotFinite: return "notFinite";
        default: return "inconclusive";
    }
}

const char* uniqueName(cptc::UniqueVerdict v) {
    switch (v) {
        case cptc::UniqueVerdict::Unique: return "unique";
        case cptc::UniqueVerdict::NotApplicable: return "notApplicable";
        default: return "inconclusive";
    }
}

std::vector<double> parseGrid(const std::string& spec) {
    // "start:stop:step" or comma-separated list.
    std::vector<double> grid;
    if (spec.find(':') != std::string::npos) {
        double start, stop, step;
        char c1, c2;
        std::istringstream ss(spec);
        if (!(ss >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0) {
            throw cptc::ParseError("bad grid spec '" + spec + "', expected start:stop:step");
        }
        for (double p = start; p <= stop + 1e-12; p += step) grid.push_back(p);
    } else {
        std::istringstream ss(spec);
        std::string tok;
        while (std::getline(ss, tok, ',')) grid.push_back(std::stod(tok));
    }
    return grid;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Completability analysis of CP-rank sampling patterns"};
    app.require_subcommand(1);

    std::string patternPath, basisPath, outPath, sidecarPath, modeStr = "all",
                checkerStr = "oracle-reduced", gridSpec = "0.1:0.9:0.1", dimsSpec;
    int rank = 1, trials = 3, d = 3, rMin = 1, rMax = 1, isize = -1, trialsPerP = 20;
    double n = 1000, eps = 1e-3, prob = 0.5;
    std::uint64_t seed = defaultSeed();
    bool jsonOut = false, oneBased = false, integerOut = false, enforceA1 = false;
    cptc::CheckerLimits limits;

    auto addPattern = [&](CLI::App* cmd) {
        cmd->add_option("pattern", patternPath, "pattern file")->required();
        cmd->add_flag("--one-based", oneBased, "coordinates in the file are 1-based");
    };
    auto addLimits = [&](CLI::App* cmd) {
        cmd->add_option("--max-subset-exhaustive", limits.maxSubsetExhaustive);
        cmd->add_option("--max-candidate-search", limits.maxCandidateSearch);
        cmd->add_option("--seed", seed, "random seed (default from CPTC_SEED)");
    };

    auto* cmdFinite = app.add_subcommand("check-finite", "finite-completability verdict");
    addPattern(cmdFinite);
    cmdFinite->add_option("--rank", rank, "CP rank")->required();
    addLimits(cmdFinite);
    cmdFinite->add_flag("--json", jsonOut);

    auto* cmdUnique = app.add_subcommand("check-unique", "unique-completability verdict");
    addPattern(cmdUnique);
    cmdUnique->add_option("--rank", rank)->required();
    addLimits(cmdUnique);
    cmdUnique->add_flag("--json", jsonOut);

    auto* cmdConstraint = app.add_subcommand("constraint", "build the constraint tensor");
    addPattern(cmdConstraint);
    cmdConstraint->add_option("--rank", rank)->required();
    cmdConstraint->add_option("--basis", basisPath, "basis override file");
    cmdConstraint->add_option("--out", outPath, "output pattern file (default stdout)");
    cmdConstraint->add_option("--sidecar", sidecarPath, "slice-to-row mapping file");

    auto* cmdOracle = app.add_subcommand("oracle", "generic Jacobian rank over F_p");
    addPattern(cmdOracle);
    cmdOracle->add_option("--rank", rank)->required();
    cmdOracle->add_option("--mode", modeStr, "reduced|full|variety|all");
    cmdOracle->add_option("--trials", trials);
    cmdOracle->add_option("--seed", seed);
    cmdOracle->add_flag("--json", jsonOut, "output is always JSON; accepted for consistency");

    auto* cmdBounds = app.add_subcommand("bounds", "evaluate sample-complexity bounds");
    cmdBounds->add_option("--n", n)->required();
    cmdBounds->add_option("--d", d)->required();
    cmdBounds->add_option("--rank", rank)->required();
    cmdBounds->add_option("--eps", eps)->required();
    cmdBounds->add_option("--isize", isize, "unfolding |I| (default floor((d-1)/2))");
    cmdBounds->add_flag("--integer", integerOut, "report ceil(value)+1 integer counts");
    cmdBounds->add_flag("--json", jsonOut, "output is always JSON; accepted for consistency");

    auto* cmdFigure = app.add_subcommand("figure1", "CSV sweep of unfolding vs CP totals");
    cmdFigure->add_option("--n", n);
    cmdFigure->add_option("--d", d);
    cmdFigure->add_option("--eps", eps);
    cmdFigure->add_option("--rmin", rMin);
    cmdFigure->add_option("--rmax", rMax)->required();
    cmdFigure->add_option("--out", outPath, "output CSV file (default stdout)");

    auto* cmdGen = app.add_subcommand("gen", "generate a random sampling pattern");
    cmdGen->add_option("--dims", dimsSpec, "comma-separated sizes")->required();
    cmdGen->add_option("--p", prob)->required();
    cmdGen->add_option("--seed", seed);
    cmdGen->add_flag("--enforce-assumption1", enforceA1);
    cmdGen->add_option("--rank", rank);
    cmdGen->add_option("--out", outPath);

    auto* cmdExp = app.add_subcommand("experiment", "Monte-Carlo completability sweep");
    cmdExp->add_option("--dims", dimsSpec)->required();
    cmdExp->add_option("--rank", rank)->required();
    cmdExp->add_option("--pgrid", gridSpec, "start:stop:step or comma list");
    cmdExp->add_option("--trials", trialsPerP, "trials per grid point");
    cmdExp->add_option("--seed", seed);
    cmdExp->add_option("--checker", checkerStr, "oracle-reduced|oracle-full|combinatorial");
    cmdExp->add_flag("--enforce-assumption1", enforceA1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    limits.seed = seed;

    try {
        if (cmdFinite->parsed()) {
            auto pattern = cptc::readPattern(patternPath, oneBased);
            auto rep = cptc::checkFinite(pattern, rank, limits);
            if (jsonOut) {
                json j{{"verdict", finiteName(rep.verdict)},
                       {"required", rep.required},
                       {"witness", rep.witness},
                       {"reason", rep.reason}};
                std::cout << j.dump(2) << '\n';
            } else {
                std::cout << finiteName(rep.verdict) << " (required " << rep.required << ")";
                if (!rep.reason.empty()) std::cout << " - " << rep.reason;
                std::cout << '\n';
            }
            return rep.verdict == cptc::FiniteVerdict::Inconclusive ? kExitInconclusive : kExitOk;
        }

        if (cmdUnique->parsed()) {
            auto pattern = cptc::readPattern(patternPath, oneBased);
            auto rep = cptc::checkUnique(pattern, rank, limits);
            if (jsonOut) {
                json j{{"verdict", uniqueName(rep.verdict)}, {"reason", rep.reason}};
                if (rep.witness) {
                    j["witness"] = {{"finite_part", rep.witness->finitePart},
                                    {"extras", rep.witness->extras}};
                }
                std::cout << j.dump(2) << '\n';
            } else {
                std::cout << uniqueName(rep.verdict);
                if (!rep.reason.empty()) std::cout << " - " << rep.reason;
                std::cout << '\n';
            }
            return rep.verdict == cptc::UniqueVerdict::Inconclusive ? kExitInconclusive : kExitOk;
        }

        if (cmdConstraint->parsed()) {
            auto pattern = cptc::readPattern(patternPath, oneBased);
            auto basis = basisPath.empty() ? cptc::defaultBasis(pattern, rank)
                                           : cptc::readBasis(basisPath, pattern, rank, oneBased);
            auto ct = cptc::buildConstraintTensor(pattern, rank, basis);
            auto asPattern = cptc::constraintAsPattern(ct);
            if (outPath.empty()) {
                cptc::writePattern(asPattern, std::cout);
            } else {
                cptc::writePattern(asPattern, outPath);
            }
            if (!sidecarPath.empty()) {
                std::ofstream side(sidecarPath);
                for (int s = 0; s < ct.K(); ++s) side << s << ' ' << ct.slices[s].row << '\n';
            }
            return kExitOk;
        }

        if (cmdOracle->parsed()) {
            auto pattern = cptc::readPattern(patternPath, oneBased);
            cptc::OracleMode mode = cptc::OracleMode::All;
            if (modeStr == "reduced") mode = cptc::OracleMode::Reduced;
            else if (modeStr == "full") mode = cptc::OracleMode::Full;
            else if (modeStr == "variety") mode = cptc::OracleMode::Variety;
            else if (modeStr != "all") throw cptc::ParseError("unknown oracle mode '" + modeStr + "'");
            auto rep = cptc::genericJacobianRank(pattern, rank, mode, trials, seed);
            json j{{"reduced_rank", rep.reducedRank},
                   {"basis_rank", rep.basisRank},
                   {"full_rank", rep.fullRank},
                   {"variety_rank", rep.varietyRank},
                   {"required", rep.required},
                   {"assumption1", rep.assumption1},
                   {"verdict_paper_finite", rep.verdictPaperFinite()},
                   {"verdict_variety_finite", rep.verdictVarietyFinite()},
                   {"trials", rep.trials},
                   {"stable_trials", rep.stableTrials},
                   {"field_prime", rep.fieldPrime},
                   {"seed", rep.seed}};
            std::cout << j.dump(2) << '\n';
            return kExitOk;
        }

        if (cmdBounds->parsed()) {
            auto round = [&](double v) {
                return integerOut ? std::ceil(v) + 1.0 : v;
            };
            int bestI = isize > 0 ? isize : std::max(1, (d - 1) / 2);
            auto unf = cptc::unfoldingBound(n, d, rank, eps, bestI);
            json j;
            j["unfolding"] = boundToJson(unf);
            j["unfolding"]["isize"] = bestI;
            if (d > 2) {
                j["cp_finite"] = boundToJson(cptc::cpFiniteBound(n, d, rank, eps));
                j["cp_unique"] = boundToJson(cptc::cpUniqueBound(n, d, rank, eps));
                auto pf = cptc::samplingProbabilityBound(n, d, rank, eps, cptc::BoundVariant::Finite);
                auto pu = cptc::samplingProbabilityBound(n, d, rank, eps, cptc::BoundVariant::Unique);
                j["sampling_probability"] = {{"finite", pf.samplingProbability},
                                             {"unique", pu.samplingProbability},
                                             {"success_probability", pf.successProbability}};
            }
            if (integerOut) {
                for (auto& [key, val] : j.items()) {
                    if (val.contains("per_column_l")) {
                        val["per_column_l"] = round(val["per_column_l"].get<double>());
                        val["total_samples"] = round(val["total_samples"].get<double>());
                    }
                }
            }
            std::cout << j.dump(2) << '\n';
            return kExitOk;
        }

        if (cmdFigure->parsed()) {
            auto rows = cptc::figure1Table(n, d, rMin, rMax, eps);
            std::ostringstream csv;
            csv << "r,unfolding_total,cp_total\n";
            for (const auto& row : rows) {
                csv << row.r << ',' << row.unfoldingTotal << ',' << row.cpTotal << '\n';
            }
            if (outPath.empty()) {
                std::cout << csv.str();
            } else {
                std::ofstream out(outPath);
                out << csv.str();
            }
            return kExitOk;
        }

        if (cmdGen->parsed()) {
            cptc::GenConfig cfg;
            for (const double v : parseGrid(dimsSpec)) cfg.dims.push_back(static_cast<int>(v));
            cfg.p = prob;
            cfg.seed = seed;
            cfg.enforceAssumption1 = enforceA1;
            cfg.rank = rank;
            auto res = cptc::generatePattern(cfg);
            if (outPath.empty()) {
                cptc::writePattern(res.pattern, std::cout);
            } else {
                cptc::writePattern(res.pattern, outPath);
            }
            if (res.forcedAdditions > 0) {
                std::cerr << "forced " << res.forcedAdditions
                          << " additional entries to satisfy assumption 1\n";
            }
            return kExitOk;
        }

        if (cmdExp->parsed()) {
            cptc::ExperimentConfig cfg;
            for (const double v : parseGrid(dimsSpec)) cfg.dims.push_back(static_cast<int>(v));
            cfg.rank = rank;
            cfg.pGrid = parseGrid(gridSpec);
            cfg.trialsPerP = trialsPerP;
            cfg.seed = seed;
            cfg.enforceAssumption1 = enforceA1;
            if (checkerStr == "oracle-reduced") cfg.checker = cptc::CheckerKind::OracleReduced;
            else if (checkerStr == "oracle-full") cfg.checker = cptc::CheckerKind::OracleFull;
            else if (checkerStr == "combinatorial") cfg.checker = cptc::CheckerKind::Combinatorial;
            else throw cptc::ParseError("unknown checker '" + checkerStr + "'");
            auto rows = cptc::runExperiment(cfg);
            std::cout << "p,finite_fraction,unique_fraction,mean_reduced_rank,"
                         "assumption1_fail_fraction\n";
            for (const auto& row : rows) {
                std::cout << row.p << ',' << row.finiteFraction << ',' << row.uniqueFraction
                          << ',' << row.meanReducedRank << ',' << row.assumption1FailFraction
                          << '\n';
            }
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
