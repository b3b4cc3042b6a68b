#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cptc/bounds.hpp"
#include "cptc/checker.hpp"
#include "cptc/constraint.hpp"
#include "cptc/errors.hpp"
#include "cptc/experiments.hpp"
#include "cptc/oracle.hpp"
#include "cptc/pattern.hpp"

namespace py = pybind11;
using namespace cptc;

namespace {

const char* finiteName(FiniteVerdict v) {
    switch (v) {
        case FiniteVerdict::Finite: return "finite";
        case FiniteVerdict::NotFinite: return "notFinite";
        default: return "inconclusive";
    }
}

const char* uniqueName(UniqueVerdict v) {
    switch (v) {
        case UniqueVerdict::Unique: return "unique";
        case UniqueVerdict::Inconclusive: return "inconclusive";
        default: return "notApplicable";
    }
}

py::dict boundDict(const BoundResult& b) {
    py::dict d;
    d["per_column_l"] = b.perColumnL;
    d["total_samples"] = b.totalSamples;
    if (b.probabilityLowerBound) d["probability_lower_bound"] = *b.probabilityLowerBound;
    py::dict flags;
    for (const auto& [name, ok] : b.applicability) flags[py::str(name)] = ok;
    d["applicability"] = flags;
    d["all_applicable"] = b.allApplicable();
    return d;
}

}  // namespace

PYBIND11_MODULE(_cptc, m) {
    m.doc() = "Finite/unique completability checks for low-rank tensor sampling patterns";

    py::register_exception<ParseError>(m, "ParseError");
    py::register_exception<BoundsError>(m, "BoundsError");
    py::register_exception<Assumption1Violated>(m, "Assumption1Violated");

    py::class_<SamplingPattern>(m, "SamplingPattern")
        .def(py::init<std::vector<int>, std::vector<Index>>(), py::arg("dims"),
             py::arg("entries"))
        .def_readonly("dims", &SamplingPattern::dims)
        .def_readonly("observed", &SamplingPattern::observed)
        .def_property_readonly("order", &SamplingPattern::order)
        .def("observed_count", &SamplingPattern::observedCount)
        .def("is_observed", &SamplingPattern::isObserved)
        .def("__len__", [](const SamplingPattern& p) { return p.observed.size(); })
        .def("__repr__", [](const SamplingPattern& p) {
            std::ostringstream os;
            os << "SamplingPattern(d=" << p.order() << ", observed=" << p.observedCount() << ")";
            return os.str();
        });

    m.def(
        "read_pattern",
        [](const std::string& path, bool oneBased) { return readPattern(path, oneBased); },
        py::arg("path"), py::arg("one_based") = false);
    m.def(
        "write_pattern",
        [](const SamplingPattern& p, const std::string& path) { writePattern(p, path); },
        py::arg("pattern"), py::arg("path"));
    m.def(
        "parse_pattern",
        [](const std::string& text, bool oneBased) {
            std::istringstream in(text);
            return readPattern(in, oneBased);
        },
        py::arg("text"), py::arg("one_based") = false);

    m.def(
        "unfold",
        [](const SamplingPattern& p, const std::vector<int>& modes) {
            UnfoldingMatrix u = unfold(p, IndexSet{modes});
            py::dict d;
            d["rows"] = u.rows;
            d["cols"] = u.cols;
            d["nonzeros"] = u.nonzeros;
            return d;
        },
        py::arg("pattern"), py::arg("modes"));
    m.def(
        "mode_counts",
        [](const SamplingPattern& p) { return modeCounts(p); }, py::arg("pattern"));

    m.def(
        "check_assumption1",
        [](const SamplingPattern& p, int r) {
            Assumption1Report rep = checkAssumption1(p, r);
            py::dict d;
            d["row_counts"] = rep.rowCounts;
            d["pass"] = rep.pass();
            d["first_failing_row"] = rep.firstFailingRow();
            return d;
        },
        py::arg("pattern"), py::arg("rank"));

    py::class_<ConstraintTensor>(m, "ConstraintTensor")
        .def_readonly("dims", &ConstraintTensor::dims)
        .def_readonly("last_dim", &ConstraintTensor::lastDim)
        .def_readonly("rank", &ConstraintTensor::rank)
        .def_readonly("k_per_row", &ConstraintTensor::kPerRow)
        .def_property_readonly("K", &ConstraintTensor::K)
        .def("slice_support", &ConstraintTensor::sliceSupport)
        .def("nonzeros", &ConstraintTensor::nonzeros);

    m.def(
        "build_constraint_tensor",
        [](const SamplingPattern& p, int r) { return buildConstraintTensor(p, r); },
        py::arg("pattern"), py::arg("rank"));

    m.def("required_count",
          [](const std::vector<int>& dims, int r) { return requiredCount(dims, r); });

    m.def(
        "check_finite",
        [](const SamplingPattern& p, int r, long long budget, std::uint64_t seed) {
            CheckerLimits lim;
            lim.maxCandidateSearch = budget;
            lim.seed = seed;
            FiniteReport rep = checkFinite(p, r, lim);
            py::dict d;
            d["verdict"] = finiteName(rep.verdict);
            d["required"] = rep.required;
            d["witness"] = rep.witness;
            d["nodes_visited"] = rep.nodesVisited;
            d["reason"] = rep.reason;
            return d;
        },
        py::arg("pattern"), py::arg("rank"), py::arg("budget") = 200000, py::arg("seed") = 0);

    m.def(
        "check_unique",
        [](const SamplingPattern& p, int r, long long budget, std::uint64_t seed) {
            CheckerLimits lim;
            lim.maxCandidateSearch = budget;
            lim.seed = seed;
            UniqueReport rep = checkUnique(p, r, lim);
            py::dict d;
            d["verdict"] = uniqueName(rep.verdict);
            d["reason"] = rep.reason;
            return d;
        },
        py::arg("pattern"), py::arg("rank"), py::arg("budget") = 200000, py::arg("seed") = 0);

    m.def(
        "generic_jacobian_rank",
        [](const SamplingPattern& p, int r, int trials, std::uint64_t seed) {
            OracleReport rep = genericJacobianRank(p, r, OracleMode::All, trials, seed);
            py::dict d;
            d["reduced_rank"] = rep.reducedRank;
            d["basis_rank"] = rep.basisRank;
            d["full_rank"] = rep.fullRank;
            d["variety_rank"] = rep.varietyRank;
            d["required"] = rep.required;
            d["assumption1"] = rep.assumption1;
            d["finite_paper"] = rep.verdictPaperFinite();
            d["finite_variety"] = rep.verdictVarietyFinite();
            d["field_prime"] = rep.fieldPrime;
            return d;
        },
        py::arg("pattern"), py::arg("rank"), py::arg("trials") = 3, py::arg("seed") = 0);

    m.def(
        "matrix_bound",
        [](double n, double k, double eps) { return boundDict(matrixBoundL(n, k, eps)); },
        py::arg("n"), py::arg("k"), py::arg("eps"));
    m.def(
        "unfolding_bound",
        [](double n, int d, int r, double eps, int Isize) {
            return boundDict(unfoldingBound(n, d, r, eps, Isize));
        },
        py::arg("n"), py::arg("d"), py::arg("r"), py::arg("eps"), py::arg("i_size"));
    m.def(
        "cp_finite_bound",
        [](double n, int d, int r, double eps) { return boundDict(cpFiniteBound(n, d, r, eps)); },
        py::arg("n"), py::arg("d"), py::arg("r"), py::arg("eps"));
    m.def(
        "cp_unique_bound",
        [](double n, int d, int r, double eps) { return boundDict(cpUniqueBound(n, d, r, eps)); },
        py::arg("n"), py::arg("d"), py::arg("r"), py::arg("eps"));
    m.def(
        "figure1_table",
        [](double n, int d, int rMin, int rMax, double eps) {
            py::list out;
            for (const Figure1Row& row : figure1Table(n, d, rMin, rMax, eps)) {
                py::dict e;
                e["r"] = row.r;
                e["unfolding_total"] = row.unfoldingTotal;
                e["cp_total"] = row.cpTotal;
                out.append(e);
            }
            return out;
        },
        py::arg("n"), py::arg("d"), py::arg("r_min"), py::arg("r_max"), py::arg("eps"));

    m.def(
        "generate_pattern",
        [](const std::vector<int>& dims, double p, std::uint64_t seed, bool enforceA1, int rank) {
            GenConfig cfg;
            cfg.dims = dims;
            cfg.p = p;
            cfg.seed = seed;
            cfg.enforceAssumption1 = enforceA1;
            cfg.rank = rank;
            return generatePattern(cfg).pattern;
        },
        py::arg("dims"), py::arg("p"), py::arg("seed") = 0,
        py::arg("enforce_assumption1") = false, py::arg("rank") = 0);

    m.def(
        "run_experiment",
        [](const std::vector<int>& dims, int rank, const std::vector<double>& pGrid,
           int trialsPerP, std::uint64_t seed) {
            ExperimentConfig cfg;
            cfg.dims = dims;
            cfg.rank = rank;
            cfg.pGrid = pGrid;
            cfg.trialsPerP = trialsPerP;
            cfg.seed = seed;
            py::list out;
            for (const ExperimentRow& row : runExperiment(cfg)) {
                py::dict e;
                e["p"] = row.p;
                e["finite_fraction"] = row.finiteFraction;
                e["unique_fraction"] = row.uniqueFraction;
                e["mean_reduced_rank"] = row.meanReducedRank;
                e["assumption1_fail_fraction"] = row.assumption1FailFraction;
                out.append(e);
            }
            return out;
        },
        py::arg("dims"), py::arg("rank"), py::arg("p_grid"), py::arg("trials_per_p") = 1,
        py::arg("seed") = 0);
}
