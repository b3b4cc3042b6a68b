#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cptc/errors.hpp"

namespace cptc {

/// A closed-form sample-complexity evaluation. Out-of-regime inputs still
/// evaluate; the applicability flags record which regime conditions hold.
/// All logarithms are natural.
struct BoundResult {
    double perColumnL = 0.0;
    double totalSamples = 0.0;
    std::optional<double> probabilityLowerBound;
    std::vector<std::pair<std::string, bool>> applicability;

    bool allApplicable() const {
        for (const auto& [name, ok] : applicability) {
            if (!ok) return false;
        }
        return true;
    }
};

/// Per-column observation count for an n x N rank-k matrix:
/// max{12 ln(n/eps) + 12, 2k}. When the column count N is supplied, the
/// total and the k(n-k) <= N flag are filled in.
BoundResult matrixBoundL(double n, double k, double eps,
                         std::optional<double> numColumns = std::nullopt);

/// Unfolding (Grassmannian) approach:
/// per column max{12 ln(n^|I| r / eps) + 12, 2r}, total n^(d-|I|) times that.
BoundResult unfoldingBound(double n, int d, int r, double eps, int Isize);

/// Best unfolding total over |I| = floor((d-1)/2).
BoundResult bestUnfoldingBound(double n, int d, int r, double eps);

/// CP approach, finite completability:
/// per column max{27 ln(n/eps) + 9 ln(2r(d-2)/eps) + 18, 6r}, total n^2 times that.
BoundResult cpFiniteBound(double n, int d, int r, double eps);

/// CP approach, unique completability: same shape with 2n and 8r(d-2) inside
/// the logarithms.
BoundResult cpUniqueBound(double n, int d, int r, double eps);

enum class BoundVariant { Finite, Unique };

struct ProbabilityBound {
    double samplingProbability = 0.0;  // lower bound on p
    double successProbability = 0.0;   // (1-eps)(1-exp(-sqrt(n^(d-2))/2))^(n^2)
};

ProbabilityBound samplingProbabilityBound(double n, int d, int r, double eps,
                                          BoundVariant variant);

struct Figure1Row {
    int r = 0;
    double unfoldingTotal = 0.0;
    double cpTotal = 0.0;
};

std::vector<Figure1Row> figure1Table(double n, int d, int rMin, int rMax, double eps);

}  // namespace cptc
