#include "cptc/bounds.hpp"

#include <cmath>

namespace cptc {

namespace {

void requireEps(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidEpsilon();
}

}  // namespace

BoundResult matrixBoundL(double n, double k, double eps, std::optional<double> numColumns) {
    requireEps(eps);
    BoundResult res;
    res.perColumnL = std::max(12.0 * std::log(n / eps) + 12.0, 2.0 * k);
    res.applicability.emplace_back("k <= n/6", k <= n / 6.0);
    if (numColumns) {
        res.totalSamples = *numColumns * res.perColumnL;
        res.applicability.emplace_back("k(n-k) <= N", k * (n - k) <= *numColumns);
    } else {
        res.totalSamples = res.perColumnL;
    }
    return res;
}

BoundResult unfoldingBound(double n, int d, int r, double eps, int Isize) {
    requireEps(eps);
    if (Isize < 1 || Isize >= d) throw InvalidIsize();
    BoundResult res;
    const double nI = std::pow(n, Isize);
    res.perColumnL = std::max(12.0 * std::log(nI * r / eps) + 12.0, 2.0 * r);
    res.totalSamples = std::pow(n, d - Isize) * res.perColumnL;
    res.applicability.emplace_back("|I| < d/2", Isize < d / 2.0);
    res.applicability.emplace_back("r <= n/6", r <= n / 6.0);
    res.applicability.emplace_back("r(N_I - r) <= N_Ibar",
                                   r * (nI - r) <= std::pow(n, d - Isize));
    return res;
}

BoundResult bestUnfoldingBound(double n, int d, int r, double eps) {
    return unfoldingBound(n, d, r, eps, std::max(1, (d - 1) / 2));
}

BoundResult cpFiniteBound(double n, int d, int r, double eps) {
    requireEps(eps);
    if (d <= 2) throw OrderTooSmall();
    BoundResult res;
    res.perColumnL = std::max(
        27.0 * std::log(n / eps) + 9.0 * std::log(2.0 * r * (d - 2) / eps) + 18.0, 6.0 * r);
    res.totalSamples = n * n * res.perColumnL;
    res.applicability.emplace_back("n > 200", n > 200.0);
    res.applicability.emplace_back("n > r(d-2)", n > static_cast<double>(r) * (d - 2));
    res.applicability.emplace_back("r <= n/6", r <= n / 6.0);
    return res;
}

BoundResult cpUniqueBound(double n, int d, int r, double eps) {
    requireEps(eps);
    if (d <= 2) throw OrderTooSmall();
    BoundResult res;
    res.perColumnL = std::max(
        27.0 * std::log(2.0 * n / eps) + 9.0 * std::log(8.0 * r * (d - 2) / eps) + 18.0,
        6.0 * r);
    res.totalSamples = n * n * res.perColumnL;
    res.applicability.emplace_back("n > 200", n > 200.0);
    res.applicability.emplace_back("n > (r+2)(d-2)",
                                   n > static_cast<double>(r + 2) * (d - 2));
    res.applicability.emplace_back("r <= n/6", r <= n / 6.0);
    return res;
}

ProbabilityBound samplingProbabilityBound(double n, int d, int r, double eps,
                                          BoundVariant variant) {
    requireEps(eps);
    if (d <= 2) throw OrderTooSmall();
    const BoundResult perColumn =
        variant == BoundVariant::Finite ? cpFiniteBound(n, d, r, eps) : cpUniqueBound(n, d, r, eps);
    const double nPow = std::pow(n, d - 2);
    ProbabilityBound pb;
    pb.samplingProbability = perColumn.perColumnL / nPow + std::pow(nPow, -0.25);
    pb.successProbability =
        (1.0 - eps) * std::pow(1.0 - std::exp(-std::sqrt(nPow) / 2.0), n * n);
    return pb;
}

std::vector<Figure1Row> figure1Table(double n, int d, int rMin, int rMax, double eps) {
    if (rMin > rMax) throw BoundsError("rMin must not exceed rMax");
    std::vector<Figure1Row> rows;
    for (int r = rMin; r <= rMax; ++r) {
        Figure1Row row;
        row.r = r;
        row.unfoldingTotal = bestUnfoldingBound(n, d, r, eps).totalSamples;
        row.cpTotal = cpFiniteBound(n, d, r, eps).totalSamples;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace cptc
