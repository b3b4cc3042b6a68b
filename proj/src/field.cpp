#include "cptc/field.hpp"

namespace cptc {

std::size_t fieldRank(FieldMatrix m) {
    std::size_t rank = 0;
    for (std::size_t col = 0; col < m.cols && rank < m.rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < m.rows && m.at(pivot, col) == 0) ++pivot;
        if (pivot == m.rows) continue;
        if (pivot != rank) {
            for (std::size_t c = col; c < m.cols; ++c) std::swap(m.at(pivot, c), m.at(rank, c));
        }
        std::uint32_t pinv = fp::inv(m.at(rank, col));
        for (std::size_t r = rank + 1; r < m.rows; ++r) {
            std::uint32_t factor = fp::mul(m.at(r, col), pinv);
            if (factor == 0) continue;
            for (std::size_t c = col; c < m.cols; ++c) {
                m.at(r, c) = fp::sub(m.at(r, c), fp::mul(factor, m.at(rank, c)));
            }
        }
        ++rank;
    }
    return rank;
}

std::vector<std::uint32_t> fieldSolve(FieldMatrix a, std::vector<std::uint32_t> b) {
    if (a.rows != a.cols || b.size() != a.rows) throw SingularSystem("system is not square");
    const std::size_t n = a.rows;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a.at(pivot, col) == 0) ++pivot;
        if (pivot == n) throw SingularSystem("singular coefficient matrix");
        if (pivot != col) {
            for (std::size_t c = col; c < n; ++c) std::swap(a.at(pivot, c), a.at(col, c));
            std::swap(b[pivot], b[col]);
        }
        std::uint32_t pinv = fp::inv(a.at(col, col));
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            std::uint32_t factor = fp::mul(a.at(r, col), pinv);
            if (factor == 0) continue;
            for (std::size_t c = col; c < n; ++c) {
                a.at(r, c) = fp::sub(a.at(r, c), fp::mul(factor, a.at(col, c)));
            }
            b[r] = fp::sub(b[r], fp::mul(factor, b[col]));
        }
    }
    std::vector<std::uint32_t> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = fp::mul(b[i], fp::inv(a.at(i, i)));
    return x;
}

}  // namespace cptc
