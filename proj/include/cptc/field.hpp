#pragma once

#include <cstdint>
#include <vector>

#include "cptc/errors.hpp"

namespace cptc {

/// Arithmetic in the prime field F_p, p = 2^31 - 1.
namespace fp {

inline constexpr std::uint32_t kPrime = 2147483647u;

inline std::uint32_t add(std::uint32_t a, std::uint32_t b) {
    std::uint64_t s = static_cast<std::uint64_t>(a) + b;
    return s >= kPrime ? static_cast<std::uint32_t>(s - kPrime) : static_cast<std::uint32_t>(s);
}

inline std::uint32_t sub(std::uint32_t a, std::uint32_t b) {
    return a >= b ? a - b : a + kPrime - b;
}

inline std::uint32_t mul(std::uint32_t a, std::uint32_t b) {
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % kPrime);
}

inline std::uint32_t pow(std::uint32_t a, std::uint64_t e) {
    std::uint32_t acc = 1;
    while (e) {
        if (e & 1) acc = mul(acc, a);
        a = mul(a, a);
        e >>= 1;
    }
    return acc;
}

inline std::uint32_t inv(std::uint32_t a) {
    if (a == 0) throw SingularSystem("inverse of zero in F_p");
    return pow(a, kPrime - 2);
}

}  // namespace fp

/// Dense row-major matrix over F_p.
struct FieldMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint32_t> data;

    FieldMatrix() = default;
    FieldMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}
    std::uint32_t& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    std::uint32_t at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// Rank by Gaussian elimination over F_p. Destroys a local copy.
std::size_t fieldRank(FieldMatrix m);

/// Solves the square system a * x = b over F_p; throws SingularSystem.
std::vector<std::uint32_t> fieldSolve(FieldMatrix a, std::vector<std::uint32_t> b);

}  // namespace cptc
