#pragma once

#include <cstdint>
#include <random>

#include "sdmm/field.hpp"
#include "sdmm/matrix.hpp"

namespace sdmm {

/// Seeded deterministic generator of exactly uniform field residues.
/// Rejection sampling over the 64-bit output keeps draws unbiased for any
/// modulus; identical seeds reproduce identical draw sequences.
class UniformFieldRng {
public:
    explicit UniformFieldRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t draw(const PrimeField& field) {
        const std::uint64_t q = field.modulus();
        const std::uint64_t rem = (UINT64_MAX % q + 1) % q;  // 2^64 mod q
        const std::uint64_t threshold = 0 - rem;             // 2^64 - rem, wraps to 0 iff rem == 0
        while (true) {
            std::uint64_t r = engine_();
            if (rem == 0 || r < threshold)
                return r % q;
        }
    }

    Matrix draw_matrix(std::size_t rows, std::size_t cols, const PrimeField& field) {
        Matrix m(rows, cols);
        for (std::uint64_t& e : m.entries())
            e = draw(field);
        return m;
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace sdmm
