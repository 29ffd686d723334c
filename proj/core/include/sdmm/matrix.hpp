#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sdmm/field.hpp"

namespace sdmm {

/// Dense row-major matrix of field residues. The matrix does not carry its
/// field; operations that need one take a PrimeField argument.
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::size_t rows, std::size_t cols, std::vector<std::uint64_t> entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return entries_.size(); }

    std::uint64_t& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    std::uint64_t operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    std::span<const std::uint64_t> entries() const { return entries_; }
    std::span<std::uint64_t> entries() { return entries_; }

    bool operator==(const Matrix&) const = default;

    static Matrix identity(std::size_t n);

private:
    std::size_t rows_, cols_;
    std::vector<std::uint64_t> entries_;
};

/// A grid of equally-shaped blocks cut from a dense matrix.
class BlockGrid {
public:
    BlockGrid(std::size_t grid_rows, std::size_t grid_cols, std::vector<Matrix> blocks);

    std::size_t grid_rows() const { return grid_rows_; }
    std::size_t grid_cols() const { return grid_cols_; }
    std::size_t block_rows() const { return blocks_.front().rows(); }
    std::size_t block_cols() const { return blocks_.front().cols(); }

    const Matrix& block(std::size_t i, std::size_t j) const { return blocks_[i * grid_cols_ + j]; }
    Matrix& block(std::size_t i, std::size_t j) { return blocks_[i * grid_cols_ + j]; }

private:
    std::size_t grid_rows_, grid_cols_;
    std::vector<Matrix> blocks_;
};

/// Cuts m into grid_rows x grid_cols contiguous blocks. Throws
/// std::invalid_argument naming the offending axis when a dimension is not
/// divisible by its grid count.
BlockGrid partition(const Matrix& m, std::size_t grid_rows, std::size_t grid_cols);

/// Inverse of partition.
Matrix reassemble(const BlockGrid& grid);

Matrix add(const Matrix& a, const Matrix& b, const PrimeField& field);
Matrix multiply(const Matrix& a, const Matrix& b, const PrimeField& field);
Matrix scale(const Matrix& a, std::uint64_t factor, const PrimeField& field);

/// dest += src * factor, elementwise over the field.
void accumulate_scaled(Matrix& dest, const Matrix& src, std::uint64_t factor,
                       const PrimeField& field);

/// Rank over the field by Gaussian elimination (input taken by value).
std::size_t field_rank(Matrix m, const PrimeField& field);

/// True for a square matrix of full rank.
bool is_invertible(const Matrix& m, const PrimeField& field);

/// Zero-pads m on the bottom/right up to the next multiples of the given
/// divisors (no-op when already divisible).
Matrix pad_to_multiple(const Matrix& m, std::size_t row_divisor, std::size_t col_divisor);

/// Top-left rows x cols corner of m.
Matrix crop(const Matrix& m, std::size_t rows, std::size_t cols);

}  // namespace sdmm
