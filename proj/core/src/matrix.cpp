#include "sdmm/matrix.hpp"

#include <stdexcept>
#include <string>

namespace sdmm {

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, 0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<std::uint64_t> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_)
        throw std::invalid_argument("Matrix: entry count " + std::to_string(entries_.size()) +
                                    " does not match shape " + std::to_string(rows_) + "x" +
                                    std::to_string(cols_));
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

BlockGrid::BlockGrid(std::size_t grid_rows, std::size_t grid_cols, std::vector<Matrix> blocks)
    : grid_rows_(grid_rows), grid_cols_(grid_cols), blocks_(std::move(blocks)) {
    if (grid_rows_ == 0 || grid_cols_ == 0 || blocks_.size() != grid_rows_ * grid_cols_)
        throw std::invalid_argument("BlockGrid: block count does not match grid shape");
    for (const Matrix& b : blocks_) {
        if (b.rows() != blocks_.front().rows() || b.cols() != blocks_.front().cols())
            throw std::invalid_argument("BlockGrid: ragged blocks");
    }
}

BlockGrid partition(const Matrix& m, std::size_t grid_rows, std::size_t grid_cols) {
    if (grid_rows == 0 || m.rows() % grid_rows != 0)
        throw std::invalid_argument("partition: rows (" + std::to_string(m.rows()) +
                                    ") not divisible by grid rows (" + std::to_string(grid_rows) + ")");
    if (grid_cols == 0 || m.cols() % grid_cols != 0)
        throw std::invalid_argument("partition: cols (" + std::to_string(m.cols()) +
                                    ") not divisible by grid cols (" + std::to_string(grid_cols) + ")");
    const std::size_t br = m.rows() / grid_rows;
    const std::size_t bc = m.cols() / grid_cols;
    std::vector<Matrix> blocks;
    blocks.reserve(grid_rows * grid_cols);
    for (std::size_t gi = 0; gi < grid_rows; ++gi) {
        for (std::size_t gj = 0; gj < grid_cols; ++gj) {
            Matrix block(br, bc);
            for (std::size_t r = 0; r < br; ++r)
                for (std::size_t c = 0; c < bc; ++c)
                    block(r, c) = m(gi * br + r, gj * bc + c);
            blocks.push_back(std::move(block));
        }
    }
    return {grid_rows, grid_cols, std::move(blocks)};
}

Matrix reassemble(const BlockGrid& grid) {
    const std::size_t br = grid.block_rows();
    const std::size_t bc = grid.block_cols();
    Matrix m(grid.grid_rows() * br, grid.grid_cols() * bc);
    for (std::size_t gi = 0; gi < grid.grid_rows(); ++gi)
        for (std::size_t gj = 0; gj < grid.grid_cols(); ++gj) {
            const Matrix& block = grid.block(gi, gj);
            for (std::size_t r = 0; r < br; ++r)
                for (std::size_t c = 0; c < bc; ++c)
                    m(gi * br + r, gj * bc + c) = block(r, c);
        }
    return m;
}

namespace {
void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument(std::string(op) + ": shape mismatch " +
                                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                    " vs " + std::to_string(b.rows()) + "x" +
                                    std::to_string(b.cols()));
}
}  // namespace

Matrix add(const Matrix& a, const Matrix& b, const PrimeField& field) {
    require_same_shape(a, b, "add");
    Matrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < out.size(); ++i)
        out.entries()[i] = field.add(a.entries()[i], b.entries()[i]);
    return out;
}

Matrix multiply(const Matrix& a, const Matrix& b, const PrimeField& field) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("multiply: inner dimensions disagree (" +
                                    std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + ")");
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const std::uint64_t aik = a(i, k);
            if (aik == 0)
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                out(i, j) = field.add(out(i, j), field.mul(aik, b(k, j)));
        }
    }
    return out;
}

Matrix scale(const Matrix& a, std::uint64_t factor, const PrimeField& field) {
    Matrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < out.size(); ++i)
        out.entries()[i] = field.mul(a.entries()[i], factor);
    return out;
}

void accumulate_scaled(Matrix& dest, const Matrix& src, std::uint64_t factor,
                       const PrimeField& field) {
    require_same_shape(dest, src, "accumulate_scaled");
    for (std::size_t i = 0; i < dest.size(); ++i)
        dest.entries()[i] = field.add(dest.entries()[i], field.mul(src.entries()[i], factor));
}

std::size_t field_rank(Matrix m, const PrimeField& field) {
    std::size_t rank = 0;
    for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
        std::size_t pivot = rank;
        while (pivot < m.rows() && m(pivot, col) == 0)
            ++pivot;
        if (pivot == m.rows())
            continue;
        for (std::size_t c = 0; c < m.cols(); ++c)
            std::swap(m(rank, c), m(pivot, c));
        const std::uint64_t inv = field.inv(m(rank, col));
        for (std::size_t c = col; c < m.cols(); ++c)
            m(rank, c) = field.mul(m(rank, c), inv);
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == rank || m(r, col) == 0)
                continue;
            const std::uint64_t f = m(r, col);
            for (std::size_t c = col; c < m.cols(); ++c)
                m(r, c) = field.sub(m(r, c), field.mul(f, m(rank, c)));
        }
        ++rank;
    }
    return rank;
}

bool is_invertible(const Matrix& m, const PrimeField& field) {
    return m.rows() == m.cols() && field_rank(m, field) == m.rows();
}

Matrix pad_to_multiple(const Matrix& m, std::size_t row_divisor, std::size_t col_divisor) {
    if (row_divisor == 0 || col_divisor == 0)
        throw std::invalid_argument("pad_to_multiple: divisors must be positive");
    const std::size_t rows = (m.rows() + row_divisor - 1) / row_divisor * row_divisor;
    const std::size_t cols = (m.cols() + col_divisor - 1) / col_divisor * col_divisor;
    if (rows == m.rows() && cols == m.cols())
        return m;
    Matrix out(rows, cols);
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            out(r, c) = m(r, c);
    return out;
}

Matrix crop(const Matrix& m, std::size_t rows, std::size_t cols) {
    if (rows > m.rows() || cols > m.cols())
        throw std::invalid_argument("crop: target exceeds source shape");
    Matrix out(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            out(r, c) = m(r, c);
    return out;
}

}  // namespace sdmm
