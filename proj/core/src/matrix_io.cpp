#include "sdmm/matrix_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sdmm {

Matrix read_matrix_text(std::istream& in) {
    std::size_t rows = 0, cols = 0;
    if (!(in >> rows >> cols))
        throw std::invalid_argument("matrix header must be \"rows cols\"");
    if (rows == 0 || cols == 0)
        throw std::invalid_argument("matrix dimensions must be positive");
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            std::uint64_t v = 0;
            if (!(in >> v))
                throw std::invalid_argument("matrix body ended early at row " +
                                            std::to_string(r + 1) + ", col " +
                                            std::to_string(c + 1) +
                                            " (entries must be nonnegative integers)");
            m(r, c) = v;
        }
    }
    return m;
}

Matrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open matrix file: " + path);
    try {
        return read_matrix_text(in);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

void write_matrix_text(std::ostream& out, const Matrix& m) {
    out << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c > 0)
                out << ' ';
            out << m(r, c);
        }
        out << '\n';
    }
}

std::string matrix_to_text(const Matrix& m) {
    std::ostringstream out;
    write_matrix_text(out, m);
    return out.str();
}

std::size_t reduce_entries(Matrix& m, const PrimeField& field) {
    std::size_t reduced = 0;
    for (std::uint64_t& e : m.entries()) {
        if (e >= field.modulus()) {
            e = field.reduce(e);
            ++reduced;
        }
    }
    return reduced;
}

}  // namespace sdmm
