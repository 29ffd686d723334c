#pragma once

#include <iosfwd>
#include <string>

#include "sdmm/field.hpp"
#include "sdmm/matrix.hpp"

namespace sdmm {

// Text matrix format: first line "rows cols", then rows lines of cols
// whitespace-separated nonnegative integers.

/// Parses a matrix; throws std::invalid_argument with a line-oriented message
/// on malformed input. Entries are read raw (not reduced).
Matrix read_matrix_text(std::istream& in);
Matrix read_matrix_file(const std::string& path);

void write_matrix_text(std::ostream& out, const Matrix& m);
std::string matrix_to_text(const Matrix& m);

/// Reduces every entry into the field; returns how many entries were >= q
/// (callers warn when nonzero).
std::size_t reduce_entries(Matrix& m, const PrimeField& field);

}  // namespace sdmm
