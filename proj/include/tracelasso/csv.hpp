#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "tracelasso/linalg.hpp"

// Minimal numeric CSV reading and writing. Every file carries a header line;
// reals are written with 17 significant digits so they round-trip exactly.
namespace tracelasso::csv {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string format_real(double v);

/// Reads a dense numeric table. The first line is taken as a header when any
/// of its fields fails to parse as a number. Rows must all have the same
/// width.
Matrix read_matrix(std::istream& in, const std::string& source = "<stream>");
Matrix read_matrix_file(const std::string& path);

/// A single column, or a single row, read as a vector.
Vector read_vector_file(const std::string& path);

void write_matrix(std::ostream& out, const Matrix& m, const std::string& column_prefix = "x");

/// `index,coefficient` with 0-based indices.
void write_coefficients(std::ostream& out, const Vector& w);

}  // namespace tracelasso::csv
