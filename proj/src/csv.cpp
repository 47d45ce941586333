#include "tracelasso/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace tracelasso::csv {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool parse_real(std::string_view field, double& out) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    if (field.empty()) return false;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    return ec == std::errc() && ptr == field.data() + field.size();
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

}  // namespace

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Matrix read_matrix(std::istream& in, const std::string& source) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split(line);
        std::vector<double> row(fields.size());
        bool numeric = true;
        for (std::size_t i = 0; i < fields.size() && numeric; ++i) {
            numeric = parse_real(fields[i], row[i]);
        }
        if (!numeric) {
            if (rows.empty() && line_no == 1) continue;  // header
            throw ParseError(source + ":" + std::to_string(line_no) + ": non-numeric field");
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError(source + ":" + std::to_string(line_no) + ": expected " +
                             std::to_string(rows.front().size()) + " fields, got " +
                             std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(source + ": no data rows");

    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    if (!m.allFinite()) throw ParseError(source + ": non-finite value");
    return m;
}

Matrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    return read_matrix(in, path);
}

Vector read_vector_file(const std::string& path) {
    const Matrix m = read_matrix_file(path);
    if (m.cols() == 1) return m.col(0);
    if (m.rows() == 1) return m.row(0).transpose();
    // `index,coefficient` files as written by write_coefficients.
    if (m.cols() == 2) return m.col(1);
    throw ParseError(path + ": expected a single row or column");
}

void write_matrix(std::ostream& out, const Matrix& m, const std::string& column_prefix) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        out << (j ? "," : "") << column_prefix << (j + 1);
    }
    out << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            out << (j ? "," : "") << format_real(m(i, j));
        }
        out << '\n';
    }
}

void write_coefficients(std::ostream& out, const Vector& w) {
    out << "index,coefficient\n";
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        out << i << ',' << format_real(w(i)) << '\n';
    }
}

}  // namespace tracelasso::csv
