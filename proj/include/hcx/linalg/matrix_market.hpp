#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "hcx/linalg/sym_matrix.hpp"

namespace hcx {

/// Writes the lower triangle in "coordinate real symmetric" form, 1-based.
inline void write_matrix_market(std::ostream& os, const SymMatrix& m) {
    const auto upper = m.upper_triplets();
    os << "%%MatrixMarket matrix coordinate real symmetric\n";
    os << m.size() << ' ' << m.size() << ' ' << upper.size() << '\n';
    os << std::setprecision(17);
    for (const auto& t : upper) os << (t.col + 1) << ' ' << (t.row + 1) << ' ' << t.value << '\n';
}

inline void write_matrix_market(const std::filesystem::path& path, const SymMatrix& m) {
    std::ofstream os(path);
    if (!os) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    write_matrix_market(os, m);
    if (!os) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

/// Reads coordinate real/integer matrices, symmetric or general. For general
/// files the upper triangle is authoritative.
inline SymMatrix read_matrix_market(std::istream& is, Layout layout = Layout::Automatic) {
    std::string line;
    if (!std::getline(is, line)) throw Error(ErrorCode::ParseError, "empty Matrix Market stream");
    std::string lower = line;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    std::istringstream header(lower);
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%matrixmarket" || object != "matrix" || format != "coordinate")
        throw Error(ErrorCode::ParseError, "unsupported Matrix Market header: " + line);
    if (field != "real" && field != "integer" && field != "double")
        throw Error(ErrorCode::ParseError, "unsupported field '" + field + "'");
    const bool symmetric = symmetry == "symmetric";
    if (!symmetric && symmetry != "general")
        throw Error(ErrorCode::ParseError, "unsupported symmetry '" + symmetry + "'");

    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '%') continue;
        break;
    }
    std::istringstream sizes(line);
    std::size_t rows = 0, cols = 0, nnz = 0;
    if (!(sizes >> rows >> cols >> nnz)) throw Error(ErrorCode::ParseError, "bad size line: " + line);
    if (rows != cols) throw Error(ErrorCode::ParseError, "matrix is not square");

    std::vector<Triplet> t;
    t.reserve(nnz);
    for (std::size_t k = 0; k < nnz; ++k) {
        std::size_t i = 0, j = 0;
        double v = 0.0;
        if (!(is >> i >> j >> v)) throw Error(ErrorCode::ParseError, "truncated entry list");
        if (i == 0 || j == 0 || i > rows || j > cols) throw Error(ErrorCode::ParseError, "entry index out of range");
        t.push_back({i - 1, j - 1, v});
    }
    return SymMatrix::from_triplets(rows, t, layout);
}

inline SymMatrix read_matrix_market(const std::filesystem::path& path, Layout layout = Layout::Automatic) {
    std::ifstream is(path);
    if (!is) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    return read_matrix_market(is, layout);
}

}  // namespace hcx
