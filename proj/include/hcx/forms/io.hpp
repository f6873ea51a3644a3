#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "hcx/forms/form_pair.hpp"
#include "hcx/linalg/matrix_market.hpp"

namespace hcx {

/// Writes S1.mtx, S2.mtx and basis.csv (one basis column per line) into `dir`.
inline void save_form_pair(const std::filesystem::path& dir, const FormPair& fp) {
    std::filesystem::create_directories(dir);
    write_matrix_market(dir / "S1.mtx", fp.s1);
    write_matrix_market(dir / "S2.mtx", fp.s2);
    std::ofstream os(dir / "basis.csv");
    if (!os) throw Error(ErrorCode::IoError, "cannot open " + (dir / "basis.csv").string());
    os << std::setprecision(17);
    for (std::size_t j = 0; j < fp.basis.dim(); ++j) {
        const Vector c = fp.basis.column(j);
        for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
        os << '\n';
    }
}

inline FormPair load_form_pair(const std::filesystem::path& dir) {
    SymMatrix s1 = read_matrix_market(dir / "S1.mtx");
    SymMatrix s2 = read_matrix_market(dir / "S2.mtx");
    const std::size_t n = s1.size();

    std::ifstream is(dir / "basis.csv");
    if (!is) throw Error(ErrorCode::IoError, "cannot open " + (dir / "basis.csv").string());
    std::vector<Vector> cols;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        Vector c;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                c.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw Error(ErrorCode::ParseError, "basis.csv: bad number '" + cell + "'");
            }
        }
        if (c.size() != n) throw Error(ErrorCode::DimensionMismatch, "basis.csv: column length differs from S1");
        cols.push_back(std::move(c));
    }

    // unit coordinate columns load as a coordinate basis
    std::vector<std::size_t> coord;
    bool is_coordinate = true;
    for (const auto& c : cols) {
        std::size_t ones = 0, pos = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (c[i] == 1.0) {
                ++ones;
                pos = i;
            } else if (c[i] != 0.0) {
                is_coordinate = false;
            }
        }
        if (ones != 1) is_coordinate = false;
        coord.push_back(pos);
    }
    Basis b;
    if (is_coordinate) {
        b = Basis::coordinate(n, coord);  // sorted order; same span as the file
    } else {
        DenseMatrix m(n, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) m.set_column(j, cols[j]);
        b = Basis::from_columns(std::move(m));
    }
    return FormPair(std::move(s1), std::move(s2), std::move(b));
}

}  // namespace hcx
