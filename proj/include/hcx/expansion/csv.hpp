#pragma once

#include <cstdlib>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hcx/expansion/sweep.hpp"

namespace hcx {

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
}

inline double parse_double(const std::string& s) {
    // strtod keeps subnormal values that stod would reject
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') throw Error(ErrorCode::ParseError, "not a number: '" + s + "'");
    return v;
}

}  // namespace detail

/// Header `epsilon,error,bound,ratio`.
inline void write_error_table_csv(std::ostream& os, const ErrorTable& t) {
    os << "epsilon,error,bound,ratio\n" << std::setprecision(17);
    for (std::size_t i = 0; i < t.epsilons.size(); ++i)
        os << t.epsilons[i] << ',' << t.errors[i] << ',' << t.bounds[i] << ','
           << (t.bounds[i] > 0.0 ? t.errors[i] / t.bounds[i] : 0.0) << '\n';
}

/// Restores epsilons, errors and bounds; k, floors and fit are not part of the format.
inline ErrorTable read_error_table_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "epsilon,error,bound,ratio")
        throw Error(ErrorCode::ParseError, "unexpected error table header");
    ErrorTable t;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cells = detail::split_csv(line);
        if (cells.size() != 4) throw Error(ErrorCode::ParseError, "error table row needs 4 cells");
        t.epsilons.push_back(detail::parse_double(cells[0]));
        t.errors.push_back(detail::parse_double(cells[1]));
        t.bounds.push_back(detail::parse_double(cells[2]));
    }
    return t;
}

/// One coefficient vector per column, header `xi_-1,xi_0,...,xi_k`.
inline void write_expansion_csv(std::ostream& os, const ExpansionResult& r) {
    for (int j = -1; j <= r.k; ++j) os << (j > -1 ? "," : "") << "xi_" << j;
    os << '\n' << std::setprecision(17);
    const std::size_t n = r.coeffs.front().size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < r.coeffs.size(); ++c) os << (c ? "," : "") << r.coeffs[c][i];
        os << '\n';
    }
}

inline ExpansionResult read_expansion_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw Error(ErrorCode::ParseError, "empty expansion csv");
    const auto header = detail::split_csv(line);
    ExpansionResult r;
    for (std::size_t c = 0; c < header.size(); ++c)
        if (header[c] != "xi_" + std::to_string(static_cast<int>(c) - 1))
            throw Error(ErrorCode::ParseError, "unexpected expansion header cell '" + header[c] + "'");
    r.k = static_cast<int>(header.size()) - 2;
    r.coeffs.assign(header.size(), Vector{});
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cells = detail::split_csv(line);
        if (cells.size() != header.size()) throw Error(ErrorCode::ParseError, "ragged expansion csv");
        for (std::size_t c = 0; c < cells.size(); ++c) r.coeffs[c].push_back(detail::parse_double(cells[c]));
    }
    return r;
}

}  // namespace hcx
