#pragma once

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <string>

#include "hcx/expansion/csv.hpp"
#include "hcx/precond/benchmark.hpp"

namespace hcx {

/// Header `epsilon,iters_plain,iters_precond,deviation,l1_distance`.
inline void write_bench_csv(std::ostream& os, const BenchReport& r) {
    os << "epsilon,iters_plain,iters_precond,deviation,l1_distance\n" << std::setprecision(17);
    for (std::size_t i = 0; i < r.size(); ++i)
        os << r.epsilons[i] << ',' << r.iters_plain[i] << ',' << r.iters_precond[i] << ',' << r.deviation[i] << ','
           << r.l1_distance[i] << '\n';
}

/// Restores the CSV columns; the remaining BenchReport fields stay empty.
inline BenchReport read_bench_csv(std::istream& is) {
    std::string line;
    require(static_cast<bool>(std::getline(is, line)) && line == "epsilon,iters_plain,iters_precond,deviation,l1_distance",
            ErrorCode::ParseError, "unexpected benchmark header");
    BenchReport r;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto c = detail::split_csv(line);
        require(c.size() == 5, ErrorCode::ParseError, "benchmark row needs 5 columns");
        r.epsilons.push_back(detail::parse_double(c[0]));
        r.iters_plain.push_back(static_cast<std::size_t>(detail::parse_double(c[1])));
        r.iters_precond.push_back(static_cast<std::size_t>(detail::parse_double(c[2])));
        r.deviation.push_back(detail::parse_double(c[3]));
        r.l1_distance.push_back(detail::parse_double(c[4]));
    }
    return r;
}

}  // namespace hcx
