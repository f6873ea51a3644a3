#pragma once

#include <iomanip>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "hcx/diffusion/assembly.hpp"
#include "hcx/expansion/csv.hpp"

namespace hcx {

struct NodalTable {
    int dim = 1;
    std::vector<double> x, y, u;
};

/// One row per mesh node, boundary included. Header `x,u` or `x,y,u`.
inline void write_nodal_csv(std::ostream& os, const Mesh& mesh, ConstVec u) {
    const Vector full = full_nodal(mesh, u);
    os << (mesh.dim == 1 ? "x,u\n" : "x,y,u\n") << std::setprecision(17);
    for (std::size_t k = 0; k < mesh.num_nodes(); ++k) {
        os << mesh.nodes[k][0] << ',';
        if (mesh.dim == 2) os << mesh.nodes[k][1] << ',';
        os << full[k] << '\n';
    }
}

inline NodalTable read_nodal_csv(std::istream& is) {
    std::string line;
    require(static_cast<bool>(std::getline(is, line)), ErrorCode::ParseError, "missing header");
    NodalTable t;
    if (line == "x,u") {
        t.dim = 1;
    } else if (line == "x,y,u") {
        t.dim = 2;
    } else {
        throw Error(ErrorCode::ParseError, "unexpected header '" + line + "'");
    }
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cells = detail::split_csv(line);
        require(cells.size() == static_cast<std::size_t>(t.dim) + 1, ErrorCode::ParseError, "wrong column count");
        t.x.push_back(detail::parse_double(cells[0]));
        if (t.dim == 2) t.y.push_back(detail::parse_double(cells[1]));
        t.u.push_back(detail::parse_double(cells.back()));
    }
    return t;
}

}  // namespace hcx
