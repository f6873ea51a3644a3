#pragma once

#include <cmath>
#include <vector>

#include "hcx/diffusion/assembly.hpp"
#include "hcx/linalg/cg.hpp"

namespace hcx {

/// f^T A^{-1} f
inline double energy(const SymMatrix& a, ConstVec f) {
    const SpdSolver solver(a);
    return dot(f, solver.solve(f));
}

/// For each delta: pbar = pbar_limit + delta * r, A = assemble(1 / pbar),
/// value f^T A^{-1} f. Decreasing deltas give a pointwise decreasing pbar.
inline std::vector<double> monotone_experiment(const Mesh& mesh, const ElementField& pbar_limit, const ElementField& r,
                                               const std::vector<double>& deltas, ConstVec f) {
    require(pbar_limit.size() == mesh.num_elements() && r.size() == mesh.num_elements(), ErrorCode::DimensionMismatch,
            "one coefficient per element expected");
    require(f.size() == mesh.num_dofs(), ErrorCode::DimensionMismatch, "load vector length");
    require(!deltas.empty(), ErrorCode::InvalidArgument, "empty delta schedule");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        require(deltas[i] > 0.0, ErrorCode::InvalidArgument, "deltas must be positive");
        require(i == 0 || deltas[i] < deltas[i - 1], ErrorCode::InvalidArgument, "deltas must strictly decrease");
    }
    for (double v : r) require(v >= 0.0, ErrorCode::InvalidArgument, "perturbation field must be nonnegative");
    for (double v : pbar_limit)
        require(v > 0.0 && std::isfinite(v), ErrorCode::CoefficientBelowFloor, "limit coefficient must be positive");

    std::vector<double> values;
    values.reserve(deltas.size());
    ElementField d(mesh.num_elements());
    for (double delta : deltas) {
        for (std::size_t e = 0; e < d.size(); ++e) d[e] = 1.0 / (pbar_limit[e] + delta * r[e]);
        values.push_back(energy(assemble_operator(mesh, d), f));
    }
    return values;
}

}  // namespace hcx
