#pragma once

#include "hcx/linalg/sym_matrix.hpp"

namespace hcx {

/// q(xi) = xi^T S xi - 2 eta^T xi. For SPD S the unique minimizer is
/// S^{-1} eta with value -eta^T S^{-1} eta.
inline double quadratic_functional(const SymMatrix& s, ConstVec eta, ConstVec xi) {
    require(eta.size() == s.size() && xi.size() == s.size(), ErrorCode::DimensionMismatch,
            "quadratic_functional");
    return dot(xi, s.apply(xi)) - 2.0 * dot(eta, xi);
}

}  // namespace hcx
