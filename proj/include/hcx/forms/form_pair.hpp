#pragma once

#include <cstddef>
#include <utility>

#include "hcx/linalg/basis.hpp"
#include "hcx/linalg/sym_matrix.hpp"

namespace hcx {

/// Two symmetric positive semidefinite forms on R^n and the subspace X1 on
/// which the first one vanishes. The perturbed operator is S1 + eps * S2.
struct FormPair {
    SymMatrix s1;
    SymMatrix s2;
    Basis basis;  ///< orthonormal basis of X1 (may be empty)

    FormPair() = default;
    FormPair(SymMatrix first, SymMatrix second, Basis x1)
        : s1(std::move(first)), s2(std::move(second)), basis(std::move(x1)) {
        require(s1.size() == s2.size(), ErrorCode::DimensionMismatch, "FormPair: S1 and S2 sizes differ");
        require(basis.ambient_dim() == s1.size(), ErrorCode::DimensionMismatch,
                "FormPair: basis ambient dimension differs from S1");
        require(s1.size() > 0, ErrorCode::InvalidDimensions, "FormPair: empty space");
    }

    std::size_t size() const noexcept { return s1.size(); }
    std::size_t subspace_dim() const noexcept { return basis.dim(); }

    /// S1 + eps * S2
    SymMatrix perturbed(double eps) const { return SymMatrix::combine(1.0, s1, eps, s2); }
};

}  // namespace hcx
