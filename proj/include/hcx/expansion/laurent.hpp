#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "hcx/expansion/solver.hpp"

namespace hcx {

/// Coefficients xi_{-1}, ..., xi_k of the Laurent expansion of
/// (S1 + eps S2)^{-1} eta, and the constant of the truncation bound.
struct ExpansionResult {
    int k = -1;
    std::vector<Vector> coeffs;  ///< coeffs[j + 1] holds xi_j
    double alpha = 0.0;
    double c2 = 0.0;
    double bound_constant = 0.0;  ///< (C2 / alpha) * ||xi_k||

    const Vector& coeff(int j) const { return coeffs.at(static_cast<std::size_t>(j + 1)); }

    /// sum_{j=-1}^{k} eps^j xi_j
    Vector evaluate(double eps) const {
        Vector out(coeffs.front().size(), 0.0);
        double w = 1.0 / eps;
        for (const auto& c : coeffs) {
            axpy(w, c, out);
            w *= eps;
        }
        return out;
    }
};

inline ExpansionResult laurent_coefficients(const ExpansionSolver& solver, ConstVec eta, int k) {
    require(k >= -1 && k <= kMaxExpansionOrder, ErrorCode::InvalidArgument,
            "expansion order must lie in [-1, " + std::to_string(kMaxExpansionOrder) + "]");
    const FormPair& fp = solver.form_pair();
    ExpansionResult r;
    r.k = k;
    r.alpha = solver.report().alpha;
    r.c2 = solver.report().c2;
    r.coeffs.push_back(solver.subspace_solve(eta));

    Vector w;
    try {
        for (int j = 0; j <= k; ++j) {
            w = fp.s2.apply(r.coeffs.back());
            if (j == 0) {
                for (std::size_t i = 0; i < w.size(); ++i) w[i] = eta[i] - w[i];
            } else {
                scale(-1.0, w);
            }
            r.coeffs.push_back(solver.constrained_solve(w));
        }
    } catch (const Error& e) {
        // the recursion guarantees B^T w = 0; anything else is a broken form pair
        if (e.code() == ErrorCode::FunctionalNotInKernel)
            throw Error(ErrorCode::AssumptionsViolated, std::string("recursion left X1 kernel: ") + e.what());
        throw;
    }
    r.bound_constant = r.c2 / r.alpha * norm2(r.coeffs.back());
    return r;
}

inline ExpansionResult laurent_coefficients(const FormPair& fp, ConstVec eta, int k) {
    return laurent_coefficients(ExpansionSolver(fp), eta, k);
}

}  // namespace hcx
