#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "hcx/expansion/laurent.hpp"

namespace hcx {

/// Truncation errors of a Laurent expansion against direct solves.
struct ErrorTable {
    int k = 0;
    std::vector<double> epsilons;
    std::vector<double> errors;           ///< ||xi_{eps,k} - xi_eps||_2
    std::vector<double> bounds;           ///< bound_constant * eps^{k+1}
    std::vector<double> rigorous_bounds;  ///< (C2 / lambda_min(S1 + eps S2)) ||xi_k|| eps^{k+1}
    std::vector<double> floors;           ///< round-off level of the comparison
    double fitted_order = std::numeric_limits<double>::quiet_NaN();

    bool above_floor(std::size_t i) const { return errors[i] > floors[i]; }

    /// errors[i] <= bounds[i] * (1 + 1e-8) at every point above the floor.
    bool bound_holds() const {
        for (std::size_t i = 0; i < errors.size(); ++i)
            if (above_floor(i) && errors[i] > bounds[i] * (1.0 + 1e-8)) return false;
        return true;
    }

    double worst_ratio() const {
        double w = 0.0;
        for (std::size_t i = 0; i < errors.size(); ++i)
            if (above_floor(i) && bounds[i] > 0.0) w = std::max(w, errors[i] / bounds[i]);
        return w;
    }
};

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    require(x.size() == y.size(), ErrorCode::DimensionMismatch, "loglog_slope");
    const std::size_t n = x.size();
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (n * sxy - sx * sy) / denom;
}

namespace detail {

/// |S| |x| entrywise.
inline Vector abs_apply(const SymMatrix& s, ConstVec x) {
    Vector y(x.size(), 0.0);
    for (const auto& e : s.upper_triplets()) {
        y[e.row] += std::abs(e.value) * std::abs(x[e.col]);
        if (e.row != e.col) y[e.col] += std::abs(e.value) * std::abs(x[e.row]);
    }
    return y;
}

}  // namespace detail

inline ErrorTable expansion_error_sweep(const ExpansionSolver& solver, ConstVec eta, int k,
                                        const std::vector<double>& epsilons) {
    require(!epsilons.empty(), ErrorCode::InvalidArgument, "empty epsilon list");
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        require(epsilons[i] > 0.0, ErrorCode::InvalidArgument, "epsilons must be positive");
        require(i == 0 || epsilons[i] < epsilons[i - 1], ErrorCode::InvalidArgument,
                "epsilons must be sorted descending");
    }
    const FormPair& fp = solver.form_pair();
    const ExpansionResult coeffs = laurent_coefficients(solver, eta, k);
    const double xik_norm = norm2(coeffs.coeffs.back());
    constexpr double u = std::numeric_limits<double>::epsilon();

    ErrorTable t;
    t.k = k;
    std::vector<double> fit_x, fit_y;
    for (double eps : epsilons) {
        const Vector direct = solve_direct(fp, solver.report(), eta, eps);
        const Vector approx = coeffs.evaluate(eps);
        const double err = norm2(subtract(approx, direct));
        const double scale_k = std::pow(eps, k + 1);
        const ExtremalEigs ev = detail::extremal_or_dense(fp.perturbed(eps));
        Vector r = detail::abs_apply(fp.s1, direct);
        axpy(eps, detail::abs_apply(fp.s2, direct), r);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] += std::abs(eta[i]);
        const double floor = std::max(1e3 * u * norm2(direct), 10.0 * u * norm2(r) / ev.lambda_min);

        t.epsilons.push_back(eps);
        t.errors.push_back(err);
        t.bounds.push_back(coeffs.bound_constant * scale_k);
        t.rigorous_bounds.push_back(coeffs.c2 / ev.lambda_min * xik_norm * scale_k);
        t.floors.push_back(floor);
        if (err > floor) {
            fit_x.push_back(eps);
            fit_y.push_back(err);
        }
    }
    t.fitted_order = loglog_slope(fit_x, fit_y);
    return t;
}

inline ErrorTable expansion_error_sweep(const FormPair& fp, ConstVec eta, int k, const std::vector<double>& epsilons) {
    return expansion_error_sweep(ExpansionSolver(fp), eta, k, epsilons);
}

}  // namespace hcx
