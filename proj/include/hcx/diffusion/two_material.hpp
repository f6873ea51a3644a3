#pragma once

#include <cmath>

#include "hcx/error.hpp"

namespace hcx {

/// Closed-form solution of -(d u')' = f on (0,1), u(0) = u(1) = 0, with
/// d = d1 on (0,a), d = d2 on (a,1) and constant f. The flux d u' = q - f x
/// is continuous; q follows from continuity of u at a.
class TwoMaterialSolution {
public:
    TwoMaterialSolution(double a, double d1, double d2, double f) : a_(a), d1_(d1), d2_(d2), f_(f) {
        require(a > 0.0 && a < 1.0, ErrorCode::InvalidArgument, "interface must lie in (0,1)");
        require(d1 > 0.0 && d2 > 0.0, ErrorCode::NonPositiveCoefficient, "diffusivities must be positive");
        q_ = f * (a * a / d1 - (a * a - 1.0) / d2) / (2.0 * (a / d1 + (1.0 - a) / d2));
    }

    double operator()(double x) const {
        if (x <= a_) return (q_ * x - 0.5 * f_ * x * x) / d1_;
        return (q_ * (x - 1.0) - 0.5 * f_ * (x * x - 1.0)) / d2_;
    }

    /// d u'(x)
    double conormal_derivative(double x) const { return q_ - f_ * x; }

    double interface() const noexcept { return a_; }

private:
    double a_, d1_, d2_, f_;
    double q_ = 0.0;
};

inline TwoMaterialSolution exact_1d_two_material(double a, double d1, double d2, double f) {
    return TwoMaterialSolution(a, d1, d2, f);
}

}  // namespace hcx
