#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "hcx/error.hpp"

namespace hcx {

using Vector = std::vector<double>;
using ConstVec = std::span<const double>;
using MutVec = std::span<double>;

inline void check_same_size(ConstVec a, ConstVec b, const char* where) {
    if (a.size() != b.size())
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(where) + ": " + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()));
}

inline double dot(ConstVec a, ConstVec b) {
    check_same_size(a, b, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(ConstVec a) {
    // scaled accumulation avoids overflow for the 1/eps-sized solutions
    double scale = 0.0, ssq = 1.0;
    for (double v : a) {
        if (v == 0.0) continue;
        const double av = std::abs(v);
        if (scale < av) {
            ssq = 1.0 + ssq * (scale / av) * (scale / av);
            scale = av;
        } else {
            ssq += (av / scale) * (av / scale);
        }
    }
    return scale * std::sqrt(ssq);
}

inline double norm_inf(ConstVec a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

/// y += alpha * x
inline void axpy(double alpha, ConstVec x, MutVec y) {
    check_same_size(x, y, "axpy");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void scale(double alpha, MutVec x) {
    for (double& v : x) v *= alpha;
}

inline Vector add(ConstVec a, ConstVec b) {
    check_same_size(a, b, "add");
    Vector out(a.begin(), a.end());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
    return out;
}

inline Vector subtract(ConstVec a, ConstVec b) {
    check_same_size(a, b, "subtract");
    Vector out(a.begin(), a.end());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
    return out;
}

inline Vector scaled(double alpha, ConstVec a) {
    Vector out(a.begin(), a.end());
    scale(alpha, out);
    return out;
}

inline bool all_finite(ConstVec a) {
    for (double v : a)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace hcx
