#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "hcx/linalg/cg.hpp"
#include "hcx/precond/preconditioner.hpp"

namespace hcx {

/// Estimate of ||M A - I||_2 from power iteration on (A M - I)(M A - I).
inline double deviation_estimate(const Preconditioner& m, const SymMatrix& a, int steps = 30, std::uint64_t seed = 7) {
    require(m.size() == a.size(), ErrorCode::DimensionMismatch, "preconditioner and system sizes differ");
    const std::size_t n = a.size();
    const auto e = [&](ConstVec x) {
        Vector y = m.apply(a.apply(x));
        axpy(-1.0, x, y);
        return y;
    };
    const auto et = [&](ConstVec x) {
        Vector y = a.apply(m.apply(x));
        axpy(-1.0, x, y);
        return y;
    };
    Vector v = Rng(seed).normal_vector(n);
    scale(1.0 / norm2(v), v);
    double sigma2 = 0.0;
    for (int s = 0; s < steps; ++s) {
        Vector w = et(e(v));
        const double nw = norm2(w);
        sigma2 = nw;
        if (nw == 0.0) break;
        scale(1.0 / nw, w);
        v = std::move(w);
    }
    return std::sqrt(sigma2);
}

struct BenchReport {
    std::vector<double> epsilons;
    std::vector<std::size_t> iters_plain;
    std::vector<std::size_t> iters_precond;
    std::vector<double> deviation;
    std::vector<double> l1_distance;  ///< NaN when not applicable
    std::vector<double> solution_gap; ///< ||x_pcg - x_cg|| / ||x_cg||
    std::vector<bool> converged_plain;
    std::vector<bool> converged_precond;
    std::vector<std::string> failures;  ///< empty string when the entry succeeded

    std::size_t size() const noexcept { return epsilons.size(); }
};

struct BenchOptions {
    double tol = 1e-10;
    std::size_t maxit = 20000;
    int power_steps = 30;
    std::uint64_t seed = 7;
};

using SystemBuilder = std::function<SymMatrix(double)>;
using PreconditionerBuilder = std::function<Preconditioner(double)>;
using DistanceFunction = std::function<double(double)>;

/// CG and PCG per parameter value. A failing entry is recorded and the sweep continues.
inline BenchReport pcg_benchmark(const std::vector<double>& epsilons, const SystemBuilder& system,
                                 const PreconditionerBuilder& precond, ConstVec rhs, const BenchOptions& opts = {},
                                 const DistanceFunction& l1 = {}) {
    require(norm2(rhs) > 0.0, ErrorCode::InvalidArgument, "benchmark needs a nonzero right-hand side");
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    BenchReport r;
    for (double eps : epsilons) {
        r.epsilons.push_back(eps);
        r.l1_distance.push_back(l1 ? l1(eps) : nan);
        std::size_t plain = 0, pre = 0;
        bool ok_plain = false, ok_pre = false;
        double dev = nan, gap = nan;
        std::string failure;
        try {
            const SymMatrix a = system(eps);
            require(a.size() == rhs.size(), ErrorCode::DimensionMismatch, "system and rhs sizes differ");
            const CgOptions cg{opts.tol, opts.maxit};
            const CgResult x0 = cg_solve(as_operator(a), rhs, cg);
            plain = std::max<std::size_t>(1, x0.iterations);
            ok_plain = x0.converged;

            const Preconditioner m = precond(eps);
            const CgResult x1 = cg_solve(as_operator(a), rhs, cg, m);
            pre = std::max<std::size_t>(1, x1.iterations);
            ok_pre = x1.converged;
            dev = deviation_estimate(m, a, opts.power_steps, opts.seed);
            gap = norm2(subtract(x1.solution, x0.solution)) / norm2(x0.solution);
            if (!ok_plain) failure = "CG did not converge";
            if (!ok_pre) failure += std::string(failure.empty() ? "" : "; ") + "PCG did not converge";
        } catch (const Error& e) {
            failure = e.what();
        }
        r.iters_plain.push_back(plain);
        r.iters_precond.push_back(pre);
        r.converged_plain.push_back(ok_plain);
        r.converged_precond.push_back(ok_pre);
        r.deviation.push_back(dev);
        r.solution_gap.push_back(gap);
        r.failures.push_back(failure);
    }
    return r;
}

}  // namespace hcx
