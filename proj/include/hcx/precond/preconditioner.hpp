#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>

#include "hcx/diffusion/assembly.hpp"
#include "hcx/expansion/laurent.hpp"
#include "hcx/linalg/cholesky.hpp"
#include "hcx/linalg/rng.hpp"

namespace hcx {

/// Symmetric linear map used as M in PCG. Expansion kind is matrix-free; the
/// recursion is rerun on every application.
class Preconditioner {
public:
    enum class Kind { Expansion, FrozenLimit, Identity };

    static Preconditioner identity(std::size_t n) {
        return Preconditioner(Kind::Identity, n, [](ConstVec x, MutVec y) { std::copy(x.begin(), x.end(), y.begin()); });
    }

    Preconditioner(Kind kind, std::size_t n, std::function<void(ConstVec, MutVec)> apply)
        : kind_(kind), n_(n), apply_(std::move(apply)) {}

    Kind kind() const noexcept { return kind_; }
    std::size_t size() const noexcept { return n_; }

    /// Outcome of the Rayleigh-quotient sampling done at construction.
    bool spd() const noexcept { return spd_; }
    double min_rayleigh() const noexcept { return min_rayleigh_; }

    void operator()(ConstVec x, MutVec y) const {
        require(x.size() == n_ && y.size() == n_, ErrorCode::DimensionMismatch, "preconditioner size");
        apply_(x, y);
    }

    Vector apply(ConstVec x) const {
        Vector y(n_);
        (*this)(x, y);
        return y;
    }

    /// Samples x^T M x / x^T x for `samples` seeded random x and records the smallest.
    void sample_rayleigh(int samples, std::uint64_t seed) {
        Rng rng(seed);
        min_rayleigh_ = std::numeric_limits<double>::infinity();
        for (int s = 0; s < samples; ++s) {
            const Vector x = rng.normal_vector(n_);
            const double q = dot(x, apply(x)) / dot(x, x);
            min_rayleigh_ = std::min(min_rayleigh_, std::isfinite(q) ? q : -1.0);
        }
        spd_ = min_rayleigh_ > 0.0;
    }

private:
    Kind kind_ = Kind::Identity;
    std::size_t n_ = 0;
    std::function<void(ConstVec, MutVec)> apply_;
    bool spd_ = true;
    double min_rayleigh_ = 1.0;
};

inline std::string to_string(Preconditioner::Kind k) {
    switch (k) {
        case Preconditioner::Kind::Expansion: return "expansion";
        case Preconditioner::Kind::FrozenLimit: return "frozen_limit";
        case Preconditioner::Kind::Identity: return "identity";
    }
    return "unknown";
}

/// M eta = sum_{j=-1}^{k} eps^j xi_j(eta). Construction never fails on a
/// negative Rayleigh sample; check spd() before handing M to CG.
inline Preconditioner build_expansion_preconditioner(std::shared_ptr<const ExpansionSolver> solver, int k, double eps) {
    require(eps > 0.0 && std::isfinite(eps), ErrorCode::InvalidArgument, "eps must be positive");
    require(k >= 0 && k <= kMaxExpansionOrder, ErrorCode::InvalidArgument, "expansion order out of range");
    const std::size_t n = solver->form_pair().size();
    Preconditioner m(Preconditioner::Kind::Expansion, n, [solver, k, eps](ConstVec x, MutVec y) {
        const Vector v = laurent_coefficients(*solver, x, k).evaluate(eps);
        std::copy(v.begin(), v.end(), y.begin());
    });
    m.sample_rayleigh(20, 20240101);
    return m;
}

inline Preconditioner build_expansion_preconditioner(const FormPair& fp, int k, double eps) {
    return build_expansion_preconditioner(std::make_shared<const ExpansionSolver>(fp), k, eps);
}

/// A_{pbar_inf}^{-1} with A assembled from the diffusivity 1 / pbar_inf; one
/// Cholesky factorization, two triangular solves per application.
inline Preconditioner build_frozen_limit_preconditioner(const Mesh& mesh, const ElementField& pbar_inf) {
    require(pbar_inf.size() == mesh.num_elements(), ErrorCode::DimensionMismatch, "one coefficient per element expected");
    ElementField d(pbar_inf.size());
    for (std::size_t e = 0; e < d.size(); ++e) {
        require(pbar_inf[e] > 0.0 && std::isfinite(pbar_inf[e]), ErrorCode::CoefficientBelowFloor,
                "reference coefficient must be positive");
        d[e] = 1.0 / pbar_inf[e];
    }
    auto factor = std::make_shared<const CholeskyFactor>(CholeskyFactor::factor(assemble_operator(mesh, d).to_dense()));
    return Preconditioner(Preconditioner::Kind::FrozenLimit, mesh.num_dofs(), [factor](ConstVec x, MutVec y) {
        std::copy(x.begin(), x.end(), y.begin());
        factor->solve_in_place(y);
    });
}

/// Measure-weighted sum |p_e - q_e| |e|.
inline double l1_distance(const Mesh& mesh, const ElementField& p, const ElementField& q) {
    require(p.size() == mesh.num_elements() && q.size() == mesh.num_elements(), ErrorCode::DimensionMismatch,
            "one coefficient per element expected");
    double s = 0.0;
    for (std::size_t e = 0; e < p.size(); ++e) s += std::abs(p[e] - q[e]) * mesh.measure(e);
    return s;
}

}  // namespace hcx
