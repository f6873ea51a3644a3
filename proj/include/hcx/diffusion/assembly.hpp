#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "hcx/diffusion/mesh.hpp"
#include "hcx/forms/assumptions.hpp"
#include "hcx/forms/form_pair.hpp"
#include "hcx/linalg/sym_matrix.hpp"

namespace hcx {

enum class Orientation {
    LionsInterior,  // S1 + eps S2: eps on Omega2
    Swapped,        // eps S1 + S2: eps on Omega1
};

inline std::string to_string(Orientation o) { return o == Orientation::Swapped ? "swapped" : "lions_interior"; }

struct DiffusivitySpec {
    SpatialFunction p1 = [](double, double) { return 1.0; };
    SpatialFunction p2 = [](double, double) { return 1.0; };
    double eps = 1.0;
    Orientation orientation = Orientation::LionsInterior;
};

namespace detail {

/// Exact P1 element stiffness for unit coefficient.
inline std::array<std::array<double, 3>, 3> element_stiffness(const Mesh& mesh, std::size_t e) {
    std::array<std::array<double, 3>, 3> k{};
    if (mesh.dim == 1) {
        const double g = 1.0 / mesh.h();
        k[0][0] = k[1][1] = g;
        k[0][1] = k[1][0] = -g;
        return k;
    }
    const auto& v = mesh.elements[e];
    const Point& p0 = mesh.nodes[v[0]];
    const Point& p1 = mesh.nodes[v[1]];
    const Point& p2 = mesh.nodes[v[2]];
    const double area2 = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
    const std::array<double, 3> b{p1[1] - p2[1], p2[1] - p0[1], p0[1] - p1[1]};
    const std::array<double, 3> c{p2[0] - p1[0], p0[0] - p2[0], p1[0] - p0[0]};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) k[i][j] = (b[i] * b[j] + c[i] * c[j]) / (2.0 * std::abs(area2));
    return k;
}

/// Gradient of the P1 interpolant of nodal values on element e.
inline Point element_gradient(const Mesh& mesh, std::size_t e, const std::array<double, 3>& u) {
    if (mesh.dim == 1) return {(u[1] - u[0]) / mesh.h(), 0.0};
    const auto& v = mesh.elements[e];
    const Point& p0 = mesh.nodes[v[0]];
    const Point& p1 = mesh.nodes[v[1]];
    const Point& p2 = mesh.nodes[v[2]];
    const double area2 = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
    const std::array<double, 3> b{p1[1] - p2[1], p2[1] - p0[1], p0[1] - p1[1]};
    const std::array<double, 3> c{p2[0] - p1[0], p0[0] - p2[0], p1[0] - p0[0]};
    Point g{0.0, 0.0};
    for (int i = 0; i < 3; ++i) {
        g[0] += b[i] * u[i];
        g[1] += c[i] * u[i];
    }
    g[0] /= area2;
    g[1] /= area2;
    return g;
}

/// Galerkin matrix with per-element weights; zero weights drop the element.
inline SymMatrix assemble_weighted(const Mesh& mesh, const ElementField& w) {
    require(w.size() == mesh.num_elements(), ErrorCode::DimensionMismatch, "one coefficient per element expected");
    std::vector<Triplet> t;
    const std::size_t nv = mesh.vertices_per_element();
    t.reserve(mesh.num_elements() * nv * nv);
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        if (w[e] == 0.0) continue;
        const auto k = element_stiffness(mesh, e);
        for (std::size_t a = 0; a < nv; ++a) {
            const std::ptrdiff_t i = mesh.dof[mesh.elements[e][a]];
            if (i < 0) continue;
            for (std::size_t b = 0; b < nv; ++b) {
                const std::ptrdiff_t j = mesh.dof[mesh.elements[e][b]];
                if (j < i) continue;
                t.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), w[e] * k[a][b]});
            }
        }
    }
    return SymMatrix::from_triplets(mesh.num_dofs(), t);
}

}  // namespace detail

/// Stiffness matrix of -div(d grad u) on the interior nodes.
inline SymMatrix assemble_operator(const Mesh& mesh, const ElementField& coeff) {
    for (double d : coeff)
        require(d > 0.0 && std::isfinite(d), ErrorCode::NonPositiveCoefficient, "diffusion coefficient must be positive");
    return detail::assemble_weighted(mesh, coeff);
}

struct AssembledForms {
    FormPair pair;
    AssumptionReport report;
};

/// S1 carries p1 on Omega1 elements, S2 carries p2 on Omega2 elements and
/// X1 is spanned by the interior nodes whose whole star lies in Omega2.
inline AssembledForms assemble_forms(const Mesh& mesh, const DiffusivitySpec& spec) {
    ElementField w1(mesh.num_elements(), 0.0), w2(mesh.num_elements(), 0.0);
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const Point c = mesh.centroid(e);
        const bool in1 = mesh.labels[e] == Subdomain::Omega1;
        const double p = in1 ? spec.p1(c[0], c[1]) : spec.p2(c[0], c[1]);
        require(p > 0.0 && std::isfinite(p), ErrorCode::NonPositiveCoefficient,
                in1 ? "p1 must be positive on Omega1" : "p2 must be positive on Omega2");
        (in1 ? w1 : w2)[e] = p;
    }
    const std::vector<std::size_t> x1 = mesh.omega2_star_dofs();
    require(!x1.empty(), ErrorCode::AssumptionCheckFailed, "X1 is empty: no interior node has its whole star in Omega2");

    AssembledForms out{FormPair(detail::assemble_weighted(mesh, w1), detail::assemble_weighted(mesh, w2),
                                Basis::coordinate(mesh.num_dofs(), x1)),
                       {}};
    out.report = check_assumptions(out.pair);
    require(out.report.passed, ErrorCode::AssumptionCheckFailed, out.report.summary());
    return out;
}

/// lions_interior: S1 + eps S2; swapped: eps S1 + S2 = eps (S1 + (1/eps) S2).
inline SymMatrix epsilon_system(const FormPair& fp, double eps, Orientation orientation) {
    require(eps > 0.0 && std::isfinite(eps), ErrorCode::InvalidArgument, "eps must be positive");
    return orientation == Orientation::LionsInterior ? SymMatrix::combine(1.0, fp.s1, eps, fp.s2)
                                                     : SymMatrix::combine(eps, fp.s1, 1.0, fp.s2);
}

/// Lumped load: f(x_i) times the measure of the star of node i over (dim + 1).
inline Vector load_vector(const Mesh& mesh, const SpatialFunction& f) {
    Vector star(mesh.num_nodes(), 0.0);
    for (std::size_t e = 0; e < mesh.num_elements(); ++e)
        for (std::size_t k = 0; k < mesh.vertices_per_element(); ++k) star[mesh.elements[e][k]] += mesh.measure(e);
    Vector b(mesh.num_dofs());
    const double share = 1.0 / static_cast<double>(mesh.vertices_per_element());
    for (std::size_t i = 0; i < b.size(); ++i) {
        const std::size_t g = mesh.interior_nodes[i];
        const double fi = f(mesh.nodes[g][0], mesh.nodes[g][1]);
        require(std::isfinite(fi), ErrorCode::NonFinite, "load is not finite at a node");
        b[i] = fi * star[g] * share;
    }
    return b;
}

/// Nodal values on all mesh nodes from either interior values (boundary set
/// to zero) or a full nodal vector.
inline Vector full_nodal(const Mesh& mesh, ConstVec u) {
    if (u.size() == mesh.num_nodes()) return Vector(u.begin(), u.end());
    require(u.size() == mesh.num_dofs(), ErrorCode::DimensionMismatch, "nodal vector has the wrong length");
    Vector full(mesh.num_nodes(), 0.0);
    for (std::size_t i = 0; i < u.size(); ++i) full[mesh.interior_nodes[i]] = u[i];
    return full;
}

/// -d grad u on each element (constant for P1). In 1D only the first component is used.
inline std::vector<Point> flux(const Mesh& mesh, const ElementField& coeff, ConstVec u) {
    require(coeff.size() == mesh.num_elements(), ErrorCode::DimensionMismatch, "one coefficient per element expected");
    const Vector full = full_nodal(mesh, u);
    std::vector<Point> q(mesh.num_elements());
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        std::array<double, 3> ue{};
        for (std::size_t k = 0; k < mesh.vertices_per_element(); ++k) ue[k] = full[mesh.elements[e][k]];
        const Point g = detail::element_gradient(mesh, e, ue);
        q[e] = {-coeff[e] * g[0], -coeff[e] * g[1]};
    }
    return q;
}

}  // namespace hcx
