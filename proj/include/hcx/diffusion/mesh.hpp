#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hcx/error.hpp"

namespace hcx {

enum class Subdomain : std::uint8_t { Omega1 = 1, Omega2 = 2 };

/// Placement of the high-index subdomain Omega2 inside the unit interval/square.
struct GeometryConfig {
    enum class Kind { InteriorBox, BoundaryStrip };

    Kind kind = Kind::InteriorBox;
    std::array<double, 2> lo{0.25, 0.25};  // box corners; 1D uses index 0
    std::array<double, 2> hi{0.75, 0.75};
    int axis = 0;           // strip: Omega2 = {x_axis < fraction}
    double fraction = 0.5;

    static GeometryConfig box(double lo0, double hi0) { return box({lo0, lo0}, {hi0, hi0}); }
    static GeometryConfig box(std::array<double, 2> lo, std::array<double, 2> hi) {
        GeometryConfig g;
        g.kind = Kind::InteriorBox;
        g.lo = lo;
        g.hi = hi;
        return g;
    }
    static GeometryConfig strip(int axis, double fraction) {
        GeometryConfig g;
        g.kind = Kind::BoundaryStrip;
        g.axis = axis;
        g.fraction = fraction;
        return g;
    }
};

using Point = std::array<double, 2>;

/// Uniform P1 mesh of [0,1]^dim. 2D squares are split along the main diagonal.
/// Nodes are numbered with x running fastest; boundary nodes carry Dirichlet data.
struct Mesh {
    int dim = 1;
    std::size_t cells = 0;  // per side
    std::vector<Point> nodes;
    std::vector<std::array<std::size_t, 3>> elements;  // 1D elements use the first two entries
    std::vector<Subdomain> labels;
    std::vector<std::size_t> interior_nodes;  // global ids, ascending
    std::vector<std::ptrdiff_t> dof;          // global id -> interior index, -1 on the boundary
    GeometryConfig geometry;

    std::size_t num_nodes() const noexcept { return nodes.size(); }
    std::size_t num_elements() const noexcept { return elements.size(); }
    std::size_t num_dofs() const noexcept { return interior_nodes.size(); }
    std::size_t vertices_per_element() const noexcept { return static_cast<std::size_t>(dim) + 1; }
    double h() const noexcept { return 1.0 / static_cast<double>(cells); }

    double measure(std::size_t e) const noexcept {
        (void)e;
        return dim == 1 ? h() : 0.5 * h() * h();
    }

    Point centroid(std::size_t e) const {
        Point c{0.0, 0.0};
        const std::size_t nv = vertices_per_element();
        for (std::size_t k = 0; k < nv; ++k) {
            c[0] += nodes[elements[e][k]][0];
            c[1] += nodes[elements[e][k]][1];
        }
        c[0] /= static_cast<double>(nv);
        c[1] /= static_cast<double>(nv);
        return c;
    }

    /// Interior nodes whose every incident element lies in Omega2.
    std::vector<std::size_t> omega2_star_dofs() const {
        std::vector<bool> touches_omega1(num_nodes(), false);
        for (std::size_t e = 0; e < num_elements(); ++e)
            if (labels[e] == Subdomain::Omega1)
                for (std::size_t k = 0; k < vertices_per_element(); ++k) touches_omega1[elements[e][k]] = true;
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < num_dofs(); ++i)
            if (!touches_omega1[interior_nodes[i]]) out.push_back(i);
        return out;
    }
};

/// Per-element values of a field sampled at element centroids.
using ElementField = std::vector<double>;
using SpatialFunction = std::function<double(double, double)>;

inline ElementField sample_at_centroids(const Mesh& mesh, const SpatialFunction& f) {
    ElementField v(mesh.num_elements());
    for (std::size_t e = 0; e < v.size(); ++e) {
        const Point c = mesh.centroid(e);
        v[e] = f(c[0], c[1]);
    }
    return v;
}

namespace detail {

inline bool on_grid(double c, std::size_t cells) {
    const double s = c * static_cast<double>(cells);
    return std::abs(s - std::round(s)) <= 1e-9 * static_cast<double>(cells);
}

inline void validate_geometry(int dim, std::size_t cells, const GeometryConfig& g) {
    const auto aligned = [cells](double c) { return on_grid(c, cells); };
    if (g.kind == GeometryConfig::Kind::InteriorBox) {
        for (int a = 0; a < dim; ++a) {
            require(0.0 < g.lo[a] && g.lo[a] < g.hi[a] && g.hi[a] < 1.0, ErrorCode::InvalidArgument,
                    "interior box must satisfy 0 < lo < hi < 1");
            require(aligned(g.lo[a]) && aligned(g.hi[a]), ErrorCode::MisalignedGeometry,
                    "box corners must lie on mesh lines");
        }
    } else {
        require(g.axis >= 0 && g.axis < dim, ErrorCode::InvalidArgument, "strip axis out of range");
        require(0.0 < g.fraction && g.fraction < 1.0, ErrorCode::InvalidArgument, "strip fraction must be in (0,1)");
        require(aligned(g.fraction), ErrorCode::MisalignedGeometry, "strip edge must lie on a mesh line");
    }
}

inline Subdomain classify(const Point& c, int dim, const GeometryConfig& g) {
    if (g.kind == GeometryConfig::Kind::BoundaryStrip)
        return c[static_cast<std::size_t>(g.axis)] < g.fraction ? Subdomain::Omega2 : Subdomain::Omega1;
    for (int a = 0; a < dim; ++a)
        if (c[a] < g.lo[a] || c[a] > g.hi[a]) return Subdomain::Omega1;
    return Subdomain::Omega2;
}

}  // namespace detail

inline Mesh build_mesh(int dim, std::size_t cells, const GeometryConfig& geometry) {
    require(dim == 1 || dim == 2, ErrorCode::InvalidDimensions, "mesh dimension must be 1 or 2");
    require(cells >= 2, ErrorCode::InvalidDimensions, "need at least 2 cells per side");
    detail::validate_geometry(dim, cells, geometry);

    Mesh m;
    m.dim = dim;
    m.cells = cells;
    m.geometry = geometry;
    const double h = 1.0 / static_cast<double>(cells);
    const std::size_t np = cells + 1;

    if (dim == 1) {
        for (std::size_t i = 0; i < np; ++i) m.nodes.push_back({static_cast<double>(i) * h, 0.0});
        for (std::size_t i = 0; i < cells; ++i) m.elements.push_back({i, i + 1, 0});
    } else {
        for (std::size_t j = 0; j < np; ++j)
            for (std::size_t i = 0; i < np; ++i)
                m.nodes.push_back({static_cast<double>(i) * h, static_cast<double>(j) * h});
        for (std::size_t j = 0; j < cells; ++j) {
            for (std::size_t i = 0; i < cells; ++i) {
                const std::size_t n00 = j * np + i, n10 = n00 + 1, n01 = n00 + np, n11 = n01 + 1;
                m.elements.push_back({n00, n10, n11});
                m.elements.push_back({n00, n11, n01});
            }
        }
    }

    m.dof.assign(m.num_nodes(), -1);
    for (std::size_t k = 0; k < m.num_nodes(); ++k) {
        bool boundary = false;
        for (int a = 0; a < dim; ++a) {
            const double c = m.nodes[k][a];
            if (c == 0.0 || std::abs(c - 1.0) < 0.5 * h) boundary = true;
        }
        if (!boundary) {
            m.dof[k] = static_cast<std::ptrdiff_t>(m.interior_nodes.size());
            m.interior_nodes.push_back(k);
        }
    }

    m.labels.reserve(m.num_elements());
    for (std::size_t e = 0; e < m.num_elements(); ++e) m.labels.push_back(detail::classify(m.centroid(e), dim, geometry));
    return m;
}

}  // namespace hcx
