#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "hcx/cli/expression.hpp"
#include "hcx/diffusion/assembly.hpp"
#include "hcx/diffusion/mesh.hpp"
#include "hcx/expansion/solver.hpp"

namespace hcx {

enum class ExperimentKind { Check, Expand, Sweep, Monotone, Precond, Oracle };

inline std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Check: return "check";
        case ExperimentKind::Expand: return "expand";
        case ExperimentKind::Sweep: return "sweep";
        case ExperimentKind::Monotone: return "monotone";
        case ExperimentKind::Precond: return "precond";
        case ExperimentKind::Oracle: return "oracle";
    }
    return "unknown";
}

inline ExperimentKind parse_experiment_kind(const std::string& s) {
    for (auto k : {ExperimentKind::Check, ExperimentKind::Expand, ExperimentKind::Sweep, ExperimentKind::Monotone,
                   ExperimentKind::Precond, ExperimentKind::Oracle})
        if (to_string(k) == s) return k;
    throw Error(ErrorCode::ConfigInvalid, "unknown experiment '" + s + "'");
}

struct MeshConfig {
    int dim = 2;
    std::size_t cells = 16;
    GeometryConfig geometry = GeometryConfig::box(0.25, 0.75);
};

struct DiffusivityConfig {
    std::string p1 = "1";
    std::string p2 = "1";
    Orientation orientation = Orientation::LionsInterior;
};

struct MonotoneConfig {
    std::string pbar_limit = "1";
    std::string r = "1";
    std::vector<double> deltas{1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125};
};

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::Check;
    MeshConfig mesh;
    DiffusivityConfig diffusivity;
    std::vector<double> epsilons;
    int k = 1;
    std::string f = "1";
    std::uint64_t seed = 0;
    std::string output = "out";
    std::string toy;  // "", "diag2" or "coupled2"
    MonotoneConfig monotone;
    std::size_t cases = 100;  // oracle
};

inline std::vector<double> log_range(double start, double stop, std::size_t points) {
    require(start > 0.0 && stop > 0.0, ErrorCode::ConfigInvalid, "log-range bounds must be positive");
    require(points >= 1, ErrorCode::ConfigInvalid, "log-range needs at least one point");
    std::vector<double> v;
    if (points == 1) return {start};
    const double a = std::log10(start), b = std::log10(stop);
    for (std::size_t i = 0; i < points; ++i)
        v.push_back(std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1)));
    return v;
}

inline ExperimentConfig default_config(ExperimentKind kind) {
    ExperimentConfig c;
    c.experiment = kind;
    switch (kind) {
        case ExperimentKind::Sweep: c.epsilons = log_range(1e-1, 1e-6, 6); break;
        case ExperimentKind::Precond: c.epsilons = log_range(1e-2, 1e-8, 7); break;
        default: c.epsilons = {1e-2}; break;
    }
    return c;
}

namespace detail {

using json = nlohmann::json;

inline void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw Error(ErrorCode::ConfigInvalid, where + " must be an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!ok.count(key)) throw Error(ErrorCode::ConfigInvalid, "unknown key '" + key + "' in " + where);
    }
}

inline double get_number(const json& j, const std::string& what) {
    if (!j.is_number()) throw Error(ErrorCode::ConfigInvalid, what + " must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw Error(ErrorCode::ConfigInvalid, what + " must be finite");
    return v;
}

inline long long get_integer(const json& j, const std::string& what) {
    if (!j.is_number_integer()) throw Error(ErrorCode::ConfigInvalid, what + " must be an integer");
    return j.get<long long>();
}

inline std::string get_string(const json& j, const std::string& what) {
    if (!j.is_string()) throw Error(ErrorCode::ConfigInvalid, what + " must be a string");
    return j.get<std::string>();
}

inline std::string get_expression(const json& j, const std::string& what) {
    std::string s;
    if (j.is_number()) {
        s = j.dump();
    } else {
        s = get_string(j, what);
    }
    try {
        (void)Expression::parse(s);
    } catch (const Error& e) {
        throw Error(ErrorCode::ConfigInvalid, what + ": " + e.what());
    }
    return s;
}

inline std::vector<double> get_number_list(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) throw Error(ErrorCode::ConfigInvalid, what + " must be a non-empty array");
    std::vector<double> v;
    for (const auto& x : j) v.push_back(get_number(x, what + " entry"));
    return v;
}

inline void require_descending(const std::vector<double>& v, const std::string& what) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0)) throw Error(ErrorCode::ConfigInvalid, what + " must be positive");
        if (i > 0 && !(v[i] < v[i - 1])) throw Error(ErrorCode::ConfigInvalid, what + " must be strictly decreasing");
    }
}

inline std::array<double, 2> get_corner(const json& j, int dim, const std::string& what) {
    std::array<double, 2> c{0.0, 0.0};
    if (j.is_number()) {
        c[0] = c[1] = get_number(j, what);
        return c;
    }
    const auto v = get_number_list(j, what);
    if (v.size() != static_cast<std::size_t>(dim))
        throw Error(ErrorCode::ConfigInvalid, what + " needs " + std::to_string(dim) + " coordinates");
    for (std::size_t a = 0; a < v.size(); ++a) c[a] = v[a];
    if (dim == 1) c[1] = c[0];
    return c;
}

}  // namespace detail

/// Strict schema: unknown keys anywhere raise ConfigInvalid.
inline ExperimentConfig parse_config(const nlohmann::json& j) {
    using detail::json;
    detail::only_keys(j, "config",
                      {"experiment", "mesh", "diffusivity", "epsilons", "k", "f", "seed", "output", "toy", "monotone",
                       "cases"});
    if (!j.contains("experiment")) throw Error(ErrorCode::ConfigInvalid, "missing key 'experiment'");
    ExperimentConfig c = default_config(parse_experiment_kind(detail::get_string(j["experiment"], "experiment")));

    if (j.contains("mesh")) {
        const json& m = j["mesh"];
        detail::only_keys(m, "mesh", {"dim", "cells", "geometry"});
        if (m.contains("dim")) c.mesh.dim = static_cast<int>(detail::get_integer(m["dim"], "mesh.dim"));
        if (c.mesh.dim != 1 && c.mesh.dim != 2) throw Error(ErrorCode::ConfigInvalid, "mesh.dim must be 1 or 2");
        if (m.contains("cells")) {
            const long long n = detail::get_integer(m["cells"], "mesh.cells");
            if (n < 2 || n > 4096) throw Error(ErrorCode::ConfigInvalid, "mesh.cells must be in [2, 4096]");
            c.mesh.cells = static_cast<std::size_t>(n);
        }
        if (m.contains("geometry")) {
            const json& g = m["geometry"];
            detail::only_keys(g, "mesh.geometry", {"kind", "lo", "hi", "axis", "fraction"});
            const std::string kind = g.contains("kind") ? detail::get_string(g["kind"], "geometry.kind") : "interior_box";
            if (kind == "interior_box") {
                if (g.contains("axis") || g.contains("fraction"))
                    throw Error(ErrorCode::ConfigInvalid, "interior_box takes only lo and hi");
                GeometryConfig box = GeometryConfig::box(0.25, 0.75);
                if (g.contains("lo")) box.lo = detail::get_corner(g["lo"], c.mesh.dim, "geometry.lo");
                if (g.contains("hi")) box.hi = detail::get_corner(g["hi"], c.mesh.dim, "geometry.hi");
                c.mesh.geometry = box;
            } else if (kind == "boundary_strip") {
                if (g.contains("lo") || g.contains("hi"))
                    throw Error(ErrorCode::ConfigInvalid, "boundary_strip takes only axis and fraction");
                const int axis = g.contains("axis") ? static_cast<int>(detail::get_integer(g["axis"], "geometry.axis")) : 0;
                const double fr = g.contains("fraction") ? detail::get_number(g["fraction"], "geometry.fraction") : 0.5;
                c.mesh.geometry = GeometryConfig::strip(axis, fr);
            } else {
                throw Error(ErrorCode::ConfigInvalid, "geometry.kind must be interior_box or boundary_strip");
            }
        }
        try {
            detail::validate_geometry(c.mesh.dim, c.mesh.cells, c.mesh.geometry);
        } catch (const Error& e) {
            throw Error(ErrorCode::ConfigInvalid, e.what());
        }
    }

    if (j.contains("diffusivity")) {
        const json& d = j["diffusivity"];
        detail::only_keys(d, "diffusivity", {"p1", "p2", "orientation"});
        if (d.contains("p1")) c.diffusivity.p1 = detail::get_expression(d["p1"], "diffusivity.p1");
        if (d.contains("p2")) c.diffusivity.p2 = detail::get_expression(d["p2"], "diffusivity.p2");
        if (d.contains("orientation")) {
            const std::string o = detail::get_string(d["orientation"], "diffusivity.orientation");
            if (o == "lions_interior") c.diffusivity.orientation = Orientation::LionsInterior;
            else if (o == "swapped") c.diffusivity.orientation = Orientation::Swapped;
            else throw Error(ErrorCode::ConfigInvalid, "orientation must be lions_interior or swapped");
        }
    }

    if (j.contains("epsilons")) {
        const json& e = j["epsilons"];
        if (e.is_array()) {
            c.epsilons = detail::get_number_list(e, "epsilons");
        } else {
            detail::only_keys(e, "epsilons", {"start", "stop", "points"});
            for (const char* key : {"start", "stop", "points"})
                if (!e.contains(key)) throw Error(ErrorCode::ConfigInvalid, std::string("epsilons.") + key + " missing");
            const long long pts = detail::get_integer(e["points"], "epsilons.points");
            if (pts < 1 || pts > 1000) throw Error(ErrorCode::ConfigInvalid, "epsilons.points must be in [1, 1000]");
            c.epsilons = log_range(detail::get_number(e["start"], "epsilons.start"),
                                   detail::get_number(e["stop"], "epsilons.stop"), static_cast<std::size_t>(pts));
        }
    }
    detail::require_descending(c.epsilons, "epsilons");

    if (j.contains("k")) {
        const long long k = detail::get_integer(j["k"], "k");
        if (k < 0 || k > kMaxExpansionOrder)
            throw Error(ErrorCode::ConfigInvalid, "k must be in [0, " + std::to_string(kMaxExpansionOrder) + "]");
        c.k = static_cast<int>(k);
    }
    if (j.contains("f")) c.f = detail::get_expression(j["f"], "f");
    if (j.contains("seed")) {
        const long long s = detail::get_integer(j["seed"], "seed");
        if (s < 0) throw Error(ErrorCode::ConfigInvalid, "seed must be nonnegative");
        c.seed = static_cast<std::uint64_t>(s);
    }
    if (j.contains("output")) c.output = detail::get_string(j["output"], "output");
    if (j.contains("toy")) {
        c.toy = detail::get_string(j["toy"], "toy");
        if (c.toy != "diag2" && c.toy != "coupled2") throw Error(ErrorCode::ConfigInvalid, "toy must be diag2 or coupled2");
    }
    if (j.contains("monotone")) {
        const json& m = j["monotone"];
        detail::only_keys(m, "monotone", {"pbar_limit", "r", "deltas"});
        if (m.contains("pbar_limit")) c.monotone.pbar_limit = detail::get_expression(m["pbar_limit"], "monotone.pbar_limit");
        if (m.contains("r")) c.monotone.r = detail::get_expression(m["r"], "monotone.r");
        if (m.contains("deltas")) c.monotone.deltas = detail::get_number_list(m["deltas"], "monotone.deltas");
    }
    detail::require_descending(c.monotone.deltas, "monotone.deltas");
    if (j.contains("cases")) {
        const long long n = detail::get_integer(j["cases"], "cases");
        if (n < 1 || n > 100000) throw Error(ErrorCode::ConfigInvalid, "cases must be in [1, 100000]");
        c.cases = static_cast<std::size_t>(n);
    }
    return c;
}

/// Cross-field checks that depend on the experiment kind.
inline void validate_config(const ExperimentConfig& c) {
    const bool expansion = c.experiment == ExperimentKind::Expand || c.experiment == ExperimentKind::Sweep ||
                           c.experiment == ExperimentKind::Precond;
    if (expansion && c.diffusivity.orientation == Orientation::Swapped)
        throw Error(ErrorCode::ConfigInvalid, "expansion experiments need orientation lions_interior");
    if (c.experiment == ExperimentKind::Monotone && !c.toy.empty())
        throw Error(ErrorCode::ConfigInvalid, "monotone runs on a mesh, not a toy pair");
    if (c.toy.empty()) {
        try {
            detail::validate_geometry(c.mesh.dim, c.mesh.cells, c.mesh.geometry);
        } catch (const Error& e) {
            throw Error(ErrorCode::ConfigInvalid, e.what());
        }
    }
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigInvalid, "cannot open config '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ConfigInvalid, std::string("malformed JSON: ") + e.what());
    }
    ExperimentConfig c = parse_config(j);
    validate_config(c);
    return c;
}

inline nlohmann::json to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["experiment"] = to_string(c.experiment);
    if (c.toy.empty()) {
        nlohmann::json g;
        if (c.mesh.geometry.kind == GeometryConfig::Kind::InteriorBox) {
            g["kind"] = "interior_box";
            g["lo"] = std::vector<double>(c.mesh.geometry.lo.begin(), c.mesh.geometry.lo.begin() + c.mesh.dim);
            g["hi"] = std::vector<double>(c.mesh.geometry.hi.begin(), c.mesh.geometry.hi.begin() + c.mesh.dim);
        } else {
            g["kind"] = "boundary_strip";
            g["axis"] = c.mesh.geometry.axis;
            g["fraction"] = c.mesh.geometry.fraction;
        }
        j["mesh"] = {{"dim", c.mesh.dim}, {"cells", c.mesh.cells}, {"geometry", g}};
        j["diffusivity"] = {{"p1", c.diffusivity.p1}, {"p2", c.diffusivity.p2},
                            {"orientation", to_string(c.diffusivity.orientation)}};
        j["f"] = c.f;
    } else {
        j["toy"] = c.toy;
    }
    j["epsilons"] = c.epsilons;
    j["k"] = c.k;
    j["seed"] = c.seed;
    if (c.experiment == ExperimentKind::Monotone)
        j["monotone"] = {{"pbar_limit", c.monotone.pbar_limit}, {"r", c.monotone.r}, {"deltas", c.monotone.deltas}};
    if (c.experiment == ExperimentKind::Oracle) j["cases"] = c.cases;
    return j;
}

}  // namespace hcx
