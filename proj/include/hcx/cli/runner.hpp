#pragma once

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hcx/cli/config.hpp"
#include "hcx/cli/oracle_suite.hpp"
#include "hcx/cli/svg.hpp"
#include "hcx/diffusion.hpp"
#include "hcx/expansion.hpp"
#include "hcx/forms.hpp"
#include "hcx/precond.hpp"

namespace hcx {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitConfig = 2;

struct RunOutcome {
    int exit_code = kExitOk;
    nlohmann::json report;
    std::vector<std::string> files;  // relative to the output directory
};

inline FormPair toy_pair(const std::string& name) {
    if (name == "diag2")
        return FormPair(SymMatrix::from_dense(DenseMatrix{{1, 0}, {0, 0}}),
                        SymMatrix::from_dense(DenseMatrix{{0, 0}, {0, 1}}), Basis::coordinate(2, {1}));
    if (name == "coupled2")
        return FormPair(SymMatrix::from_dense(DenseMatrix{{2, 0}, {0, 0}}),
                        SymMatrix::from_dense(DenseMatrix{{1, 1}, {1, 2}}), Basis::coordinate(2, {1}));
    throw Error(ErrorCode::ConfigInvalid, "unknown toy '" + name + "'");
}

namespace detail {

using json = nlohmann::json;

// JSON has no NaN/inf; map them to null so reports stay parseable
inline json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json nums(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

inline json constants_of(const AssumptionReport& r) {
    return {{"alpha", num(r.alpha)},
            {"alpha2", num(r.alpha2)},
            {"C1", num(r.c1)},
            {"C2", num(r.c2)},
            {"s1_min", num(r.s1_min)},
            {"s2_min", num(r.s2_min)},
            {"kernel_leak", num(r.kernel_leak)},
            {"rank_s1", r.rank_s1},
            {"dim_x1", r.subspace_dim},
            {"s1_psd", r.s1_psd},
            {"s2_psd", r.s2_psd},
            {"vanishes_on_x1", r.vanishes_on_x1},
            {"kernel_match", r.kernel_match},
            {"passed", r.passed}};
}

struct Problem {
    std::optional<Mesh> mesh;
    FormPair pair;
    AssumptionReport report;
    Vector eta;
};

inline Problem make_problem(const ExperimentConfig& c) {
    Problem p;
    if (!c.toy.empty()) {
        p.pair = toy_pair(c.toy);
        p.report = check_assumptions(p.pair);
        p.eta = Vector(p.pair.size(), 1.0);
        return p;
    }
    p.mesh = build_mesh(c.mesh.dim, c.mesh.cells, c.mesh.geometry);
    const Expression p1 = Expression::parse(c.diffusivity.p1), p2 = Expression::parse(c.diffusivity.p2);
    DiffusivitySpec spec;
    spec.p1 = [p1](double x, double y) { return p1(x, y); };
    spec.p2 = [p2](double x, double y) { return p2(x, y); };
    spec.orientation = c.diffusivity.orientation;
    AssembledForms f = assemble_forms(*p.mesh, spec);
    p.pair = std::move(f.pair);
    p.report = f.report;
    const Expression load = Expression::parse(c.f);
    p.eta = load_vector(*p.mesh, [load](double x, double y) { return load(x, y); });
    return p;
}

class OutputDir {
public:
    explicit OutputDir(std::filesystem::path root) : root_(std::move(root)) {
        std::error_code ec;
        std::filesystem::create_directories(root_, ec);
        if (ec) throw Error(ErrorCode::IoError, "cannot create '" + root_.string() + "': " + ec.message());
    }

    std::string path(const std::string& name) const { return (root_ / name).string(); }

    template <typename Writer>
    void write(const std::string& name, Writer&& w, std::vector<std::string>& files) const {
        std::ofstream out(path(name), std::ios::binary);
        if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path(name) + "'");
        w(out);
        if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path(name) + "'");
        files.push_back(name);
    }

private:
    std::filesystem::path root_;
};

inline std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline bool run_check(const ExperimentConfig& c, const OutputDir&, json& res, std::vector<std::string>&) {
    const Problem p = make_problem(c);
    res["constants"] = constants_of(p.report);
    if (p.mesh) {
        res["results"] = {{"dofs", p.mesh->num_dofs()}, {"elements", p.mesh->num_elements()}};
        if (c.diffusivity.orientation == Orientation::Swapped) {
            // eps S1 + S2 = eps (S1 + S2 / eps): check the identity at the first epsilon
            const double eps = c.epsilons.front();
            const Vector xs = SpdSolver(epsilon_system(p.pair, eps, Orientation::Swapped)).solve(p.eta);
            const Vector xl = SpdSolver(epsilon_system(p.pair, 1.0 / eps, Orientation::LionsInterior)).solve(p.eta);
            res["results"]["swapped_scaling_gap"] = num(norm2(subtract(scaled(eps, xs), xl)) / norm2(xl));
        }
    } else {
        res["results"] = {{"dofs", p.pair.size()}};
    }
    return p.report.passed;
}

inline bool run_expand(const ExperimentConfig& c, const OutputDir& out, json& res, std::vector<std::string>& files) {
    const Problem p = make_problem(c);
    res["constants"] = constants_of(p.report);
    const ExpansionSolver solver(p.pair, p.report);
    const ExpansionResult e = laurent_coefficients(solver, p.eta, c.k);
    json norms = json::array();
    for (const auto& v : e.coeffs) norms.push_back(num(norm2(v)));
    const double eps = c.epsilons.front();
    const Vector direct = solve_direct(p.pair, p.report, p.eta, eps);
    const double err = norm2(subtract(e.evaluate(eps), direct));
    res["results"] = {{"k", c.k},
                      {"coefficient_norms", norms},
                      {"bound_constant", num(e.bound_constant)},
                      {"epsilon", eps},
                      {"error", num(err)},
                      {"bound", num(e.bound_constant * std::pow(eps, c.k + 1))}};
    out.write("expansion.csv", [&](std::ostream& os) { write_expansion_csv(os, e); }, files);
    if (p.mesh) out.write("solution.csv", [&](std::ostream& os) { write_nodal_csv(os, *p.mesh, direct); }, files);
    return true;
}

inline bool run_sweep(const ExperimentConfig& c, const OutputDir& out, json& res, std::vector<std::string>& files,
                      json& warnings) {
    const Problem p = make_problem(c);
    res["constants"] = constants_of(p.report);
    const ErrorTable t = expansion_error_sweep(ExpansionSolver(p.pair, p.report), p.eta, c.k, c.epsilons);
    bool rigorous = true;
    std::size_t above = 0;
    for (std::size_t i = 0; i < t.errors.size(); ++i) {
        if (!t.above_floor(i)) continue;
        ++above;
        if (t.errors[i] > t.rigorous_bounds[i] * (1.0 + 1e-8)) rigorous = false;
    }
    res["results"] = {{"k", c.k},
                      {"epsilons", nums(t.epsilons)},
                      {"errors", nums(t.errors)},
                      {"bounds", nums(t.bounds)},
                      {"rigorous_bounds", nums(t.rigorous_bounds)},
                      {"floors", nums(t.floors)},
                      {"points_above_floor", above},
                      {"fitted_order", num(t.fitted_order)},
                      {"worst_ratio", num(t.worst_ratio())},
                      {"bound_holds", t.bound_holds()},
                      {"rigorous_bound_holds", rigorous}};
    out.write("error_table.csv", [&](std::ostream& os) { write_error_table_csv(os, t); }, files);
    for (const auto& w : emit_svg_loglog({{"error", t.epsilons, t.errors}, {"bound", t.epsilons, t.bounds}},
                                         out.path("sweep.svg"), "expansion error, k = " + std::to_string(c.k),
                                         "epsilon", "error"))
        warnings.push_back(w);
    files.push_back("sweep.svg");
    return t.bound_holds();
}

inline bool run_monotone(const ExperimentConfig& c, const OutputDir& out, json& res, std::vector<std::string>& files) {
    const Mesh mesh = build_mesh(c.mesh.dim, c.mesh.cells, c.mesh.geometry);
    const Expression pl = Expression::parse(c.monotone.pbar_limit), r = Expression::parse(c.monotone.r),
                     f = Expression::parse(c.f);
    const ElementField limit = sample_at_centroids(mesh, [&](double x, double y) { return pl(x, y); });
    const ElementField pert = sample_at_centroids(mesh, [&](double x, double y) { return r(x, y); });
    const Vector load = load_vector(mesh, [&](double x, double y) { return f(x, y); });
    const std::vector<double> v = monotone_experiment(mesh, limit, pert, c.monotone.deltas, load);
    bool non_increasing = true, differences_shrink = true;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] > v[i - 1] * (1.0 + 1e-12)) non_increasing = false;
        if (i > 1 && v[i - 1] - v[i] > v[i - 2] - v[i - 1]) differences_shrink = false;
    }
    res["results"] = {{"deltas", nums(c.monotone.deltas)},
                      {"values", nums(v)},
                      {"non_increasing", non_increasing},
                      {"differences_decrease", differences_shrink}};
    out.write("monotone.csv",
              [&](std::ostream& os) {
                  os << "delta,value\n" << std::setprecision(17);
                  for (std::size_t i = 0; i < v.size(); ++i) os << c.monotone.deltas[i] << ',' << v[i] << '\n';
              },
              files);
    return non_increasing;
}

inline bool run_precond(const ExperimentConfig& c, const OutputDir& out, json& res, std::vector<std::string>& files,
                        json& warnings) {
    const Problem p = make_problem(c);
    res["constants"] = constants_of(p.report);
    const auto solver = std::make_shared<const ExpansionSolver>(p.pair, p.report);
    BenchOptions opts;
    opts.seed = c.seed;
    const BenchReport b = pcg_benchmark(
        c.epsilons, [&](double e) { return p.pair.perturbed(e); },
        [&](double e) { return build_expansion_preconditioner(solver, c.k, e); }, p.eta, opts);

    std::size_t lo = std::numeric_limits<std::size_t>::max(), hi = 0, run = 1, longest = 1;
    bool ok = true;
    json failures = json::array();
    for (std::size_t i = 0; i < b.size(); ++i) {
        lo = std::min(lo, b.iters_precond[i]);
        hi = std::max(hi, b.iters_precond[i]);
        if (i > 0) {
            run = b.iters_plain[i] > b.iters_plain[i - 1] ? run + 1 : 1;
            longest = std::max(longest, run);
        }
        if (!b.failures[i].empty()) {
            ok = false;
            failures.push_back({{"epsilon", b.epsilons[i]}, {"detail", b.failures[i]}});
        }
    }
    std::vector<double> plain(b.iters_plain.begin(), b.iters_plain.end()), pre(b.iters_precond.begin(), b.iters_precond.end());
    res["results"] = {{"k", c.k},
                      {"epsilons", nums(b.epsilons)},
                      {"iters_plain", b.iters_plain},
                      {"iters_precond", b.iters_precond},
                      {"deviation", nums(b.deviation)},
                      {"solution_gap", nums(b.solution_gap)},
                      {"precond_spread", lo > 0 ? num(static_cast<double>(hi) / static_cast<double>(lo)) : json(nullptr)},
                      {"precond_within_factor_2", hi <= 2 * lo},
                      {"plain_increasing_decades", longest - 1},
                      {"failures", failures}};
    out.write("bench.csv", [&](std::ostream& os) { write_bench_csv(os, b); }, files);
    for (const auto& w : emit_svg_loglog({{"CG", b.epsilons, plain}, {"PCG (expansion)", b.epsilons, pre}},
                                         out.path("precond.svg"), "iterations, k = " + std::to_string(c.k), "epsilon",
                                         "iterations"))
        warnings.push_back(w);
    files.push_back("precond.svg");
    return ok;
}

inline bool run_oracle(const ExperimentConfig& c, const OutputDir& out, json& res, std::vector<std::string>& files) {
    const OracleSummary s = run_oracle_suite(c.cases, c.seed);
    json worst = json::object();
    for (const auto& r : s.rows) {
        const double prev = worst.contains(r.operation) ? worst[r.operation].get<double>() : 0.0;
        worst[r.operation] = std::max(prev, r.rel_error);
    }
    res["results"] = {{"cases", c.cases},
                      {"tolerance", s.tolerance},
                      {"max_rel_error", num(s.max_rel_error)},
                      {"max_rel_error_by_operation", worst}};
    out.write("oracle.csv",
              [&](std::ostream& os) {
                  os << "case,n,m,epsilon,operation,rel_error\n" << std::setprecision(17);
                  for (const auto& r : s.rows)
                      os << r.case_id << ',' << r.n << ',' << r.m << ',' << r.eps << ',' << r.operation << ','
                         << r.rel_error << '\n';
              },
              files);
    return s.passed();
}

}  // namespace detail

/// Runs one experiment and writes report.json plus its artifacts under `out_dir`.
/// Exit codes: 0 success, 1 experiment failed, 2 invalid configuration.
inline RunOutcome run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                                 std::ostream& console, bool color = true) {
    using detail::json;
    RunOutcome o;
    try {
        validate_config(config);
    } catch (const Error& e) {
        console << e.what() << '\n';
        o.exit_code = kExitConfig;
        return o;
    }

    json& rep = o.report;
    rep["experiment"] = to_string(config.experiment);
    rep["config"] = to_json(config);
    json warnings = json::array();
    bool passed = false;
    std::string failure;
    try {
        const detail::OutputDir out(out_dir);
        switch (config.experiment) {
            case ExperimentKind::Check: passed = detail::run_check(config, out, rep, o.files); break;
            case ExperimentKind::Expand: passed = detail::run_expand(config, out, rep, o.files); break;
            case ExperimentKind::Sweep: passed = detail::run_sweep(config, out, rep, o.files, warnings); break;
            case ExperimentKind::Monotone: passed = detail::run_monotone(config, out, rep, o.files); break;
            case ExperimentKind::Precond: passed = detail::run_precond(config, out, rep, o.files, warnings); break;
            case ExperimentKind::Oracle: passed = detail::run_oracle(config, out, rep, o.files); break;
        }
        if (!passed) failure = "experiment checks did not pass";
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ConfigInvalid) {
            console << e.what() << '\n';
            o.exit_code = kExitConfig;
            return o;
        }
        failure = e.what();
        rep["error_code"] = std::string(to_string(e.code()));
    }
    rep["passed"] = passed;
    rep["warnings"] = warnings;
    if (!failure.empty()) rep["failure"] = failure;
    rep["timestamp"] = detail::utc_timestamp();
    o.exit_code = passed ? kExitOk : kExitFailed;

    try {
        std::filesystem::create_directories(out_dir);
        std::ofstream f(out_dir / "report.json", std::ios::binary);
        if (!f) throw Error(ErrorCode::IoError, "cannot write report.json");
        f << rep.dump(2) << '\n';
        o.files.push_back("report.json");
    } catch (const std::exception& e) {
        console << "error: " << e.what() << '\n';
        o.exit_code = kExitFailed;
    }

    const char* tag = passed ? (color ? "\033[32mPASS\033[0m" : "PASS") : (color ? "\033[31mFAIL\033[0m" : "FAIL");
    console << '[' << tag << "] " << to_string(config.experiment);
    if (!failure.empty()) console << ": " << failure;
    console << "\n  wrote";
    for (const auto& f : o.files) console << ' ' << f;
    console << " in " << out_dir.string() << '\n';
    return o;
}

}  // namespace hcx
