// Command-line workbench over the mahlerlab library: volume products,
// criticality and Hessian reports, finite-difference cross-checks, the
// critical-pentagon family sweep, simplex equality checks and projective
// images of polygon bodies.
//
// Exit codes: 0 success, 1 usage error, 2 domain error (a library Error).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "mahlerlab/format.hpp"
#include "mahlerlab/functional.hpp"
#include "mahlerlab/pentagon.hpp"
#include "mahlerlab/polygon_io.hpp"
#include "mahlerlab/projective.hpp"
#include "mahlerlab/simplexnd.hpp"

namespace {

using namespace mahlerlab;

int worker_threads() {
    const char* env = std::getenv("MAHLERLAB_THREADS");
    if (env == nullptr) return 1;
    const long v = std::strtol(env, nullptr, 10);
    if (v < 1) return 1;
    return static_cast<int>(v);
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw Error("cannot open output file: " + out_path);
    out << text;
}

std::string json_array(const std::vector<double>& vals) {
    std::string s = "[";
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i) s += ", ";
        s += g17(vals[i]);
    }
    return s + "]";
}

std::string json_matrix(const SymMatrix& m) {
    std::string s = "[";
    for (int i = 0; i < m.dim(); ++i) {
        if (i) s += ", ";
        std::vector<double> row;
        for (int j = 0; j < m.dim(); ++j) row.push_back(m.at(i, j));
        s += json_array(row);
    }
    return s + "]";
}

std::string render_vp(const Polygon& body, const std::string& format) {
    const double vp = volume_product(body);
    if (format == "json") return "{\"vp\": " + g17(vp) + "}\n";
    return "vp = " + g17(vp) + "\n";
}

std::string render_critical(const Polygon& body, const std::string& format) {
    const JacobianReport r = jacobian_analytic(body);
    std::ostringstream out;
    if (format == "json") {
        out << "{\"vp\": " << g17(r.vp) << ", \"body_barycenter\": "
            << json_array({r.body_barycenter.x, r.body_barycenter.y})
            << ", \"polar_barycenter\": "
            << json_array({r.polar_barycenter.x, r.polar_barycenter.y}) << ", \"jac\": "
            << json_array({r.jac[0], r.jac[1], r.jac[2], r.jac[3]})
            << ", \"is_critical\": " << (r.is_critical ? "true" : "false") << "}\n";
    } else {
        out << "vp               = " << g17(r.vp) << "\n"
            << "body barycenter  = (" << g17(r.body_barycenter.x) << ", "
            << g17(r.body_barycenter.y) << ")\n"
            << "polar barycenter = (" << g17(r.polar_barycenter.x) << ", "
            << g17(r.polar_barycenter.y) << ")\n"
            << "jacobian         = " << json_array({r.jac[0], r.jac[1], r.jac[2], r.jac[3]})
            << "\n"
            << "critical         = " << (r.is_critical ? "yes" : "no") << "\n";
    }
    return out.str();
}

std::string render_hessian(const Polygon& body, const std::string& format) {
    const HessianReport r = hessian_analytic(body);
    std::ostringstream out;
    if (format == "json") {
        out << "{\"hess\": " << json_matrix(r.hess) << ", \"eigenvalues\": "
            << json_array(r.eigenvalues) << ", \"det_direct\": " << g17(r.det_direct)
            << ", \"det_formula\": " << g17(r.det_formula)
            << ", \"det_formula_unsquared\": " << g17(r.det_formula_unsquared)
            << ", \"classification\": \"" << to_string(r.classification) << "\""
            << ", \"covariance_inequality_holds\": " << (r.covariance_inequality_holds ? "true" : "false") << "}\n";
    } else {
        out << "hessian          = " << json_matrix(r.hess) << "\n"
            << "eigenvalues      = " << json_array(r.eigenvalues) << "\n"
            << "det (direct)     = " << g17(r.det_direct) << "\n"
            << "det (formula)    = " << g17(r.det_formula) << "\n"
            << "det (literal)    = " << g17(r.det_formula_unsquared)
            << "   <- uncorrected prefactor, kept for comparison\n"
            << "classification   = " << to_string(r.classification) << "\n"
            << "matrix inequality holds = " << (r.covariance_inequality_holds ? "yes" : "no") << "\n";
    }
    return out.str();
}

std::string render_fd_check(const Polygon& body, double step, const std::string& format) {
    const double h1 = step > 0.0 ? step : default_first_order_step(body);
    const double h2 = step > 0.0 ? step : default_second_order_step(body);

    const JacobianReport jr = jacobian_analytic(body);
    const VecN fd = jacobian_fd(body, h1);
    double jac_dev = 0.0;
    for (int i = 0; i < 4; ++i) jac_dev = std::max(jac_dev, std::abs(fd[i] - jr.jac[i]));

    const SantaloCheck s1 = santalo_derivative_check(body, {1.0, 0.0}, h1);
    const SantaloCheck s2 = santalo_derivative_check(body, {0.0, 1.0}, h1);

    std::optional<double> hess_dev;
    if (jr.is_critical) {
        const HessianReport hr = hessian_analytic(body);
        const SymMatrix hfd = hessian_fd(body, h2);
        double d = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                d = std::max(d, std::abs(hfd.at(i, j) - hr.hess.at(i, j)));
        hess_dev = d;
    }

    std::ostringstream out;
    if (format == "json") {
        out << "{\"step\": " << g17(h1) << ", \"jac_analytic\": "
            << json_array({jr.jac[0], jr.jac[1], jr.jac[2], jr.jac[3]})
            << ", \"jac_fd\": " << json_array({fd[0], fd[1], fd[2], fd[3]})
            << ", \"jac_max_abs_diff\": " << g17(jac_dev)
            << ", \"santalo_lhs\": " << json_array({s1.lhs, s2.lhs})
            << ", \"santalo_rhs\": " << json_array({s1.rhs, s2.rhs});
        if (hess_dev) out << ", \"hess_max_abs_diff\": " << g17(*hess_dev);
        out << "}\n";
    } else {
        out << "step                = " << g17(h1) << "\n"
            << "jacobian (analytic) = "
            << json_array({jr.jac[0], jr.jac[1], jr.jac[2], jr.jac[3]}) << "\n"
            << "jacobian (FD)       = " << json_array({fd[0], fd[1], fd[2], fd[3]}) << "\n"
            << "jacobian max diff   = " << g17(jac_dev) << "\n"
            << "polar-volume derivative lhs/rhs (e1) = " << g17(s1.lhs) << " / " << g17(s1.rhs)
            << "\n"
            << "polar-volume derivative lhs/rhs (e2) = " << g17(s2.lhs) << " / " << g17(s2.rhs)
            << "\n";
        if (hess_dev) out << "hessian max diff    = " << g17(*hess_dev) << "\n";
    }
    return out.str();
}

std::string render_pentagon_solve(double q, const std::string& format) {
    const double b = solve_b(q);
    if (format == "json")
        return "{\"q\": " + g17(q) + ", \"b\": " + g17(b) + "}\n";
    return "b = " + g17(b) + "\n";
}

std::string render_pentagon_report(double q, const std::string& format) {
    const SweepRow row = sweep_row(q);
    const PentagonParams params(row.q, row.b);
    const Polygon body = build(params);
    const JacobianReport jr = jacobian_analytic(body);
    const HessianReport hr = hessian_analytic(body);

    std::ostringstream out;
    if (format == "json") {
        out << "{\"q\": " << g17(row.q) << ", \"b\": " << g17(row.b)
            << ", \"area\": " << g17(row.area) << ", \"ixx\": " << g17(row.ixx)
            << ", \"iyy\": " << g17(row.iyy) << ", \"s\": " << g17(row.s)
            << ", \"t\": " << g17(row.t) << ", \"vp\": " << g17(row.vp)
            << ", \"lambda_min\": " << g17(row.lambda_min)
            << ", \"lambda_max\": " << g17(row.lambda_max)
            << ", \"det_direct\": " << g17(hr.det_direct)
            << ", \"det_formula\": " << g17(hr.det_formula)
            << ", \"classification\": \"" << to_string(hr.classification) << "\""
            << ", \"is_critical\": " << (jr.is_critical ? "true" : "false") << "}\n";
    } else {
        out << "q              = " << g17(row.q) << "\n"
            << "b              = " << g17(row.b) << "\n"
            << "area           = " << g17(row.area) << "\n"
            << "Ixx            = " << g17(row.ixx) << "\n"
            << "Iyy            = " << g17(row.iyy) << "\n"
            << "s              = " << g17(row.s) << "\n"
            << "t              = " << g17(row.t) << "\n"
            << "vp             = " << g17(row.vp) << "\n"
            << "lambda range   = [" << g17(row.lambda_min) << ", " << g17(row.lambda_max)
            << "]\n"
            << "classification = " << to_string(hr.classification) << "\n"
            << "critical       = " << (jr.is_critical ? "yes" : "no") << "\n";
    }
    return out.str();
}

std::string render_simplex_check(int n, long samples, std::uint64_t seed,
                                 const std::string& format) {
    const double residual = simplex_equality_residual(n);
    std::optional<MonteCarloMoments> mc;
    double mc_dev = 0.0;
    if (samples > 0) {
        const SimplexN s = regular_simplex(n);
        mc = monte_carlo_moments(s, samples, seed);
        const SymMatrix closed = simplex_covariance(s);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                mc_dev = std::max(mc_dev, std::abs(mc->cov_estimate.at(i, j) - closed.at(i, j)));
    }

    std::ostringstream out;
    if (format == "json") {
        out << "{\"n\": " << n << ", \"equality_residual\": " << g17(residual);
        if (mc) {
            out << ", \"mc_samples\": " << samples << ", \"mc_seed\": " << seed
                << ", \"mc_cov_max_dev\": " << g17(mc_dev)
                << ", \"mc_stderr\": " << g17(mc->stderr_max)
                << ", \"mc_volume_ratio\": " << g17(mc->volume_ratio);
        }
        out << "}\n";
    } else {
        out << "n                 = " << n << "\n"
            << "equality residual = " << g17(residual) << "\n";
        if (mc) {
            out << "MC cov max dev    = " << g17(mc_dev) << " (stderr " << g17(mc->stderr_max)
                << ", " << samples << " samples, seed " << seed << ")\n"
                << "MC volume ratio   = " << g17(mc->volume_ratio) << "\n";
        }
    }
    return out.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"convex-geometry workbench: volume products, polar duality and "
                 "projective deformations of planar bodies"};
    app.require_subcommand(1);

    std::string body_path, out_path;
    std::string format = "text";
    double q = 0.0, q_from = kPentagonQMin, q_to = kPentagonQMax, step = 0.0;
    int steps = 201, simplex_n = 2;
    long samples = 0;
    std::uint64_t seed = 1;
    std::vector<double> mat_entries{1.0, 0.0, 0.0, 1.0};
    std::vector<double> x_shift{0.0, 0.0}, xi_shift{0.0, 0.0};

    const std::map<std::string, std::string> format_choices{
        {"text", "text"}, {"json", "json"}, {"csv", "csv"}};

    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"text", "json", "csv"}));
        cmd->add_option("--out", out_path, "write output to a file instead of stdout");
    };

    CLI::App* vp_cmd = app.add_subcommand("vp", "volume product of a polygon body");
    vp_cmd->add_option("--body", body_path, "polygon JSON file")->required();
    add_format(vp_cmd);

    CLI::App* critical_cmd =
        app.add_subcommand("critical", "criticality report (Jacobian and barycenters)");
    critical_cmd->add_option("--body", body_path, "polygon JSON file")->required();
    add_format(critical_cmd);

    CLI::App* hessian_cmd =
        app.add_subcommand("hessian", "Hessian report at a critical body");
    hessian_cmd->add_option("--body", body_path, "polygon JSON file")->required();
    add_format(hessian_cmd);

    CLI::App* fd_cmd = app.add_subcommand(
        "fd-check", "compare analytic derivatives against finite differences");
    fd_cmd->add_option("--body", body_path, "polygon JSON file")->required();
    fd_cmd->add_option("--step", step, "finite-difference step (default: scale-adjusted)");
    add_format(fd_cmd);

    CLI::App* psolve_cmd =
        app.add_subcommand("pentagon-solve", "solve the criticality equation for b(q)");
    psolve_cmd->add_option("--q", q, "curve parameter")->required();
    add_format(psolve_cmd);

    CLI::App* preport_cmd =
        app.add_subcommand("pentagon-report", "full report for the critical pentagon at q");
    preport_cmd->add_option("--q", q, "curve parameter")->required();
    add_format(preport_cmd);

    CLI::App* psweep_cmd =
        app.add_subcommand("pentagon-sweep", "CSV sweep of the critical pentagon family");
    psweep_cmd->add_option("--q-from", q_from, "sweep start (default -1/sqrt2)");
    psweep_cmd->add_option("--q-to", q_to, "sweep end (default 1/sqrt2)");
    psweep_cmd->add_option("--steps", steps, "number of rows (default 201)");
    psweep_cmd->add_option("--out", out_path, "CSV output file (default stdout)");

    CLI::App* simplex_cmd = app.add_subcommand(
        "simplex-check", "equality case of the covariance inequality at simplices");
    simplex_cmd->add_option("--n", simplex_n, "dimension (1..6)")->required();
    simplex_cmd->add_option("--samples", samples, "Monte Carlo samples (0 = skip)");
    simplex_cmd->add_option("--seed", seed, "Monte Carlo seed");
    add_format(simplex_cmd);

    CLI::App* project_cmd = app.add_subcommand(
        "project", "apply the projective map psi(M, x, xi) to a polygon body");
    project_cmd->add_option("--body", body_path, "polygon JSON file")->required();
    project_cmd->add_option("--mat", mat_entries, "2x2 matrix, row-major (a,b,c,d)")
        ->expected(4)
        ->delimiter(',');
    project_cmd->add_option("--x", x_shift, "translation of the body (x1,x2)")
        ->expected(2)
        ->delimiter(',');
    project_cmd->add_option("--xi", xi_shift, "translation of the polar body (xi1,xi2)")
        ->expected(2)
        ->delimiter(',');
    project_cmd->add_option("--out", out_path, "polygon JSON output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*vp_cmd) {
            write_output(render_vp(load_polygon(body_path), format), out_path);
        } else if (*critical_cmd) {
            write_output(render_critical(load_polygon(body_path), format), out_path);
        } else if (*hessian_cmd) {
            write_output(render_hessian(load_polygon(body_path), format), out_path);
        } else if (*fd_cmd) {
            write_output(render_fd_check(load_polygon(body_path), step, format), out_path);
        } else if (*psolve_cmd) {
            write_output(render_pentagon_solve(q, format), out_path);
        } else if (*preport_cmd) {
            write_output(render_pentagon_report(q, format), out_path);
        } else if (*psweep_cmd) {
            const auto rows = sweep(q_from, q_to, steps, worker_threads());
            std::ostringstream csv;
            write_sweep_csv(rows, csv);
            write_output(csv.str(), out_path);
        } else if (*simplex_cmd) {
            write_output(render_simplex_check(simplex_n, samples, seed, format), out_path);
        } else if (*project_cmd) {
            const Polygon body = load_polygon(body_path);
            const Mat m(2, {mat_entries[0], mat_entries[1], mat_entries[2], mat_entries[3]});
            const Homography h = psi(m, {x_shift[0], x_shift[1]}, {xi_shift[0], xi_shift[1]});
            write_output(polygon_to_json(apply_to_polygon(h, body)) + "\n", out_path);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
