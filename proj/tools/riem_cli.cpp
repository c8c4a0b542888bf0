// Command-line front end: geodesics, Jacobi fields, curvature and
// conjugate-point estimates, subspace projection, PGA, and the canned
// synthetic experiments.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "riem/error.hpp"
#include "riem/experiments.hpp"
#include "riem/io.hpp"
#include "riem/jacobi.hpp"
#include "riem/stats.hpp"

namespace {

using riem::Manifold;
using riem::Vec;

Vec parse_vec(const std::string& csv) {
    const std::vector<double> vals = riem::io::parse_reals(csv);
    Vec v(vals.size());
    for (size_t i = 0; i < vals.size(); ++i) v(static_cast<Eigen::Index>(i)) = vals[i];
    return v;
}

std::string vec_to_str(const Vec& v) {
    std::string out;
    char buf[40];
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        std::snprintf(buf, sizeof(buf), "%.17g", v(i));
        out += buf;
    }
    return out;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw riem::ConfigError("cannot write " + out_path);
        out << text << "\n";
    }
}

riem::GeodesicOptions geo_options(double tol) {
    riem::GeodesicOptions g;
    if (tol > 0.0) {
        g.ode.rel_tol = tol;
        g.ode.abs_tol = tol * 1e-2;
    }
    return g;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"geodesics, Jacobi fields and exact PGA on parametric and implicit manifolds"};
    app.require_subcommand(1);

    std::string manifold_spec = "surface_sc:1";
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 42;
    double tol = 0.0;
    app.add_option("--manifold", manifold_spec,
                   "builtin name[:params] or a definition file");
    app.add_option("--config", config_path, "key = value config file");
    app.add_option("--seed", seed, "random seed for sampled experiments");
    app.add_option("--out", out_path, "output file or directory");
    app.add_option("--tol", tol, "override integrator relative tolerance");

    // exp
    auto* cmd_exp = app.add_subcommand("exp", "evaluate the exponential map");
    std::string s_point, s_dir;
    double exp_t = 1.0;
    cmd_exp->add_option("--point", s_point, "base point coordinates")->required();
    cmd_exp->add_option("--dir", s_dir, "tangent vector coordinates")->required();
    cmd_exp->add_option("--t", exp_t, "geodesic time");

    // log
    auto* cmd_log = app.add_subcommand("log", "evaluate the logarithm map by shooting");
    std::string s_from, s_to;
    cmd_log->add_option("--from", s_from, "base point")->required();
    cmd_log->add_option("--to", s_to, "target point")->required();

    // jacobi
    auto* cmd_jac = app.add_subcommand("jacobi", "evaluate a Jacobi field");
    std::string s_u, s_w;
    double jac_t = 1.0;
    cmd_jac->add_option("--point", s_point, "base point")->required();
    cmd_jac->add_option("--dir", s_dir, "geodesic initial velocity")->required();
    cmd_jac->add_option("--u", s_u, "initial field value J_0")->required();
    cmd_jac->add_option("--w", s_w, "initial covariant derivative")->required();
    cmd_jac->add_option("--t", jac_t, "evaluation time");

    // curvature
    auto* cmd_curv = app.add_subcommand("curvature", "sectional curvature estimate");
    std::string s_v2;
    double curv_t = 0.01;
    cmd_curv->add_option("--point", s_point)->required();
    cmd_curv->add_option("--dir", s_dir, "first plane direction")->required();
    cmd_curv->add_option("--dir2", s_v2, "second plane direction")->required();
    cmd_curv->add_option("--t", curv_t, "expansion parameter");

    // conjugate
    auto* cmd_conj = app.add_subcommand("conjugate", "scan for the first conjugate point");
    double t_max = 2.0 * M_PI;
    cmd_conj->add_option("--point", s_point)->required();
    cmd_conj->add_option("--dir", s_dir, "geodesic initial velocity")->required();
    cmd_conj->add_option("--w", s_w, "initial derivative of the field")->required();
    cmd_conj->add_option("--tmax", t_max, "scan horizon");

    // project
    auto* cmd_proj = app.add_subcommand("project", "project a point onto a geodesic subspace");
    std::string s_center, s_basis, s_x;
    cmd_proj->add_option("--center", s_center, "subspace center")->required();
    cmd_proj->add_option("--basis", s_basis,
                         "subspace basis, vectors separated by ';'")->required();
    cmd_proj->add_option("--x", s_x, "point to project")->required();

    // pga
    auto* cmd_pga = app.add_subcommand("pga", "principal geodesic analysis of a dataset");
    std::string s_data, s_mode = "variance";
    int pga_count = 0;
    cmd_pga->add_option("--data", s_data, "dataset CSV (one point per row)")->required();
    cmd_pga->add_option("--mode", s_mode, "variance | reconstruction | linearized");
    cmd_pga->add_option("--count", pga_count, "number of directions (0 = all)");

    // reproduce
    auto* cmd_rep = app.add_subcommand("reproduce", "run a canned experiment");
    std::string experiment;
    cmd_rep->add_option("experiment", experiment,
                        "table_methods | table_curvature | fig_jacobi | m4_comparison")
        ->required();

    for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 1;
    }

    try {
        if (cmd_rep->parsed()) {
            riem::experiments::ExperimentConfig cfg;
            if (!config_path.empty()) cfg = riem::experiments::config_from_file(config_path);
            cfg.experiment = experiment;
            if (app.count("--seed")) cfg.seed = seed;
            if (app.count("--tol")) cfg.tol = tol;
            if (!out_path.empty()) cfg.output_path = out_path;
            const auto report = riem::experiments::run_experiment(cfg);
            riem::experiments::write_report(report, cfg.output_path);
            std::cout << "wrote " << cfg.output_path << "/" << report.name << ".csv\n";
            for (const auto& st : report.row_status)
                if (st != "ok") {
                    std::cerr << "row failed: " << st << "\n";
                    return 2;
                }
            return 0;
        }

        const Manifold m = riem::io::manifold_from_spec(manifold_spec);
        const riem::GeodesicOptions geo = geo_options(tol);
        riem::ShootOptions shoot;
        shoot.geo = geo;

        if (cmd_exp->parsed()) {
            const Vec y = riem::exp_map(m, parse_vec(s_point), parse_vec(s_dir), exp_t, geo);
            emit(vec_to_str(y), out_path);
        } else if (cmd_log->parsed()) {
            const Vec v = riem::log_map(m, parse_vec(s_from), parse_vec(s_to), shoot);
            emit(vec_to_str(v), out_path);
        } else if (cmd_jac->parsed()) {
            const Vec j = riem::jacobi_field(m, parse_vec(s_point), parse_vec(s_dir),
                                             parse_vec(s_u), parse_vec(s_w), jac_t, geo);
            emit(vec_to_str(j), out_path);
        } else if (cmd_curv->parsed()) {
            const auto est = riem::sectional_curvature(m, parse_vec(s_point),
                                                       parse_vec(s_dir), parse_vec(s_v2),
                                                       curv_t, geo);
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g", est.value);
            emit(buf, out_path);
        } else if (cmd_conj->parsed()) {
            const auto t_star = riem::conjugate_scan(m, parse_vec(s_point), parse_vec(s_dir),
                                                     parse_vec(s_w), t_max, geo);
            if (t_star) {
                char buf[64];
                std::snprintf(buf, sizeof(buf), "%.17g", *t_star);
                emit(buf, out_path);
            } else {
                emit("none", out_path);
            }
        } else if (cmd_proj->parsed()) {
            riem::GeodesicSubspace s;
            s.center = parse_vec(s_center);
            std::string rest = s_basis;
            size_t pos;
            while ((pos = rest.find(';')) != std::string::npos) {
                s.basis.push_back(parse_vec(rest.substr(0, pos)));
                rest = rest.substr(pos + 1);
            }
            if (!rest.empty()) s.basis.push_back(parse_vec(rest));
            riem::ProjectOptions po;
            po.shoot = shoot;
            const auto pr = riem::project(m, parse_vec(s_x), s, po);
            emit(vec_to_str(pr.point) + "\nw=" + vec_to_str(pr.w), out_path);
        } else if (cmd_pga->parsed()) {
            const auto data = riem::io::read_points_csv(s_data);
            riem::PgaOptions po;
            po.count = pga_count;
            if (s_mode == "variance")
                po.mode = riem::PgaMode::variance;
            else if (s_mode == "reconstruction")
                po.mode = riem::PgaMode::reconstruction;
            else if (s_mode == "linearized")
                po.mode = riem::PgaMode::linearized;
            else
                throw riem::ConfigError("unknown pga mode: " + s_mode);
            po.proj.shoot = shoot;
            po.karcher.shoot = shoot;
            const auto model = riem::pga(m, data, po);
            const std::string json = riem::io::pga_model_to_json(model, m);
            if (out_path.empty())
                std::cout << json;
            else {
                std::ofstream out(out_path, std::ios::binary);
                if (!out) throw riem::ConfigError("cannot write " + out_path);
                out << json;
            }
        }
        return 0;
    } catch (const riem::NoConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const riem::IntegrationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const riem::SingularityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const riem::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
