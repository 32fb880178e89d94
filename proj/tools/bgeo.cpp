// bgeo: Bergman kernel geometry toolbox.
//
// Subcommands evaluate the kernel catalog, the polarized metric and
// connection, the representative charts, geodesics, zero varieties, and run
// the seeded verification suites.  Output is JSON on stdout (CSV with
// --emit); exit code 0 = ok, 1 = verification failure, 2 = usage error.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bgeo/connection.hpp"
#include "bgeo/elliptic.hpp"
#include "bgeo/error.hpp"
#include "bgeo/gram.hpp"
#include "bgeo/kernel.hpp"
#include "bgeo/metric.hpp"
#include "bgeo/representative.hpp"
#include "bgeo/verify.hpp"
#include "bgeo/zeros.hpp"

using namespace bgeo;
using nlohmann::json;

namespace {

json jc(cplx z) { return json::array({z.real(), z.imag()}); }

json jvec(const CVec& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(jc(v(i)));
    return a;
}

json jmat(const CMat& m) {
    json a = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(jc(m(i, j)));
        a.push_back(row);
    }
    return a;
}

struct Tolerances {
    double ode_tol = 1e-10;
    double newton_tol = 1e-12;
    double fd_step = 1e-5;
    double pole_guard = 1e-8;
    double kernel_floor = 1e-12;
};

struct GlobalConfig {
    Tolerances tol;
    std::uint64_t seed = 7;
};

// Config precedence: flags > config file > defaults.  The config file is
// JSON: {"seed": 7, "tolerances": {"ode_tol": 1e-10, ...}}.
void load_config_file(const std::string& path, GlobalConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file: " + path);
    json j = json::parse(in);
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("tolerances")) {
        const json& t = j["tolerances"];
        if (t.contains("ode_tol")) cfg.tol.ode_tol = t["ode_tol"].get<double>();
        if (t.contains("newton_tol")) cfg.tol.newton_tol = t["newton_tol"].get<double>();
        if (t.contains("fd_step")) cfg.tol.fd_step = t["fd_step"].get<double>();
        if (t.contains("pole_guard")) cfg.tol.pole_guard = t["pole_guard"].get<double>();
        if (t.contains("kernel_floor"))
            cfg.tol.kernel_floor = t["kernel_floor"].get<double>();
    }
    for (auto& [key, val] : j.items()) {
        if (key != "seed" && key != "tolerances") {
            throw Error("unknown config key: " + key);
        }
        (void)val;
    }
}

KernelOptions kernel_options(const GlobalConfig& cfg, const std::string& mode) {
    KernelOptions opts;
    opts.fd_step = cfg.tol.fd_step;
    opts.kernel_floor = cfg.tol.kernel_floor;
    opts.pole_guard = cfg.tol.pole_guard;
    if (mode == "fd") opts.mode = DerivMode::FiniteDifference;
    if (mode == "series") opts.annulus_mode = AnnulusEval::Laurent;
    return opts;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write: " + path);
    for (std::size_t i = 0; i < header.size(); ++i) {
        out << (i ? "," : "") << header[i];
    }
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << format_double(row[i]);
        }
        out << "\n";
    }
}

int cmd_verify(const std::string& suite, const GlobalConfig& cfg, double annulus_r) {
    VerifyOptions vopts;
    vopts.seed = cfg.seed;
    vopts.annulus_r = annulus_r;
    std::vector<SuiteReport> reports;
    if (suite == "all") {
        reports = run_all_suites(vopts);
    } else {
        reports.push_back(run_suite(suite, vopts));
    }
    json out;
    out["seed"] = vopts.seed;
    out["suites"] = json::array();
    bool ok = true;
    for (const auto& rep : reports) {
        json js;
        js["suite"] = rep.suite;
        js["passed"] = rep.all_passed();
        js["checks"] = json::array();
        for (const auto& c : rep.checks) {
            js["checks"].push_back({{"name", c.name},
                                    {"value", c.value},
                                    {"threshold", c.threshold},
                                    {"passed", c.passed},
                                    {"detail", c.detail}});
        }
        out["suites"].push_back(js);
        ok = ok && rep.all_passed();
    }
    out["passed"] = ok;
    std::cout << out.dump(2) << std::endl;
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bergman kernel geometry toolbox"};
    app.require_subcommand(1);

    GlobalConfig cfg;
    GlobalConfig flag;  // raw flag values; applied over the config file below
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file");
    auto* o_seed = app.add_option("--seed", flag.seed, "seed for randomized suites");
    auto* o_ode = app.add_option("--ode-tol", flag.tol.ode_tol, "geodesic integrator tolerance");
    auto* o_newton =
        app.add_option("--newton-tol", flag.tol.newton_tol, "chart inversion tolerance");
    auto* o_fd = app.add_option("--fd-step", flag.tol.fd_step, "finite difference base step");
    auto* o_guard = app.add_option("--pole-guard", flag.tol.pole_guard, "lattice pole guard");
    auto* o_floor =
        app.add_option("--kernel-floor", flag.tol.kernel_floor, "relative kernel floor");

    std::string domain_text = R"({"type":"disk"})";
    std::string z_text, wbar_text, p_text, zeta_text, q0_text, v0_text, x_text, y_text;
    std::string mode = "weierstrass", method = "newton", kind = "z0", emit_path;
    std::string suite = "all";
    double r_param = 0.1, u_real = 0.0, tmax = 1.0, p_real = 0.5;
    std::string u_text = "0.5+0.5i";
    int grid_n = 32, resolution = 24, degree_cap = 10, quad_res = 48;
    bool normalized = false;

    auto* c_ell = app.add_subcommand("elliptic", "Weierstrass functions of the annulus lattice");
    c_ell->add_option("--r", r_param, "annulus radius")->required();
    c_ell->add_option("--u", u_text, "argument (complex literal)");

    auto* c_ker = app.add_subcommand("kernel", "polarized Bergman kernel");
    c_ker->add_option("--domain", domain_text, "domain JSON");
    c_ker->add_option("--z", z_text)->required();
    c_ker->add_option("--wbar", wbar_text)->required();
    c_ker->add_option("--mode", mode, "weierstrass|series|gram|fd");
    c_ker->add_option("--degree-cap", degree_cap, "gram basis cap");
    c_ker->add_option("--quad-res", quad_res, "gram quadrature resolution");
    c_ker->add_option("--grid", grid_n, "emit grid resolution");
    c_ker->add_option("--emit", emit_path, "CSV output path");

    auto* c_met = app.add_subcommand("metric", "polarized Bergman metric");
    c_met->add_option("--domain", domain_text);
    c_met->add_option("--z", z_text)->required();
    c_met->add_option("--wbar", wbar_text, "defaults to conj(z)");

    auto* c_chr = app.add_subcommand("christoffel", "connection coefficients");
    c_chr->add_option("--domain", domain_text);
    c_chr->add_option("--z", z_text)->required();
    c_chr->add_option("--p", p_text)->required();

    auto* c_rep = app.add_subcommand("rep", "representative map");
    c_rep->add_option("--domain", domain_text);
    c_rep->add_option("--p", p_text)->required();
    c_rep->add_option("--z", z_text);
    c_rep->add_flag("--normalized", normalized, "Bochner normalization");
    c_rep->add_option("--grid", grid_n);
    c_rep->add_option("--emit", emit_path, "CSV grid of the chart");

    auto* c_exp = app.add_subcommand("exph", "holomorphic exponential (chart inverse)");
    c_exp->add_option("--domain", domain_text);
    c_exp->add_option("--p", p_text)->required();
    c_exp->add_option("--zeta", zeta_text)->required();
    c_exp->add_option("--method", method, "newton|ode");
    c_exp->add_flag("--normalized", normalized);

    auto* c_geo = app.add_subcommand("geodesic", "integrate the frozen connection");
    c_geo->add_option("--domain", domain_text);
    c_geo->add_option("--p", p_text)->required();
    c_geo->add_option("--q0", q0_text, "start point (defaults to p)");
    c_geo->add_option("--v0", v0_text)->required();
    c_geo->add_option("--tmax", tmax);
    c_geo->add_option("--emit", emit_path, "CSV trace path");

    auto* c_dst = app.add_subcommand("distance", "intrinsic distance upper bound");
    c_dst->add_option("--domain", domain_text);
    c_dst->add_option("--p", p_text)->required();
    c_dst->add_option("--x", x_text)->required();
    c_dst->add_option("--y", y_text)->required();
    c_dst->add_option("--resolution", resolution);

    auto* c_zer = app.add_subcommand("zeros", "zero variety probe");
    c_zer->add_option("--domain", domain_text);
    c_zer->add_option("--p", p_text)->required();
    c_zer->add_option("--kind", kind, "z0|z1|zhat1");
    c_zer->add_option("--grid", grid_n);

    auto* c_rts = app.add_subcommand("annulus-roots", "roots of h on the real segment");
    c_rts->add_option("--r", r_param)->required();

    auto* c_gap = app.add_subcommand("product-gap", "Zhat1 minus Z0 witness search");
    c_gap->add_option("--r", r_param)->required();
    c_gap->add_option("--p", p_real, "real basepoint");
    c_gap->add_option("--grid", grid_n);

    auto* c_pol = app.add_subcommand("pole-probe", "sampled injectivity probe");
    c_pol->add_option("--domain", domain_text);
    c_pol->add_option("--p", p_text)->required();
    c_pol->add_option("--grid", grid_n);

    auto* c_ver = app.add_subcommand("verify", "seeded verification suites");
    c_ver->add_option("--suite", suite, "suite name or 'all'");
    c_ver->add_option("--r", r_param, "annulus radius for annulus suites");
    c_ver->callback([] {});

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        // precedence: flags > config file > defaults
        if (!config_path.empty()) load_config_file(config_path, cfg);
        if (o_seed->count()) cfg.seed = flag.seed;
        if (o_ode->count()) cfg.tol.ode_tol = flag.tol.ode_tol;
        if (o_newton->count()) cfg.tol.newton_tol = flag.tol.newton_tol;
        if (o_fd->count()) cfg.tol.fd_step = flag.tol.fd_step;
        if (o_guard->count()) cfg.tol.pole_guard = flag.tol.pole_guard;
        if (o_floor->count()) cfg.tol.kernel_floor = flag.tol.kernel_floor;

        if (c_ell->parsed()) {
            elliptic::Lattice lat = elliptic::make_lattice(r_param);
            lat.pole_guard = cfg.tol.pole_guard;
            cplx u = parse_complex(u_text);
            json out;
            out["omega1"] = lat.omega1;
            out["nome_q"] = lat.nome_q;
            out["eta1"] = lat.eta1;
            out["g2"] = lat.g2;
            out["g3"] = lat.g3;
            out["wp"] = jc(elliptic::wp(lat, u));
            out["wp_prime"] = jc(elliptic::wp_prime(lat, u));
            out["zeta"] = jc(elliptic::w_zeta(lat, u));
            out["legendre_residual"] = elliptic::legendre_residual(lat);
            std::cout << out.dump(2) << std::endl;
            return 0;
        }
        if (c_ker->parsed()) {
            Domain dom = Domain::parse(domain_text);
            CVec z = parse_complex_vector(z_text);
            CVec wbar = parse_complex_vector(wbar_text);
            json out;
            if (mode == "gram") {
                GramKernel gk = build_gram_kernel(dom, degree_cap, quad_res);
                out["K"] = jc(gk.eval(z, wbar));
                out["basis_size"] = gk.basis_size();
            } else {
                KernelPtr k = make_kernel(dom, kernel_options(cfg, mode));
                out["K"] = jc(k->eval(z, wbar));
            }
            out["domain"] = dom.to_json();
            if (!emit_path.empty()) {
                KernelPtr k = make_kernel(dom, kernel_options(cfg, mode));
                std::vector<std::vector<double>> rows;
                for (int i = 0; i <= grid_n; ++i) {
                    for (int j = 0; j <= grid_n; ++j) {
                        cplx zz(-1.0 + 2.0 * i / grid_n, -1.0 + 2.0 * j / grid_n);
                        if (!dom.contains(cvec1(zz))) continue;
                        try {
                            cplx kv = k->eval(cvec1(zz), wbar);
                            rows.push_back({zz.real(), zz.imag(), kv.real(), kv.imag(),
                                            std::abs(kv)});
                        } catch (const Error&) {
                        }
                    }
                }
                write_csv(emit_path, {"x", "y", "ReK", "ImK", "absK"}, rows);
                out["emitted"] = emit_path;
            }
            std::cout << out.dump(2) << std::endl;
            return 0;
        }
        if (c_met->parsed()) {
            Domain dom = Domain::parse(domain_text);
            KernelPtr k = make_kernel(dom, kernel_options(cfg, "weierstrass"));
            CVec z = parse_complex_vector(z_text);
            CVec wbar = wbar_text.empty() ? CVec(z.conjugate()) : parse_complex_vector(wbar_text);
            MetricTensor m = metric_at(*k, z, wbar);
            json out;
            out["g"] = jmat(m.g);
            out["det"] = jc(m.det_g);
            bool pd = false;
            if (wbar_text.empty()) {
                Eigen::LLT<CMat> llt(m.g);
                pd = llt.info() == Eigen::Success;
            }
            out["positive_definite"] = pd;
            std::cout << out.dump(2) << std::endl;
            return 0;
        }
        if (c_chr->parsed()) {
            Domain dom = Domain::parse(domain_text);
            KernelPtr k = make_kernel(dom, kernel_options(cfg, "weierstrass"));
            CVec z = parse_complex_vector(z_text);
            CVec p = parse_complex_vector(p_text);
            ChristoffelTensor c = christoffel_at(*k, z, p.conjugate());
            json gam = json::array();
            for (const auto& gj : c.gamma) gam.push_back(jmat(gj));
            json out;
            out["gamma"] = gam;
            std::cout << out.dump(2) << std::endl;
            return 0;
        }
        if (c_rep->parsed()) {
            Domain dom = Domain::parse(domain_text);
            KernelPtr k = make_kernel(dom, kernel_options(cfg, "weierstrass"));
            CVec p = parse_complex_vector(p_text);
            RepChart chart =
                make_chart(k, p, normalized ? RepMode::Normalized : RepMode::Raw);
            json out;
            out["mode"] = normalized ? "normalized" : "raw";
            if (!z_text.empty()) {
                CVec z = parse_complex_vector(z_text);
                out["zeta"] = jvec(rep_map(chart, z));
            }
            if (!emit_path.empty()) {
                if (dom.n != 1) throw Error("rep --emit supports one-dimensional domains");
                std::vector<std::vector<double>> rows;
                for (int i = 0; i <= grid_n; ++i) {
                    for (int j = 0; j <= grid_n; ++j) {
                        cplx zz(-1.0 + 2.0 * i / grid_n, -1.0 + 2.0 * j / grid_n);
                        if (!dom.contains(cvec1(zz))) continue;
                        try {
                            cplx zeta = rep_map(chart, cvec1(zz))(0);
                            rows.push_back({zz.real(), zz.imag(), zeta.real(), zeta.imag()});
                        } catch (const Error&) {
                        }
                    }
                }
                write_csv(emit_path, {"x", "y", "Rezeta", "Imzeta"}, rows);
                out["emitted"] = emit_path;
            }
            std::cout << out.dump(2) << std::endl;
            return 0;
        }
        if (c_exp->parsed()) {
            Domain dom = Domain::parse(domain_text);
            KernelPtr k = make_kernel(dom, kernel_options(cfg, "weierstrass"));
            CVec p = parse_complex_vector(p_text);
            CVec zeta = parse_complex_vector(zeta_text);
            RepChart chart =
                make_chart(k, p, normalized ? RepMode::Normalized : RepMode::Raw);
            ExphOptions eopts;
            eopts.newton_tol = cfg.tol.newton_tol;
            eopts.ode.rtol = eopts.ode.atol = cfg.tol.ode_tol;
            ExphResult res = exph(chart, zeta,
                                  method == "ode" ? ExphMethod::Ode : ExphMethod::Newton,
                                  eopts);
            json out;
            out["z"] = jvec(res.z);
            out["converged"] = res.converged;
            out["iterations"] = res.iterations;
            out["residual"] = res.residual;
            std::cout << out.dump(2) << std::endl;
            return 0;
        }
        if (c_geo->parsed()) {
            Domain dom = Domain::parse(domain_text);
            KernelPtr k = make_kernel(dom, kernel_options(cfg, "weierstrass"));
            CVec p = parse_complex_vector(p_text);
            CVec q0 = q0_text.empty() ? p : parse_complex_vector(q0_text);
            CVec v0 = parse_complex_vector(v0_text);
            OdeOptions oopts;
            oopts.rtol = oopts.atol = cfg.tol.ode_tol;
            GeodesicTrace trace = integrate_geodesic(*k, p, q0, v0, tmax, oopts);
            json out;
            const char* term = "completed";
            if (trace.terminal == Terminal::HitVariety) term = "hit_variety";
            if (trace.terminal == Terminal::LeftDomain) term = "left_domain";
            if (trace.terminal == Terminal::StepUnderflow) term = "step_underflow";
            out["terminal"] = term;
            out["t_end"] = trace.t_end;
            out["steps"] = trace.samples.size();
            out["z_end"] = jvec(trace.back().z);
            out["v_end"] = jvec(trace.back().v);
            if (!emit_path.empty()) {
                std::vector<std::string> header{"t"};
                for (int i = 0; i < dom.n; ++i) header.push_back("Rez" + std::to_string(i + 1));
                for (int i = 0; i < dom.n; ++i) header.push_back("Imz" + std::to_string(i + 1));
                for (int i = 0; i < dom.n; ++i) header.push_back("Rev" + std::to_string(i + 1));
                for (int i = 0; i < dom.n; ++i) header.push_back("Imv" + std::to_string(i + 1));
                std::vector<std::vector<double>> rows;
                for (const auto& s : trace.samples) {
                    std::vector<double> row{s.t};
                    for (int i = 0; i < dom.n; ++i) row.push_back(s.z(i).real());
                    for (int i = 0; i < dom.n; ++i) row.push_back(s.z(i).imag());
                    for (int i = 0; i < dom.n; ++i) row.push_back(s.v(i).real());
                    for (int i = 0; i < dom.n; ++i) row.push_back(s.v(i).imag());
                    rows.push_back(std::move(row));
                }
                write_csv(emit_path, header, rows);
                out["emitted"] = emit_path;
            }
            std::cout << out.dump(2) << std::endl;
            return 0;
        }
        if (c_dst->parsed()) {
            Domain dom = Domain::parse(domain_text);
            KernelPtr k = make_kernel(dom, kernel_options(cfg, "weierstrass"));
            DistanceResult res =
                intrinsic_distance(*k, parse_complex_vector(p_text),
                                   parse_complex_vector(x_text),
                                   parse_complex_vector(y_text), resolution);
            json out;
            out["d"] = res.d;
            out["reachable"] = res.reachable;
            out["nodes"] = res.nodes;
            out["edges"] = res.edges;
            std::cout << out.dump(2) << std::endl;
            return 0;
        }
        if (c_zer->parsed()) {
            Domain dom = Domain::parse(domain_text);
            KernelPtr k = make_kernel(dom, kernel_options(cfg, "weierstrass"));
            CVec p = parse_complex_vector(p_text);
            json out;
            out["kind"] = kind;
            if (kind == "zhat1") {
                // grid scan of the polynomial determinant numerator
                double scale = std::abs(zhat1_det(*k, p, p));
                json hits = json::array();
                for (int i = 0; i <= grid_n; ++i) {
                    for (int j = 0; j <= grid_n; ++j) {
                        if (dom.n != 1) break;
                        cplx zz(-1.0 + 2.0 * i / grid_n, -1.0 + 2.0 * j / grid_n);
                        if (!dom.contains(cvec1(zz))) continue;
                        double v = std::abs(zhat1_det(*k, p, cvec1(zz))) / scale;
                        if (v < 1e-6) hits.push_back({{"z", jc(zz)}, {"value", v}});
                    }
                }
                out["hits"] = hits;
            } else {
                VarietyProbe probe = kind == "z1" ? z1_locus(*k, p, grid_n)
                                                  : z0_locus(*k, p, grid_n);
                json hits = json::array();
                for (std::size_t i = 0; i < probe.hits.size(); ++i) {
                    hits.push_back({{"z", jvec(probe.hits[i])},
                                    {"residual", probe.residuals[i]}});
                }
                out["hits"] = hits;
            }
            std::cout << out.dump(2) << std::endl;
            return 0;
        }
        if (c_rts->parsed()) {
            AnnulusRoots roots = annulus_roots(r_param);
            json out;
            out["r"] = roots.r;
            out["lambda1"] = roots.lambda1;
            out["lambda2"] = roots.lambda2;
            out["residual1"] = roots.residual1;
            out["residual2"] = roots.residual2;
            std::cout << out.dump(2) << std::endl;
            return 0;
        }
        if (c_gap->parsed()) {
            auto witnesses = product_gap_search(r_param, p_real, grid_n);
            json out;
            out["r"] = r_param;
            out["p"] = p_real;
            out["found"] = !witnesses.empty();
            json ws = json::array();
            for (const auto& w : witnesses) {
                ws.push_back({{"z", jc(w.z)},
                              {"metric_abs", w.metric_abs},
                              {"kernel_abs", w.kernel_abs},
                              {"kernel_scale", w.kernel_scale}});
            }
            out["witnesses"] = ws;
            std::cout << out.dump(2) << std::endl;
            return 0;
        }
        if (c_pol->parsed()) {
            Domain dom = Domain::parse(domain_text);
            KernelPtr k = make_kernel(dom, kernel_options(cfg, "weierstrass"));
            PoleProbeReport pr = pole_probe(k, parse_complex_vector(p_text), grid_n);
            json out;
            out["injective_on_sample"] = pr.injective_on_sample;
            out["samples"] = pr.samples;
            out["near_collisions"] = pr.near_collisions;
            out["note"] = pr.injective_on_sample
                              ? "no collision found at resolution " + std::to_string(grid_n)
                              : "collision pairs found";
            json cols = json::array();
            for (const auto& c : pr.collisions) {
                cols.push_back({{"z1", jvec(c.z1)},
                                {"z2", jvec(c.z2)},
                                {"zeta", jvec(c.zeta)},
                                {"residual", c.residual}});
            }
            out["collisions"] = cols;
            std::cout << out.dump(2) << std::endl;
            return 0;
        }
        if (c_ver->parsed()) {
            return cmd_verify(suite, cfg, r_param);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
    return 2;
}
