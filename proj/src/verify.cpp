#include "bgeo/verify.hpp"

#include <cmath>
#include <functional>
#include <map>

#include "bgeo/connection.hpp"
#include "bgeo/elliptic.hpp"
#include "bgeo/error.hpp"
#include "bgeo/gram.hpp"
#include "bgeo/kernel.hpp"
#include "bgeo/metric.hpp"
#include "bgeo/representative.hpp"
#include "bgeo/zeros.hpp"

namespace bgeo {

std::vector<Domain> catalog_domains(double annulus_r) {
    return {Domain::disk(), Domain::ball(2), Domain::annulus(annulus_r),
            Domain::polydisc(2),
            Domain::product({Domain::annulus(annulus_r), Domain::disk()})};
}

namespace {

void add(SuiteReport& rep, const std::string& name, double value, double threshold,
         const std::string& detail = "") {
    rep.checks.push_back({name, value, threshold, value < threshold, detail});
}

void add_flag(SuiteReport& rep, const std::string& name, bool passed,
              const std::string& detail = "") {
    rep.checks.push_back({name, passed ? 0.0 : 1.0, 1.0, passed, detail});
}

// random interior point whose polarized pair with pbar stays clear of Z0/Z1
CVec admissible_point(const Kernel& kernel, const CVec& pbar, std::mt19937_64& rng,
                      double margin = 0.08) {
    const double k_scale = kernel_scale(kernel, pbar);
    for (int attempt = 0; attempt < 400; ++attempt) {
        CVec z = kernel.domain().random_point(rng, margin);
        try {
            Jet jet = kernel.jet(z, pbar);
            if (std::abs(jet.k) < 0.02 * k_scale) continue;
            LogDerivatives ld = log_derivatives(jet, 0.0);
            cplx det = Eigen::PartialPivLU<CMat>(ld.metric).determinant();
            double gsc = ld.metric.cwiseAbs().maxCoeff();
            if (std::abs(det) < 1e-6 * std::pow(gsc, kernel.dim())) continue;
            return z;
        } catch (const Error&) {
        }
    }
    throw Error("no admissible sample point found");
}

SuiteReport suite_rep_forms(const VerifyOptions& opts) {
    SuiteReport rep{"rep-forms", opts.seed, {}};
    std::mt19937_64 rng(opts.seed);
    KernelPtr disk = make_kernel(Domain::disk());

    {  // rep_0 = id on a 51x51 grid of |z| < 0.95
        RepChart chart = make_chart(disk, cvec1(cplx(0.0)), RepMode::Raw);
        double worst = 0.0;
        for (int i = 0; i < 51; ++i) {
            for (int j = 0; j < 51; ++j) {
                cplx z(-0.95 + 1.9 * i / 50.0, -0.95 + 1.9 * j / 50.0);
                if (std::abs(z) >= 0.95) continue;
                worst = std::max(worst, std::abs(rep_map(chart, cvec1(z))(0) - z));
            }
        }
        add(rep, "disk rep_0 identity (51x51 grid)", worst, 1e-10);
    }
    {  // rep_p closed form (1-|p|^2)(z-p)/(1-z pbar)
        std::vector<cplx> ps = {cplx(0.3, 0.0), cplx(-0.5, 0.0), cplx(0.2, 0.4),
                                cplx(-0.1, -0.6), cplx(0.0, 0.7)};
        double worst = 0.0;
        for (cplx p : ps) {
            RepChart chart = make_chart(disk, cvec1(p), RepMode::Raw);
            int got = 0;
            while (got < 50) {
                cplx z = random_in_disk(rng, 0.95);
                cplx expect = (1.0 - std::norm(p)) * (z - p) / (1.0 - z * std::conj(p));
                if (std::abs(expect) < 1e-3) continue;
                cplx zeta = rep_map(chart, cvec1(z))(0);
                worst = std::max(worst, std::abs(zeta - expect) / std::abs(expect));
                ++got;
            }
        }
        add(rep, "disk rep_p closed form (5 basepoints, 50 samples)", worst, 1e-8);
    }
    {  // normalized chart at 0 is sqrt(2) z
        RepChart chart = make_chart(disk, cvec1(cplx(0.0)), RepMode::Normalized);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            cplx z = random_in_disk(rng, 0.9);
            worst = std::max(worst,
                             std::abs(rep_map(chart, cvec1(z))(0) - std::sqrt(2.0) * z));
        }
        add(rep, "disk normalized rep_0 = sqrt(2) z", worst, 1e-10);
    }
    {  // annulus rep has the elliptic form C1 wp'/(wp + eta1/w1) + C2
        double r = opts.annulus_r;
        KernelPtr ann = make_kernel(Domain::annulus(r));
        elliptic::Lattice lat = elliptic::make_lattice(r);
        cplx p(0.5 * (1 + r) + 0.07, 0.0);
        RepChart chart = make_chart(ann, cvec1(p), RepMode::Raw);
        auto f_ell = [&](cplx z) {
            cplx u = std::log(z * p);
            return elliptic::wp_prime(lat, u) / elliptic::wp_shifted(lat, u);
        };
        // fit C1, C2 from two evaluations
        cplx z1(0.8, 0.1), z2(0.1, 0.7);
        cplx f1 = f_ell(z1), f2 = f_ell(z2);
        cplx r1 = rep_map(chart, cvec1(z1))(0), r2 = rep_map(chart, cvec1(z2))(0);
        cplx c1 = (r1 - r2) / (f1 - f2);
        cplx c2 = r1 - c1 * f1;
        double worst = 0.0;
        int got = 0;
        while (got < 50) {
            CVec z = ann->domain().random_point(rng, 0.05);
            try {
                cplx val = rep_map(chart, z)(0);
                worst = std::max(worst, std::abs(val - (c1 * f_ell(z(0)) + c2)));
                ++got;
            } catch (const Error&) {
            }
        }
        add(rep, "annulus rep_p elliptic form (fit C1,C2 + 50 samples)", worst, 1e-8);

        // symmetry: real on the real trace, Re constant on the |z| = r/|p|
        // circle (the f(i R) subset i R axis in the u plane)
        double sym = 0.0;
        for (int i = 1; i < 20; ++i) {
            double x = r + (1.0 - r) * i / 20.0;
            if (std::abs(x * p.real()) <= r * r || std::abs(x) <= r) continue;
            sym = std::max(sym, std::abs(rep_map(chart, cvec1(cplx(x, 0.0)))(0).imag()));
        }
        double re0 = rep_map(chart, cvec1(cplx(r / p.real(), 0.0)))(0).real();
        for (int i = 1; i < 20; ++i) {
            cplx z = std::polar(r / p.real(), 2.0 * kPi * i / 20.0);
            sym = std::max(sym, std::abs(rep_map(chart, cvec1(z))(0).real() - re0));
        }
        add(rep, "annulus rep_p axis symmetry", sym, 1e-8);
    }
    return rep;
}

SuiteReport suite_flatness(const VerifyOptions& opts) {
    SuiteReport rep{"flatness", opts.seed, {}};
    std::mt19937_64 rng(opts.seed);
    for (const Domain& dom : catalog_domains(opts.annulus_r)) {
        KernelPtr kernel = make_kernel(dom);
        double sym = 0.0, curv = 0.0;
        for (int s = 0; s < 50; ++s) {
            CVec p = dom.random_point(rng, 0.1);
            CVec pbar = p.conjugate();
            CVec z = admissible_point(*kernel, pbar, rng, 0.1);
            ChristoffelTensor c = christoffel_at(*kernel, z, pbar);
            for (int j = 0; j < dom.n; ++j) {
                sym = std::max(sym,
                               (c.gamma[j] - c.gamma[j].transpose()).cwiseAbs().maxCoeff());
            }
            if (dom.n > 1 && s < 12) {  // FD curvature is the expensive part
                curv = std::max(curv, curvature_residual(*kernel, p, z, 1e-4));
            }
        }
        add(rep, dom.describe() + ": Christoffel symmetry", sym, 1e-10);
        add(rep, dom.describe() + ": curvature residual (probe 1e-4)", curv, 1e-6);
    }
    return rep;
}

SuiteReport suite_straightening(const VerifyOptions& opts) {
    SuiteReport rep{"straightening", opts.seed, {}};
    std::mt19937_64 rng(opts.seed);
    for (const Domain& dom : catalog_domains(opts.annulus_r)) {
        KernelPtr kernel = make_kernel(dom);
        double worst = 0.0;
        for (int s = 0; s < 20; ++s) {
            CVec p = dom.random_point(rng, 0.15);
            RepChart chart = make_chart(kernel, p, RepMode::Raw);
            // aim at a nearby admissible target to keep the geodesic inside
            CVec target = admissible_point(*kernel, chart.pbar, rng, 0.15);
            CVec zeta = rep_map(chart, p + 0.25 * (target - p));
            GeodesicTrace trace = integrate_geodesic(*kernel, p, p, zeta, 1.0);
            if (trace.terminal != Terminal::Completed) {
                worst = std::numeric_limits<double>::infinity();
                break;
            }
            for (const auto& smp : trace.samples) {
                double gap = (rep_map(chart, smp.z) - smp.t * zeta).norm();
                worst = std::max(worst, gap / (1.0 + zeta.norm()));
            }
        }
        add(rep, dom.describe() + ": |rep(z(t)) - t zeta| / (1+|zeta|)", worst, 1e-7);
    }
    return rep;
}

SuiteReport suite_linearity(const VerifyOptions& opts) {
    SuiteReport rep{"linearity", opts.seed, {}};
    std::mt19937_64 rng(opts.seed);
    {
        Domain dom = Domain::disk();
        KernelPtr kernel = make_kernel(dom);
        double worst = 0.0, worst_ratio = std::numeric_limits<double>::infinity();
        for (const Automorphism& f : builtin_automorphisms(dom, rng, 10)) {
            CVec p = cvec1(random_in_disk(rng, 0.5));
            LinearityReport lr = verify_linearity(kernel, f, p, 40, rng);
            worst = std::max(worst, lr.linear_residual);
            worst_ratio = std::min(worst_ratio,
                                   lr.conjugate_residual / std::max(lr.linear_residual, 1e-300));
        }
        add(rep, "disk Mobius: best-linear-fit residual", worst, 1e-8);
        add_flag(rep, "disk Mobius: conjugate fit >= 10x worse", worst_ratio >= 10.0,
                 "min ratio " + format_double(worst_ratio));
    }
    {
        Domain dom = Domain::annulus(opts.annulus_r);
        KernelPtr kernel = make_kernel(dom);
        double worst = 0.0, worst_ratio = std::numeric_limits<double>::infinity();
        for (const Automorphism& f : builtin_automorphisms(dom, rng, 6)) {
            double plo = opts.annulus_r + 0.25 * (1.0 - opts.annulus_r);
            double phi = opts.annulus_r + 0.65 * (1.0 - opts.annulus_r);
            std::uniform_real_distribution<double> pr(plo, phi);
            CVec p = cvec1(cplx(pr(rng), 0.0));
            LinearityReport lr = verify_linearity(kernel, f, p, 40, rng);
            worst = std::max(worst, lr.linear_residual);
            worst_ratio = std::min(worst_ratio,
                                   lr.conjugate_residual / std::max(lr.linear_residual, 1e-300));
        }
        add(rep, "annulus rotations/inversion: best-linear-fit residual", worst, 1e-7);
        add_flag(rep, "annulus: conjugate fit >= 10x worse", worst_ratio >= 10.0,
                 "min ratio " + format_double(worst_ratio));
    }
    return rep;
}

SuiteReport suite_annulus_kernel(const VerifyOptions& opts) {
    SuiteReport rep{"annulus-kernel", opts.seed, {}};
    std::mt19937_64 rng(opts.seed);
    for (double r : {0.05, 0.1, 0.3, 0.5}) {
        elliptic::Lattice lat = elliptic::make_lattice(r);
        AnnulusRoots roots = annulus_roots(r);
        double worst = 0.0;
        int got = 0;
        while (got < 100) {
            cplx lam = random_in_annulus(rng, r * r * 1.02, 0.98);
            if (std::abs(lam - cplx(roots.lambda1)) < 0.02 ||
                std::abs(lam - cplx(roots.lambda2)) < 0.02) {
                continue;
            }
            cplx a = annulus_kernel_weierstrass(r, lam);
            cplx b = annulus_kernel_laurent(r, lam);
            worst = std::max(worst, std::abs(a - b) / std::abs(a));
            ++got;
        }
        add(rep, "r=" + format_double(r) + ": wp formula vs Laurent series (100 pts)",
            worst, 1e-8);
        add(rep, "r=" + format_double(r) + ": Legendre relation residual",
            elliptic::legendre_residual(lat), 1e-10);
        double ode = 0.0;
        for (int s = 0; s < 50; ++s) {
            cplx u(std::uniform_real_distribution<double>(-lat.omega1, lat.omega1)(rng),
                   std::uniform_real_distribution<double>(-kPi, kPi)(rng));
            if (std::abs(u) < 0.1) continue;
            cplx wp = elliptic::wp(lat, u);
            cplx wpp = elliptic::wp_prime(lat, u);
            cplx lhs = wpp * wpp;
            cplx rhs = 4.0 * wp * wp * wp - lat.g2 * wp - lat.g3;
            ode = std::max(ode, std::abs(lhs - rhs) /
                                    std::max({std::abs(lhs), std::abs(rhs), 1.0}));
        }
        add(rep, "r=" + format_double(r) + ": Weierstrass ODE residual", ode, 1e-9);
    }
    return rep;
}

SuiteReport suite_annulus_roots(const VerifyOptions& opts) {
    SuiteReport rep{"annulus-roots", opts.seed, {}};
    for (double r : {0.05, 0.1, 0.3, 0.5, 0.7}) {
        elliptic::Lattice lat = elliptic::make_lattice(r);
        bool pattern_ok = true;
        std::string detail;
        try {
            AnnulusRoots roots = annulus_roots(r);
            bool intervals = roots.lambda2 > -1.0 && roots.lambda2 < -r &&
                             roots.lambda1 > -r && roots.lambda1 < -r * r;
            add_flag(rep, "r=" + format_double(r) + ": sign pattern + intervals",
                     intervals,
                     "lambda1=" + format_double(roots.lambda1) +
                         " lambda2=" + format_double(roots.lambda2));
            add(rep, "r=" + format_double(r) + ": root residual |h|",
                std::max(roots.residual1, roots.residual2), 1e-12);
        } catch (const Error& e) {
            pattern_ok = false;
            detail = e.what();
            add_flag(rep, "r=" + format_double(r) + ": sign pattern + intervals",
                     pattern_ok, detail);
        }
        double match = std::abs(annulus_h(lat, cplx(-1.0)) - annulus_h(lat, cplx(-r * r)));
        add(rep, "r=" + format_double(r) + ": h(-1) = h(-r^2)", match, 1e-10);
    }
    return rep;
}

SuiteReport suite_zhat(const VerifyOptions& opts) {
    SuiteReport rep{"zhat", opts.seed, {}};
    std::mt19937_64 rng(opts.seed);
    for (const Domain& dom : catalog_domains(opts.annulus_r)) {
        KernelPtr kernel = make_kernel(dom);
        double worst = 0.0;
        for (int s = 0; s < 100; ++s) {
            CVec p = dom.random_point(rng, 0.1);
            CVec pbar = p.conjugate();
            CVec z = admissible_point(*kernel, pbar, rng, 0.1);
            cplx num = zhat1_det(*kernel, p, z);
            cplx kz = kernel->eval(z, pbar);
            cplx det_g = metric_at(*kernel, z, pbar).det_g;
            cplx lhs = num / std::pow(kz, 2 * dom.n);
            worst = std::max(worst, std::abs(lhs - det_g) / std::abs(det_g));
        }
        add(rep, dom.describe() + ": det numerator / K^2n = det G (100 pts)", worst, 1e-9);
    }
    for (const Domain& dom : {Domain::disk(), Domain::ball(2)}) {
        KernelPtr kernel = make_kernel(dom);
        std::mt19937_64 rng2(opts.seed + 1);
        CVec p = dom.random_point(rng2, 0.2);
        CVec pbar = p.conjugate();
        // zhat scale at the basepoint: K^{2n} det G
        double scale = std::abs(zhat1_det(*kernel, p, p));
        double min_ratio = std::numeric_limits<double>::infinity();
        for (int s = 0; s < 800; ++s) {
            CVec z = dom.random_point(rng2, 0.02);
            min_ratio = std::min(min_ratio, std::abs(zhat1_det(*kernel, p, z)) / scale);
        }
        add_flag(rep, dom.describe() + ": Zhat1 grid scan empty", min_ratio > 1e-6,
                 "min |det|/scale = " + format_double(min_ratio));
    }
    return rep;
}

SuiteReport suite_divergence(const VerifyOptions& opts) {
    SuiteReport rep{"divergence", opts.seed, {}};
    double r = opts.annulus_r;
    Domain dom = Domain::annulus(r);
    KernelPtr kernel = make_kernel(dom);
    AnnulusRoots roots = annulus_roots(r);
    double p = 0.5 * (1.0 + r) + 0.1 * (1.0 - r);
    // kernel zero inside A: lambda2 / p (falls inside for p close to 1)
    cplx q = roots.lambda2 / p;
    if (!(std::abs(q) > r && std::abs(q) < 1.0)) {
        q = roots.lambda1 / p;
    }
    CVec pv = cvec1(cplx(p, 0.0));
    CVec y = pv;
    cplx dir = (cplx(p, 0.0) - q) / std::abs(cplx(p, 0.0) - q);
    std::vector<double> deltas;
    for (int k = 1; k <= 20; ++k) {
        CVec x = cvec1(q + std::pow(2.0, -k) * dir);
        deltas.push_back(intrinsic_delta(*kernel, pv, x, y));
    }
    bool exceeded = deltas.back() > 1e3;
    bool monotone = true;
    for (std::size_t i = deltas.size() - 5; i < deltas.size(); ++i) {
        if (deltas[i] <= deltas[i - 1]) monotone = false;
    }
    add_flag(rep, "annulus delta(x_k, y) exceeds 1e3 as x_k -> q in Z0", exceeded,
             "delta at 2^-20: " + format_double(deltas.back()));
    add_flag(rep, "monotone growth over the last 5 terms", monotone);
    // one-segment bound dominates the graph distance
    DistanceResult dr = intrinsic_distance(*kernel, pv, cvec1(q + 0.3 * dir), y, 24);
    double delta_direct = intrinsic_delta(*kernel, pv, cvec1(q + 0.3 * dir), y);
    add_flag(rep, "d^p <= delta^p (one-segment partition)",
             dr.reachable && dr.d <= delta_direct + 1e-12,
             "d=" + format_double(dr.d) + " delta=" + format_double(delta_direct));
    return rep;
}

SuiteReport suite_gram(const VerifyOptions& opts) {
    SuiteReport rep{"gram", opts.seed, {}};
    Domain disk = Domain::disk();
    KernelPtr closed = make_kernel(disk);
    std::vector<int> caps = {5, 10, 20, 30};
    std::vector<double> errs;
    for (int cap : caps) {
        GramKernel gk = build_gram_kernel(disk, cap, 48);
        double worst = 0.0;
        for (int i = -10; i <= 10; ++i) {
            for (int j = -10; j <= 10; ++j) {
                cplx z(0.07 * i, 0.07 * j);
                if (std::abs(z) > 0.7) continue;
                double approx = gk.diagonal(cvec1(z));
                double exact = closed->diagonal(cvec1(z));
                worst = std::max(worst, std::abs(approx - exact) / exact);
            }
        }
        errs.push_back(worst);
    }
    add(rep, "disk degree_cap 30 matches closed form on |z| <= 0.7", errs.back(), 1e-6);
    bool monotone = true;
    for (std::size_t i = 1; i < errs.size(); ++i) {
        if (errs[i] >= errs[i - 1]) monotone = false;
    }
    add_flag(rep, "error monotone decreasing over caps {5,10,20,30}", monotone,
             "errors " + format_double(errs[0]) + ", " + format_double(errs[1]) + ", " +
                 format_double(errs[2]) + ", " + format_double(errs[3]));
    {
        double r = 0.5;
        GramKernel gk = build_gram_kernel(Domain::annulus(r), 30, 64);
        KernelPtr ann = make_kernel(Domain::annulus(r));
        double worst = 0.0;
        for (int i = 0; i < 40; ++i) {
            cplx z = std::polar(0.7, 2.0 * kPi * i / 40.0);
            double approx = gk.diagonal(cvec1(z));
            double exact = ann->diagonal(cvec1(z));
            worst = std::max(worst, std::abs(approx - exact) / exact);
        }
        add(rep, "annulus r=0.5 powers [-30,30] matches wp formula on |z|=0.7", worst,
            1e-6);
    }
    return rep;
}

SuiteReport suite_normal_coords(const VerifyOptions& opts) {
    SuiteReport rep{"normal-coords", opts.seed, {}};
    {
        KernelPtr disk = make_kernel(Domain::disk());
        std::vector<cplx> ps = {cplx(0.0), cplx(0.4, 0.0), cplx(-0.3, 0.2),
                                cplx(0.1, -0.5), cplx(0.55, 0.1)};
        double w2 = 0.0, w3 = 0.0, w4 = 0.0, mixed_min = 1e300;
        for (cplx p : ps) {
            NormalCoordReport r = verify_normal_coordinates(disk, cvec1(p), 1e-3);
            w2 = std::max(w2, r.res_identity);
            w3 = std::max(w3, r.res_first);
            w4 = std::max(w4, r.res_second_pure);
            mixed_min = std::min(mixed_min, r.mixed[0]);
        }
        add(rep, "disk: pullback metric identity at center", w2, 1e-5);
        add(rep, "disk: first derivatives vanish", w3, 1e-5);
        add(rep, "disk: pure second derivatives vanish", w4, 1e-5);
        add_flag(rep, "disk: mixed second derivative > 0.1 (curvature)", mixed_min > 0.1,
                 "min " + format_double(mixed_min));
    }
    {
        KernelPtr ball = make_kernel(Domain::ball(2));
        std::vector<CVec> ps;
        {
            CVec a(2);
            a << cplx(0.2, 0.0), cplx(0.0, 0.1);
            ps.push_back(a);
            CVec b(2);
            b << cplx(0.0), cplx(0.0);
            ps.push_back(b);
            CVec c(2);
            c << cplx(-0.2, 0.15), cplx(0.25, 0.0);
            ps.push_back(c);
            CVec d(2);
            d << cplx(0.1, 0.1), cplx(-0.1, 0.2);
            ps.push_back(d);
            CVec e(2);
            e << cplx(0.35, 0.0), cplx(0.1, -0.1);
            ps.push_back(e);
        }
        double w2 = 0.0, w3 = 0.0, w4 = 0.0;
        for (const CVec& p : ps) {
            NormalCoordReport r = verify_normal_coordinates(ball, p, 1e-3);
            w2 = std::max(w2, r.res_identity);
            w3 = std::max(w3, r.res_first);
            w4 = std::max(w4, r.res_second_pure);
        }
        add(rep, "ball(2): pullback metric identity at center", w2, 1e-5);
        add(rep, "ball(2): first derivatives vanish", w3, 1e-5);
        add(rep, "ball(2): pure second derivatives vanish", w4, 1e-5);
    }
    return rep;
}

SuiteReport suite_affine(const VerifyOptions& opts) {
    SuiteReport rep{"affine", opts.seed, {}};
    std::mt19937_64 rng(opts.seed);
    auto run_domain = [&](const Domain& dom, cplx p0, cplx q0, double zeta_scale,
                          double threshold) {
        KernelPtr kernel = make_kernel(dom);
        CVec p = cvec1(p0), q = cvec1(q0);
        RepChart chart = make_chart(kernel, p, RepMode::Raw);
        ExphOptions eopts;
        double worst = 0.0;
        int got = 0;
        while (got < 20) {
            cplx z0 = random_in_disk(rng, zeta_scale);
            cplx d = random_in_disk(rng, 0.5 * zeta_scale);
            std::array<cplx, 3> t{};
            bool ok = true;
            for (int i = 0; i < 3; ++i) {
                ExphResult er =
                    exph(chart, cvec1(z0 + static_cast<double>(i) * d), ExphMethod::Newton,
                         eopts);
                if (!er.converged || !dom.contains(er.z)) {
                    ok = false;
                    break;
                }
                try {
                    t[i] = exph_q_inverse(*kernel, p, q, er.z)(0);
                } catch (const Error&) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            worst = std::max(worst, std::abs(t[2] - 2.0 * t[1] + t[0]));
            ++got;
        }
        add(rep, dom.describe() + ": exph_q^-1 of collinear triples is affine", worst,
            threshold);
    };
    run_domain(Domain::disk(), cplx(0.2, 0.1), cplx(-0.3, 0.25), 0.25, 1e-7);
    double r = opts.annulus_r;
    run_domain(Domain::annulus(r), cplx(0.5 * (1 + r) + 0.05, 0.0),
               cplx(0.0, 0.5 * (1 + r)), 0.05, 1e-7);
    {
        // q = p reduces to rep_map
        KernelPtr kernel = make_kernel(Domain::disk());
        CVec p = cvec1(cplx(0.3, -0.2));
        RepChart chart = make_chart(kernel, p, RepMode::Raw);
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            CVec z = cvec1(random_in_disk(rng, 0.8));
            worst = std::max(worst, std::abs(exph_q_inverse(*kernel, p, p, z)(0) -
                                             rep_map(chart, z)(0)));
        }
        add(rep, "disk: exph_p^-1 reduces to rep_p at q = p", worst, 1e-12);
    }
    return rep;
}

SuiteReport suite_product_gap(const VerifyOptions& opts) {
    SuiteReport rep{"product-gap", opts.seed, {}};
    bool any = false;
    for (double r : {0.01, 0.02, 0.05}) {
        double p = 0.5;
        auto witnesses = product_gap_search(r, p, 60);
        bool found = !witnesses.empty();
        any = any || found;
        std::string detail = "r=" + format_double(r) + " p=" + format_double(p);
        if (found) {
            const auto& w = witnesses.front();
            detail += " witness z=" + format_complex(w.z) +
                      " |g|=" + format_double(w.metric_abs) +
                      " |K|/Ks=" + format_double(w.kernel_abs / w.kernel_scale);
        }
        add_flag(rep, "r=" + format_double(r) + ": metric zero with |K| bounded away",
                 found, detail);
    }
    add_flag(rep, "witness found for at least one r in {0.01, 0.02, 0.05}", any);
    return rep;
}

SuiteReport suite_naturality(const VerifyOptions& opts) {
    SuiteReport rep{"naturality", opts.seed, {}};
    std::mt19937_64 rng(opts.seed);
    {
        Domain dom = Domain::disk();
        KernelPtr kernel = make_kernel(dom);
        double worst = 0.0;
        for (const Automorphism& f : builtin_automorphisms(dom, rng, 6)) {
            CVec p = cvec1(random_in_disk(rng, 0.4));
            CVec v = cvec1(random_in_disk(rng, 0.3) + cplx(0.1, 0.0));
            worst = std::max(worst, verify_naturality(kernel, f, p, p, v, 1.0));
        }
        add(rep, "disk Mobius: pushed geodesic satisfies target equation", worst, 1e-7);
    }
    {
        Domain dom = Domain::annulus(opts.annulus_r);
        KernelPtr kernel = make_kernel(dom);
        double worst = 0.0;
        for (const Automorphism& f : builtin_automorphisms(dom, rng, 4)) {
            double pm = 0.5 * (1 + opts.annulus_r);
            CVec p = cvec1(cplx(pm, 0.0));
            CVec v = cvec1(0.1 * random_in_disk(rng, 1.0) + cplx(0.05, 0.0));
            worst = std::max(worst, verify_naturality(kernel, f, p, p, v, 1.0));
        }
        add(rep, "annulus rotations/inversion: naturality residual", worst, 1e-7);
    }
    return rep;
}

SuiteReport suite_straight_lines(const VerifyOptions& opts) {
    SuiteReport rep{"straight-lines", opts.seed, {}};
    std::mt19937_64 rng(opts.seed);
    {
        KernelPtr kernel = make_kernel(Domain::disk());
        CVec p = cvec1(cplx(0.25, -0.15));
        double through0 = verify_straight_lines(kernel, p, cvec1(cplx(0.0)),
                                                cvec1(cplx(0.3, 0.2)), 9);
        add(rep, "disk: line through 0 (radial geodesic)", through0, 1e-8);
        double offset = verify_straight_lines(kernel, p, cvec1(cplx(0.1, -0.05)),
                                              cvec1(cplx(-0.15, 0.2)), 9);
        add(rep, "disk: offset line", offset, 1e-7);
    }
    {
        double r = opts.annulus_r;
        KernelPtr kernel = make_kernel(Domain::annulus(r));
        CVec p = cvec1(cplx(0.5 * (1 + r) + 0.04, 0.0));
        double offset = verify_straight_lines(kernel, p, cvec1(cplx(0.01, 0.005)),
                                              cvec1(cplx(-0.015, 0.02)), 9);
        add(rep, "annulus: offset line in a small chart", offset, 1e-6);
    }
    (void)rng;
    return rep;
}

SuiteReport suite_distance(const VerifyOptions& opts) {
    SuiteReport rep{"distance", opts.seed, {}};
    KernelPtr disk = make_kernel(Domain::disk());
    CVec p = cvec1(cplx(0.0));
    CVec x = cvec1(cplx(-0.4, 0.1)), y = cvec1(cplx(0.35, -0.2));
    double delta = intrinsic_delta(*disk, p, x, y);
    DistanceResult d24 = intrinsic_distance(*disk, p, x, y, 24);
    DistanceResult d48 = intrinsic_distance(*disk, p, x, y, 48);
    add_flag(rep, "disk p=0: d = |2x - 2y| within grid error",
             d48.reachable && std::abs(d48.d - delta) / delta < 0.05,
             "d=" + format_double(d48.d) + " delta=" + format_double(delta));
    add_flag(rep, "d <= delta (one segment)", d48.d <= delta + 1e-12);
    add_flag(rep, "refinement monotone non-increasing", d48.d <= d24.d + 1e-12,
             "d24=" + format_double(d24.d) + " d48=" + format_double(d48.d));
    add_flag(rep, "symmetry d(x,y) = d(y,x)",
             std::abs(intrinsic_distance(*disk, p, y, x, 24).d - d24.d) < 1e-12);
    return rep;
}

SuiteReport suite_elliptic(const VerifyOptions& opts) {
    SuiteReport rep{"elliptic", opts.seed, {}};
    std::mt19937_64 rng(opts.seed);
    for (double r : {0.1, 0.3}) {
        elliptic::Lattice lat = elliptic::make_lattice(r);
        double periodicity = 0.0, evenness = 0.0, conj_sym = 0.0;
        for (int s = 0; s < 100; ++s) {
            cplx u(std::uniform_real_distribution<double>(-lat.omega1 * 0.9,
                                                          lat.omega1 * 0.9)(rng),
                   std::uniform_real_distribution<double>(-2.9, 2.9)(rng));
            if (std::abs(u) < 0.15) continue;
            cplx w = elliptic::wp(lat, u);
            periodicity = std::max(periodicity,
                                   std::abs(elliptic::wp(lat, u + 2.0 * lat.omega1) - w));
            periodicity = std::max(periodicity,
                                   std::abs(elliptic::wp(lat, u + 2.0 * lat.omega2) - w));
            evenness = std::max(evenness, std::abs(elliptic::wp(lat, -u) - w));
            evenness = std::max(evenness, std::abs(elliptic::wp_prime(lat, -u) +
                                                   elliptic::wp_prime(lat, u)));
            conj_sym = std::max(conj_sym,
                                std::abs(elliptic::wp(lat, std::conj(u)) - std::conj(w)));
        }
        add(rep, "r=" + format_double(r) + ": double periodicity (100 pts)", periodicity,
            1e-10);
        add(rep, "r=" + format_double(r) + ": evenness / oddness", evenness, 1e-10);
        add(rep, "r=" + format_double(r) + ": conjugation symmetry", conj_sym, 1e-10);
        double reals = std::max({std::abs(elliptic::wp(lat, lat.omega1).imag()),
                                 std::abs(elliptic::wp(lat, lat.omega2).imag()),
                                 std::abs(elliptic::wp(lat, lat.omega1 + lat.omega2).imag())});
        add(rep, "r=" + format_double(r) + ": wp real at half periods", reals, 1e-12);
    }
    return rep;
}

SuiteReport suite_pole_probe(const VerifyOptions& opts) {
    SuiteReport rep{"pole-probe", opts.seed, {}};
    {
        KernelPtr disk = make_kernel(Domain::disk());
        PoleProbeReport pr = pole_probe(disk, cvec1(cplx(0.3, 0.1)), 40);
        add_flag(rep, "disk: no collision found at this resolution",
                 pr.collisions.empty(),
                 "samples=" + std::to_string(pr.samples) +
                     " certified=" + std::to_string(pr.collisions.size()));
    }
    {
        KernelPtr ball = make_kernel(Domain::ball(2));
        PoleProbeReport pr = pole_probe(ball, Domain::ball(2).sample_point(), 24);
        add_flag(rep, "ball(2): no collision found at this resolution",
                 pr.collisions.empty());
    }
    {
        double r = opts.annulus_r;
        KernelPtr ann = make_kernel(Domain::annulus(r));
        for (double pfrac : {0.35, 0.6}) {
            double p = r + pfrac * (1.0 - r);
            PoleProbeReport pr = pole_probe(ann, cvec1(cplx(p, 0.0)), 60);
            add_flag(rep,
                     "annulus p=" + format_double(p) + ": collision pairs found",
                     !pr.collisions.empty(),
                     "near=" + std::to_string(pr.near_collisions) +
                         " certified=" + std::to_string(pr.collisions.size()));
        }
    }
    return rep;
}

using SuiteFn = SuiteReport (*)(const VerifyOptions&);

const std::vector<std::pair<std::string, SuiteFn>>& suite_table() {
    static const std::vector<std::pair<std::string, SuiteFn>> table = {
        {"rep-forms", suite_rep_forms},
        {"flatness", suite_flatness},
        {"straightening", suite_straightening},
        {"linearity", suite_linearity},
        {"annulus-kernel", suite_annulus_kernel},
        {"annulus-roots", suite_annulus_roots},
        {"zhat", suite_zhat},
        {"divergence", suite_divergence},
        {"gram", suite_gram},
        {"normal-coords", suite_normal_coords},
        {"affine", suite_affine},
        {"product-gap", suite_product_gap},
        {"naturality", suite_naturality},
        {"straight-lines", suite_straight_lines},
        {"distance", suite_distance},
        {"elliptic", suite_elliptic},
        {"pole-probe", suite_pole_probe},
    };
    return table;
}

}  // namespace

std::vector<std::string> suite_names() {
    std::vector<std::string> names;
    for (const auto& [n, fn] : suite_table()) names.push_back(n);
    names.push_back("all");
    return names;
}

SuiteReport run_suite(const std::string& name, const VerifyOptions& opts) {
    for (const auto& [n, fn] : suite_table()) {
        if (n == name) return fn(opts);
    }
    throw Error("unknown suite: " + name);
}

std::vector<SuiteReport> run_all_suites(const VerifyOptions& opts) {
    std::vector<SuiteReport> out;
    for (const auto& [n, fn] : suite_table()) out.push_back(fn(opts));
    return out;
}

}  // namespace bgeo
