#include "bgeo/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "bgeo/error.hpp"
#include "bgeo/metric.hpp"
#include "bgeo/representative.hpp"

namespace bgeo {

cplx annulus_h(const elliptic::Lattice& lat, cplx lambda) {
    double a = std::abs(lambda);
    if (!(a >= lat.r * lat.r * (1.0 - 1e-12) && a <= 1.0 + 1e-12)) {
        throw MembershipError("annulus_h argument outside r^2 <= |lambda| <= 1");
    }
    return elliptic::wp_shifted(lat, std::log(lambda));
}

cplx annulus_h(double r, cplx lambda) {
    return annulus_h(elliptic::make_lattice(r), lambda);
}

AnnulusRoots annulus_roots(double r) {
    elliptic::Lattice lat = elliptic::make_lattice(r);
    auto h_real = [&](double lam) { return annulus_h(lat, cplx(lam, 0.0)).real(); };

    const double h_m1 = h_real(-1.0);
    const double h_mr = h_real(-r);
    const double h_mr2 = h_real(-r * r);
    if (!(h_m1 < 0.0 && h_mr > 0.0 && h_mr2 < 0.0)) {
        throw Error("annulus_roots: sign pattern h(-1)<0, h(-r)>0, h(-r^2)<0 violated");
    }
    // scan for sign changes at coarse resolution: exactly two expected
    {
        int changes = 0;
        const int steps = 1000;
        double prev = h_m1;
        for (int i = 1; i <= steps; ++i) {
            double lam = -1.0 + (1.0 - r * r) * i / steps;
            if (lam >= -r * r) break;
            double v = h_real(lam);
            if (prev * v < 0.0) ++changes;
            if (v != 0.0) prev = v;
        }
        if (changes != 2) {
            throw Error("annulus_roots: expected exactly two sign changes, found " +
                        std::to_string(changes));
        }
    }
    auto bisect = [&](double lo, double hi) {
        double flo = h_real(lo);
        for (int it = 0; it < 200 && hi - lo > 1e-17 * std::abs(lo); ++it) {
            double mid = 0.5 * (lo + hi);
            double fm = h_real(mid);
            if (fm == 0.0) return mid;
            if (flo * fm < 0.0) {
                hi = mid;
            } else {
                lo = mid;
                flo = fm;
            }
        }
        return 0.5 * (lo + hi);
    };
    AnnulusRoots roots;
    roots.r = r;
    roots.lambda2 = bisect(-1.0, -r);
    roots.lambda1 = bisect(-r, -r * r);
    roots.residual1 = std::abs(h_real(roots.lambda1));
    roots.residual2 = std::abs(h_real(roots.lambda2));
    return roots;
}

namespace {

// Candidate points for a locus scan: grid for 1-d domains, seeded random
// sample otherwise.
std::vector<CVec> scan_points(const Domain& dom, int grid_n) {
    std::vector<CVec> pts;
    if (dom.n == 1) {
        double lo = -1.0, hi = 1.0;
        for (int i = 0; i <= grid_n; ++i) {
            for (int j = 0; j <= grid_n; ++j) {
                cplx z(lo + (hi - lo) * i / grid_n, lo + (hi - lo) * j / grid_n);
                CVec v = cvec1(z);
                if (dom.contains(v)) pts.push_back(v);
            }
        }
    } else {
        std::mt19937_64 rng(0x5eed5eedULL);
        int count = grid_n * grid_n;
        for (int i = 0; i < count; ++i) pts.push_back(dom.random_point(rng, 0.02));
    }
    return pts;
}

// One complex Newton step field for the two defining functions.
struct Defining {
    // value and z-derivative (1-d domains only for the derivative)
    std::function<cplx(const CVec&)> value;
    std::function<cplx(const CVec&)> dvalue;
};

VarietyProbe locus_scan(const Kernel& kernel, const CVec& p, int grid_n, double tol,
                        VarietyKind kind) {
    const CVec pbar = p.conjugate();
    const double k_scale = kernel_scale(kernel, pbar);
    double g_scale;
    {
        LogDerivatives ld = log_derivatives(kernel.jet(p, pbar), 0.0);
        g_scale = std::max(std::abs(Eigen::PartialPivLU<CMat>(ld.metric).determinant()),
                           std::numeric_limits<double>::min());
    }
    const Domain& dom = kernel.domain();
    const bool one_dim = dom.n == 1;

    auto value = [&](const CVec& z) -> cplx {
        Jet jet = kernel.jet(z, pbar);
        if (kind == VarietyKind::Z0) return jet.k / k_scale;
        LogDerivatives ld = log_derivatives(jet, 1e-14 * k_scale);
        return Eigen::PartialPivLU<CMat>(ld.metric).determinant() / g_scale;
    };
    auto dvalue = [&](const CVec& z) -> cplx {  // one-dimensional derivative
        Jet jet = kernel.jet(z, pbar);
        if (kind == VarietyKind::Z0) return jet.dz(0) / k_scale;
        LogDerivatives ld = log_derivatives(jet, 1e-14 * k_scale);
        return ld.dz_metric[0](0, 0) / g_scale;
    };

    VarietyProbe probe;
    probe.kind = kind;
    probe.p = p;
    const double coarse = 0.05;
    for (const CVec& z0 : scan_points(dom, grid_n)) {
        cplx f0;
        try {
            f0 = value(z0);
        } catch (const Error&) {
            continue;
        }
        if (std::abs(f0) > coarse) continue;
        CVec z = z0;
        bool refined = false;
        if (one_dim) {
            for (int it = 0; it < 80; ++it) {
                cplx f, df;
                try {
                    f = value(z);
                    df = dvalue(z);
                } catch (const Error&) {
                    break;
                }
                if (std::abs(f) < tol * 1e-2) {
                    refined = true;
                    break;
                }
                if (df == cplx(0.0)) break;
                z(0) -= f / df;
            }
        }
        cplx f_final;
        try {
            f_final = value(z);
        } catch (const Error&) {
            continue;
        }
        if (std::abs(f_final) >= tol) continue;
        if (!dom.contains(z)) continue;
        if (kind == VarietyKind::Z1) {
            // Z1 lives off Z0: require |K| above the same relative threshold
            if (std::abs(kernel.eval(z, pbar)) < tol * k_scale) continue;
        }
        bool duplicate = false;
        for (const CVec& hit : probe.hits) {
            if ((hit - z).norm() < 1e-5) duplicate = true;
        }
        if (!duplicate) {
            probe.hits.push_back(z);
            probe.residuals.push_back(std::abs(f_final));
        }
        (void)refined;
    }
    return probe;
}

}  // namespace

VarietyProbe z0_locus(const Kernel& kernel, const CVec& p, int grid_n, double tol) {
    return locus_scan(kernel, p, grid_n, tol, VarietyKind::Z0);
}

VarietyProbe z1_locus(const Kernel& kernel, const CVec& p, int grid_n, double tol) {
    return locus_scan(kernel, p, grid_n, tol, VarietyKind::Z1);
}

cplx zhat1_det(const Kernel& kernel, const CVec& p, const CVec& z) {
    Jet jet = kernel.jet(z, p.conjugate());
    CMat m = jet.k * jet.dzdwbar - jet.dz * jet.dwbar.transpose();
    return Eigen::PartialPivLU<CMat>(m).determinant();
}

std::vector<GapWitness> product_gap_search(double r, double p, int grid_n) {
    Domain dom = Domain::annulus(r);
    KernelPtr kernel = make_kernel(dom);
    const CVec pv = cvec1(cplx(p, 0.0));
    const CVec pbar = pv.conjugate();
    const double k_scale = kernel_scale(*kernel, pbar);

    auto metric_value = [&](cplx z) -> cplx {
        LogDerivatives ld = log_derivatives(kernel->jet(cvec1(z), pbar), 1e-14 * k_scale);
        return ld.metric(0, 0);
    };
    auto metric_dz = [&](cplx z) -> cplx {
        LogDerivatives ld = log_derivatives(kernel->jet(cvec1(z), pbar), 1e-14 * k_scale);
        return ld.dz_metric[0](0, 0);
    };

    // scan the upper band around the imaginary axis (conjugate witnesses
    // mirror below the real axis since p is real)
    std::vector<cplx> seeds;
    {
        std::vector<std::pair<double, cplx>> ranked;
        for (int i = 0; i <= grid_n; ++i) {
            double rho = r + (1.0 - r) * (0.02 + 0.96 * i / grid_n);
            for (int j = 0; j <= grid_n; ++j) {
                double theta = kPi / 2.0 - 0.9 + 1.8 * j / grid_n;
                cplx z = std::polar(rho, theta);
                if (!(std::abs(z * p) > r * r && std::abs(z * p) < 1.0)) continue;
                try {
                    ranked.emplace_back(std::abs(metric_value(z)), z);
                } catch (const Error&) {
                }
            }
        }
        std::sort(ranked.begin(), ranked.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t i = 0; i < std::min<std::size_t>(ranked.size(), 8); ++i) {
            seeds.push_back(ranked[i].second);
        }
    }

    std::vector<GapWitness> witnesses;
    for (cplx z : seeds) {
        bool bad = false;
        for (int it = 0; it < 80; ++it) {
            cplx f, df;
            try {
                f = metric_value(z);
                df = metric_dz(z);
            } catch (const Error&) {
                bad = true;
                break;
            }
            if (std::abs(f) < 1e-13) break;
            if (df == cplx(0.0)) {
                bad = true;
                break;
            }
            z -= f / df;
        }
        if (bad) continue;
        double zabs = std::abs(z);
        if (!(zabs > r && zabs < 1.0)) continue;
        double g_abs, k_abs;
        try {
            g_abs = std::abs(metric_value(z));
            k_abs = std::abs(kernel->eval(cvec1(z), pbar));
        } catch (const Error&) {
            continue;
        }
        if (g_abs > 1e-10 || k_abs <= 0.1 * k_scale) continue;
        bool duplicate = false;
        for (const auto& w : witnesses) {
            if (std::abs(w.z - z) < 1e-6) duplicate = true;
        }
        if (!duplicate) witnesses.push_back({z, g_abs, k_abs, k_scale});
    }
    return witnesses;
}

PoleProbeReport pole_probe(KernelPtr kernel, const CVec& p, int grid_n,
                           double collision_tol, double sep) {
    const Domain& dom = kernel->domain();
    const int n = kernel->dim();
    RepChart chart = make_chart(kernel, p, RepMode::Raw);

    std::vector<CVec> zs;
    std::vector<CVec> zetas;
    for (const CVec& z : scan_points(dom, grid_n)) {
        try {
            CVec zeta = rep_map(chart, z);
            // exclude points whose chart Jacobian is nearly singular
            CMat jac = rep_jacobian(chart, z);
            double jscale = jac.cwiseAbs().maxCoeff();
            if (std::abs(Eigen::PartialPivLU<CMat>(jac).determinant()) <
                1e-10 * std::pow(jscale, n)) {
                continue;
            }
            zs.push_back(z);
            zetas.push_back(zeta);
        } catch (const Error&) {
        }
    }

    PoleProbeReport report;
    report.samples = static_cast<int>(zs.size());

    // spatial hash of chart values at box size collision_tol
    std::map<std::pair<long, long>, std::vector<int>> boxes;
    auto boxkey = [&](const CVec& zeta) {
        // hash on the first coordinate; higher dimensions compare in full below
        return std::make_pair(static_cast<long>(std::floor(zeta(0).real() / collision_tol)),
                              static_cast<long>(std::floor(zeta(0).imag() / collision_tol)));
    };
    for (std::size_t i = 0; i < zs.size(); ++i) {
        boxes[boxkey(zetas[i])].push_back(static_cast<int>(i));
    }

    ExphOptions eopts;
    eopts.newton_tol = 1e-11;
    int certified = 0;
    for (std::size_t i = 0; i < zs.size(); ++i) {
        auto [bx, by] = boxkey(zetas[i]);
        for (long dx = -1; dx <= 1; ++dx) {
            for (long dy = -1; dy <= 1; ++dy) {
                auto it = boxes.find({bx + dx, by + dy});
                if (it == boxes.end()) continue;
                for (int j : it->second) {
                    if (j <= static_cast<int>(i)) continue;
                    if ((zetas[i] - zetas[j]).norm() >= collision_tol) continue;
                    if ((zs[i] - zs[j]).norm() <= sep) continue;
                    ++report.near_collisions;
                    if (certified >= 16) continue;
                    // polish both preimages toward the common value
                    CVec target = 0.5 * (zetas[i] + zetas[j]);
                    auto polish = [&](const CVec& start) -> std::optional<CVec> {
                        CVec z = start;
                        double best = (rep_map(chart, z) - target).norm();
                        for (int itn = 0; itn < 40 && best >= eopts.newton_tol; ++itn) {
                            try {
                                CVec f = rep_map(chart, z) - target;
                                CMat jac = rep_jacobian(chart, z);
                                CVec step = Eigen::PartialPivLU<CMat>(jac).solve(-f);
                                double t = 1.0;
                                bool acc = false;
                                for (int bt = 0; bt < 8; ++bt) {
                                    try {
                                        double rt = (rep_map(chart, z + t * step) - target).norm();
                                        if (rt < best) {
                                            z += t * step;
                                            best = rt;
                                            acc = true;
                                            break;
                                        }
                                    } catch (const Error&) {
                                    }
                                    t *= 0.5;
                                }
                                if (!acc) break;
                            } catch (const Error&) {
                                return std::nullopt;
                            }
                        }
                        if (best < 1e-9) return z;
                        return std::nullopt;
                    };
                    auto za = polish(zs[i]);
                    auto zb = polish(zs[j]);
                    if (za && zb && (*za - *zb).norm() > sep &&
                        dom.contains(*za) && dom.contains(*zb)) {
                        CollisionPair pair;
                        pair.z1 = *za;
                        pair.z2 = *zb;
                        pair.zeta = target;
                        pair.residual = std::max((rep_map(chart, *za) - target).norm(),
                                                 (rep_map(chart, *zb) - target).norm());
                        report.collisions.push_back(pair);
                        ++certified;
                    }
                }
            }
        }
    }
    report.injective_on_sample = report.collisions.empty() && report.near_collisions == 0;
    return report;
}

}  // namespace bgeo
