#include "bgeo/representative.hpp"

#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

#include "bgeo/connection.hpp"
#include "bgeo/error.hpp"

namespace bgeo {

RepChart make_chart(KernelPtr kernel, const CVec& p, RepMode mode) {
    RepChart chart;
    chart.kernel = std::move(kernel);
    chart.p = p;
    chart.pbar = p.conjugate();
    chart.mode = mode;
    chart.kernel_floor_abs =
        chart.kernel->options().kernel_floor * kernel_scale(*chart.kernel, chart.pbar);
    LogDerivatives ld =
        log_derivatives(chart.kernel->jet(p, chart.pbar), chart.kernel_floor_abs);
    chart.bracket_p = ld.grad_wbar;
    chart.metric_p = ld.metric;
    if (mode == RepMode::Raw) {
        chart.factor = Eigen::PartialPivLU<CMat>(chart.metric_p).inverse().transpose();
    } else {
        // F = conj(L)^{-1} satisfies F^T conj(F) = G(p)^{-1}, which is what
        // makes the pulled-back metric the identity at the center
        NormalizationMatrix nm = normalization_at(*chart.kernel, p);
        chart.factor = nm.sqrt_g_inv.conjugate();
    }
    return chart;
}

CVec rep_map(const RepChart& chart, const CVec& z) {
    Jet jet = chart.kernel->jet(z, chart.pbar);
    if (std::abs(jet.k) < chart.kernel_floor_abs) {
        throw NearZeroKernelError("rep_map: |K(z, pbar)| below kernel floor");
    }
    CVec bracket = jet.dwbar / jet.k;
    return chart.factor * (bracket - chart.bracket_p);
}

CMat rep_jacobian(const RepChart& chart, const CVec& z) {
    LogDerivatives ld =
        log_derivatives(chart.kernel->jet(z, chart.pbar), chart.kernel_floor_abs);
    return chart.factor * ld.metric.transpose();
}

namespace {

ExphResult exph_newton(const RepChart& chart, const CVec& zeta, const ExphOptions& opts) {
    ExphResult res;
    // initial guess from the Jacobian at p (identity in raw mode)
    CVec z = chart.p;
    {
        CMat j0 = chart.factor * chart.metric_p.transpose();
        z += Eigen::PartialPivLU<CMat>(j0).solve(zeta);
    }
    auto residual_at = [&](const CVec& at) -> std::optional<double> {
        try {
            return (rep_map(chart, at) - zeta).norm();
        } catch (const Error&) {
            return std::nullopt;
        }
    };
    auto r0 = residual_at(z);
    if (!r0) {
        z = chart.p;  // fall back to the basepoint if the guess is invalid
        r0 = residual_at(z);
        if (!r0) {
            res.z = z;
            res.residual = std::numeric_limits<double>::infinity();
            return res;
        }
    }
    double best = *r0;
    for (int it = 0; it < opts.max_iter; ++it) {
        res.iterations = it;
        if (best < opts.newton_tol) {
            res.converged = true;
            break;
        }
        CVec f = rep_map(chart, z) - zeta;
        CMat jac = rep_jacobian(chart, z);
        Eigen::PartialPivLU<CMat> lu(jac);
        double jscale = jac.cwiseAbs().maxCoeff();
        if (!(std::abs(lu.determinant()) >
              1e-14 * std::pow(jscale, chart.kernel->dim()))) {
            throw SingularMetricError("exph: chart Jacobian singular (crossed Z1)");
        }
        CVec step = lu.solve(-f);
        double t = 1.0;
        bool accepted = false;
        for (int bt = 0; bt <= opts.max_backtrack; ++bt) {
            auto rt = residual_at(z + t * step);
            if (rt && *rt < best) {
                z += t * step;
                best = *rt;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;
    }
    if (!res.converged && best < opts.newton_tol) res.converged = true;
    res.z = z;
    res.residual = best;
    return res;
}

ExphResult exph_ode(const RepChart& chart, const CVec& zeta, const ExphOptions& opts) {
    CMat j0 = chart.factor * chart.metric_p.transpose();
    CVec v0 = Eigen::PartialPivLU<CMat>(j0).solve(zeta);
    GeodesicTrace trace =
        integrate_geodesic(*chart.kernel, chart.p, chart.p, v0, 1.0, opts.ode);
    ExphResult res;
    res.z = trace.back().z;
    res.iterations = static_cast<int>(trace.samples.size());
    if (trace.terminal == Terminal::Completed) {
        try {
            res.residual = (rep_map(chart, res.z) - zeta).norm();
            res.converged = res.residual < 1e-6 * (1.0 + zeta.norm());
        } catch (const Error&) {
            res.residual = std::numeric_limits<double>::infinity();
        }
    } else {
        res.residual = std::numeric_limits<double>::infinity();
    }
    return res;
}

}  // namespace

ExphResult exph(const RepChart& chart, const CVec& zeta, ExphMethod method,
                const ExphOptions& opts) {
    return method == ExphMethod::Newton ? exph_newton(chart, zeta, opts)
                                        : exph_ode(chart, zeta, opts);
}

CVec exph_q_inverse(const Kernel& kernel, const CVec& p, const CVec& q, const CVec& z,
                    OffDiagSqrt mode) {
    const CVec pbar = p.conjugate();
    double floor_abs = kernel.options().kernel_floor * kernel_scale(kernel, pbar);
    LogDerivatives ld_q = log_derivatives(kernel.jet(q, pbar), floor_abs);
    Jet jet_z = kernel.jet(z, pbar);
    if (std::abs(jet_z.k) < floor_abs) {
        throw NearZeroKernelError("exph_q_inverse: |K(z, pbar)| below kernel floor");
    }
    CVec bracket = jet_z.dwbar / jet_z.k - ld_q.grad_wbar;
    cplx det = Eigen::PartialPivLU<CMat>(ld_q.metric).determinant();
    MetricTensor probe{ld_q.metric, det};
    check_invertible(probe, kernel.dim());
    CMat factor;
    if (mode == OffDiagSqrt::RawInverse) {
        factor = Eigen::PartialPivLU<CMat>(ld_q.metric).inverse().transpose();
    } else {
        CMat root = ld_q.metric.sqrt();
        factor = Eigen::PartialPivLU<CMat>(root).inverse().transpose();
    }
    return factor * bracket;
}

LinearityReport verify_linearity(KernelPtr kernel, const Automorphism& f, const CVec& p,
                                 int samples, std::mt19937_64& rng) {
    if (kernel->dim() != 1) throw Error("verify_linearity: one-dimensional models only");
    RepChart chart_p = make_chart(kernel, p, RepMode::Raw);
    cplx fp = f.f(p(0));
    RepChart chart_q = make_chart(kernel, cvec1(fp), RepMode::Raw);

    // sample z near p, push pairs (rep_p(z), rep_q(f(z)))
    double boundary = 1.0 - std::abs(p(0));
    if (kernel->domain().kind == DomainKind::Annulus) {
        boundary = std::min(1.0 - std::abs(p(0)), std::abs(p(0)) - kernel->domain().r);
    }
    double rho = 0.3 * boundary;
    std::vector<cplx> zetas, etas;
    int attempts = 0, failures = 0;
    while (static_cast<int>(zetas.size()) < samples) {
        if (++attempts > 20 * samples) {
            throw Error("verify_linearity: too many invalid samples");
        }
        cplx z = p(0) + random_in_disk(rng, rho);
        try {
            cplx zeta = rep_map(chart_p, cvec1(z))(0);
            cplx eta = rep_map(chart_q, cvec1(f.f(z)))(0);
            zetas.push_back(zeta);
            etas.push_back(eta);
        } catch (const Error&) {
            if (2 * ++failures > attempts && attempts > samples) {
                throw Error("verify_linearity: more than half of the samples failed");
            }
        }
    }
    auto fit = [&](bool conj_fit) {
        cplx num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < zetas.size(); ++i) {
            cplx zi = conj_fit ? std::conj(zetas[i]) : zetas[i];
            num += etas[i] * std::conj(zi);
            den += zi * std::conj(zi);
        }
        cplx L = num / den;
        double worst = 0.0;
        for (std::size_t i = 0; i < zetas.size(); ++i) {
            cplx zi = conj_fit ? std::conj(zetas[i]) : zetas[i];
            worst = std::max(worst, std::abs(etas[i] - L * zi));
        }
        return std::make_pair(L, worst);
    };
    auto [lin, lin_res] = fit(false);
    auto [conj_map, conj_res] = fit(true);
    (void)conj_map;
    LinearityReport rep;
    rep.linear_residual = lin_res;
    rep.conjugate_residual = conj_res;
    rep.fitted = CMat::Constant(1, 1, lin);
    rep.samples_used = static_cast<int>(zetas.size());
    return rep;
}

NormalCoordReport verify_normal_coordinates(KernelPtr kernel, const CVec& p,
                                            double fd_step) {
    const int n = kernel->dim();
    RepChart chart = make_chart(kernel, p, RepMode::Normalized);
    ExphOptions eopts;
    eopts.newton_tol = 1e-13;

    auto pullback = [&](const CVec& zeta) -> CMat {
        ExphResult r = exph(chart, zeta, ExphMethod::Newton, eopts);
        if (!r.converged) throw Error("verify_normal_coordinates: chart inversion failed");
        CMat jac = rep_jacobian(chart, r.z);                     // d zeta / d z
        CMat jz = Eigen::PartialPivLU<CMat>(jac).inverse();      // d z / d zeta
        CMat gd = metric_diag(*kernel, r.z).g;
        return jz.transpose() * gd * jz.conjugate();
    };

    NormalCoordReport out;
    const double h = fd_step;
    const cplx iu(0.0, 1.0);
    CMat center = pullback(CVec::Zero(n));
    out.res_identity = (center - CMat::Identity(n, n)).cwiseAbs().maxCoeff();

    std::vector<std::array<CMat, 4>> ring(n);  // pullback at h*i^m along each axis
    for (int r = 0; r < n; ++r) {
        for (int m = 0; m < 4; ++m) {
            CVec zeta = CVec::Zero(n);
            zeta(r) = h * std::pow(iu, m);
            ring[r][m] = pullback(zeta);
        }
    }

    double first = 0.0, second = 0.0;
    out.mixed.assign(n, 0.0);
    for (int r = 0; r < n; ++r) {
        CMat d_hol = CMat::Zero(n, n), d_anti = CMat::Zero(n, n), d2 = CMat::Zero(n, n),
             trace4 = CMat::Zero(n, n);
        for (int m = 0; m < 4; ++m) {
            cplx wm = std::pow(iu, m);
            d_hol += ring[r][m] / wm;
            d_anti += ring[r][m] * wm;
            d2 += ring[r][m] / (wm * wm);
            trace4 += ring[r][m];
        }
        first = std::max(first, (d_hol / (4.0 * h)).cwiseAbs().maxCoeff());
        first = std::max(first, (d_anti / (4.0 * h)).cwiseAbs().maxCoeff());
        second = std::max(second, (d2 / (4.0 * h * h)).cwiseAbs().maxCoeff());
        CMat mixed = (trace4 - 4.0 * center) / (4.0 * h * h);
        out.mixed[r] = mixed(r, r).real();
    }
    // pure cross derivatives for n > 1
    for (int r = 0; r < n; ++r) {
        for (int s = r + 1; s < n; ++s) {
            CMat acc = CMat::Zero(n, n);
            for (int m = 0; m < 4; ++m) {
                for (int j = 0; j < 4; ++j) {
                    CVec zeta = CVec::Zero(n);
                    zeta(r) = h * std::pow(iu, m);
                    zeta(s) = h * std::pow(iu, j);
                    acc += pullback(zeta) / (std::pow(iu, m) * std::pow(iu, j));
                }
            }
            second = std::max(second, (acc / (16.0 * h * h)).cwiseAbs().maxCoeff());
        }
    }
    out.res_first = first;
    out.res_second_pure = second;
    return out;
}

}  // namespace bgeo
