#include "bgeo/connection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <unordered_map>

#include "bgeo/error.hpp"
#include "bgeo/representative.hpp"

namespace bgeo {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = 35.0 / 384.0 - 5179.0 / 57600.0, e3 = 500.0 / 1113.0 - 7571.0 / 16695.0,
                 e4 = 125.0 / 192.0 - 393.0 / 640.0,
                 e5 = -2187.0 / 6784.0 + 92097.0 / 339200.0, e6 = 11.0 / 84.0 - 187.0 / 2100.0,
                 e7 = -1.0 / 40.0;

struct Monitor {
    const Kernel& kernel;
    CVec pbar;
    double k_scale;
    double g_scale;

    // min(|K(z,pbar)|/Ks, |det G(z,pbar)|/Gs); nullopt outside the domain or
    // where the kernel refuses to evaluate.
    std::optional<double> operator()(const CVec& z) const {
        if (!kernel.domain().contains(z)) return std::nullopt;
        try {
            Jet jet = kernel.jet(z, pbar);
            double mk = std::abs(jet.k) / k_scale;
            LogDerivatives ld = log_derivatives(jet, 0.0);
            double md =
                std::abs(Eigen::PartialPivLU<CMat>(ld.metric).determinant()) / g_scale;
            return std::min(mk, md);
        } catch (const Error&) {
            return std::nullopt;
        }
    }
};

}  // namespace

GeodesicSample interpolate(const GeodesicTrace& trace, double t) {
    const auto& s = trace.samples;
    if (s.empty()) throw Error("interpolate: empty trace");
    if (t <= s.front().t) return s.front();
    if (t >= s.back().t) return s.back();
    std::size_t hi = 1;
    while (s[hi].t < t) ++hi;
    const auto& A = s[hi - 1];
    const auto& B = s[hi];
    double h = B.t - A.t;
    double u = (t - A.t) / h;
    double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u),
           h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
    double d00 = 6 * u * (u - 1) / h, d10 = (1 - u) * (1 - 3 * u),
           d01 = -6 * u * (u - 1) / h, d11 = u * (3 * u - 2);
    GeodesicSample out;
    out.t = t;
    out.z = h00 * A.z + h10 * h * A.v + h01 * B.z + h11 * h * B.v;
    out.v = d00 * A.z + d10 * A.v + d01 * B.z + d11 * B.v;
    return out;
}

GeodesicTrace integrate_geodesic(const Kernel& kernel, const CVec& p, const CVec& q0,
                                 const CVec& v0, double t_max, const OdeOptions& opts) {
    const int n = kernel.dim();
    const CVec pbar = p.conjugate();
    Monitor monitor{kernel, pbar,
                    std::max(kernel_scale(kernel, pbar),
                             std::numeric_limits<double>::min()),
                    1.0};
    {
        LogDerivatives ld = log_derivatives(kernel.jet(p, pbar), 0.0);
        monitor.g_scale =
            std::max(std::abs(Eigen::PartialPivLU<CMat>(ld.metric).determinant()),
                     std::numeric_limits<double>::min());
    }

    auto rhs = [&](const CVec& y) -> CVec {
        CVec z = y.head(n), v = y.tail(n);
        ChristoffelTensor c = christoffel_at(kernel, z, pbar);
        CVec out(2 * n);
        out.head(n) = v;
        for (int j = 0; j < n; ++j) {
            cplx acc = 0.0;
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) acc += c.gamma[j](k, l) * v(k) * v(l);
            out(n + j) = -acc;
        }
        return out;
    };

    GeodesicTrace trace;
    CVec y(2 * n);
    y.head(n) = q0;
    y.tail(n) = v0;
    trace.samples.push_back({0.0, q0, v0});

    auto m0 = monitor(q0);
    if (!m0 || *m0 < opts.variety_tol) {
        throw Error("integrate_geodesic: start point outside the admissible set");
    }

    CVec k1 = rhs(y);
    double t = 0.0;
    double h = std::min(t_max / 64.0, 1e-2 / (1.0 + v0.norm()));

    auto locate_event = [&](const GeodesicSample& A, const GeodesicSample& B) {
        // bisection on the Hermite interpolant for the first invalid point
        GeodesicTrace seg;
        seg.samples = {A, B};
        double lo = A.t, hi = B.t;
        bool hit_variety = static_cast<bool>(monitor(B.z));
        for (int it = 0; it < 60 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
            double mid = 0.5 * (lo + hi);
            GeodesicSample s = interpolate(seg, mid);
            auto m = monitor(s.z);
            if (m && *m >= opts.variety_tol) {
                lo = mid;
            } else {
                hi = mid;
                hit_variety = static_cast<bool>(m);  // monitor defined => variety event
            }
        }
        GeodesicSample ev = interpolate(seg, lo);
        return std::make_pair(ev, hit_variety ? Terminal::HitVariety : Terminal::LeftDomain);
    };

    for (int step = 0; step < opts.max_steps; ++step) {
        if (t >= t_max) {
            trace.terminal = Terminal::Completed;
            trace.t_end = t;
            return trace;
        }
        h = std::min(h, t_max - t);
        bool stage_failed = false;
        CVec k2, k3, k4, k5, k6, k7, y5;
        try {
            k2 = rhs(y + h * (a21 * k1));
            k3 = rhs(y + h * (a31 * k1 + a32 * k2));
            k4 = rhs(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
            k5 = rhs(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
            k6 = rhs(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            k7 = rhs(y5);
        } catch (const Error&) {
            stage_failed = true;
        }
        if (!stage_failed) {
            CVec err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            double errnorm = 0.0;
            for (int i = 0; i < 2 * n; ++i) {
                double sc = opts.atol +
                            opts.rtol * std::max(std::abs(y(i)), std::abs(y5(i)));
                errnorm = std::max(errnorm, std::abs(err(i)) / sc);
            }
            if (errnorm <= 1.0) {
                GeodesicSample prev = trace.samples.back();
                t += h;
                y = y5;
                k1 = k7;
                GeodesicSample cur{t, y.head(n), y.tail(n)};
                auto m = monitor(cur.z);
                if (!m || *m < opts.variety_tol) {
                    auto [ev, term] = locate_event(prev, cur);
                    trace.samples.push_back(ev);
                    trace.terminal = term;
                    trace.t_end = ev.t;
                    return trace;
                }
                trace.samples.push_back(cur);
                double grow = errnorm > 0.0 ? 0.9 * std::pow(errnorm, -0.2) : 5.0;
                h *= std::clamp(grow, 0.2, 5.0);
                continue;
            }
            h *= std::clamp(0.9 * std::pow(errnorm, -0.2), 0.1, 0.9);
        } else {
            h *= 0.5;
        }
        if (h < opts.h_min) {
            trace.terminal = Terminal::StepUnderflow;
            trace.t_end = t;
            return trace;
        }
    }
    trace.terminal = Terminal::StepUnderflow;
    trace.t_end = t;
    return trace;
}

double verify_straight_lines(KernelPtr kernel, const CVec& p, const CVec& zeta0,
                             const CVec& dir, int samples, const OdeOptions& opts) {
    RepChart chart = make_chart(kernel, p, RepMode::Raw);
    ExphOptions eopts;
    eopts.newton_tol = 1e-12;
    std::vector<CVec> pts(samples);
    for (int i = 0; i < samples; ++i) {
        CVec zeta = zeta0 + (static_cast<double>(i) / (samples - 1)) * dir;
        ExphResult r = exph(chart, zeta, ExphMethod::Newton, eopts);
        if (!r.converged) throw Error("verify_straight_lines: left the computed chart");
        pts[i] = r.z;
    }
    // initial velocity of the curve s -> exph(zeta0 + s dir)
    CMat jac = rep_jacobian(chart, pts[0]);
    CVec v0 = Eigen::PartialPivLU<CMat>(jac).solve(dir);
    GeodesicTrace trace = integrate_geodesic(*kernel, p, pts[0], v0, 1.0, opts);
    if (trace.terminal != Terminal::Completed) {
        return std::numeric_limits<double>::infinity();
    }
    double gap = 0.0;
    for (int i = 0; i < samples; ++i) {
        double s = static_cast<double>(i) / (samples - 1);
        gap = std::max(gap, (interpolate(trace, s).z - pts[i]).norm());
    }
    return gap;
}

double verify_naturality(KernelPtr kernel, const Automorphism& f, const CVec& p,
                         const CVec& q0, const CVec& v0, double t_max,
                         const OdeOptions& opts) {
    if (kernel->dim() != 1) throw Error("verify_naturality: one-dimensional models only");
    GeodesicTrace trace = integrate_geodesic(*kernel, p, q0, v0, t_max, opts);
    const CVec pbar = p.conjugate();
    const CVec qbar = cvec1(std::conj(f.f(p(0))));
    double worst = 0.0;
    for (const auto& s : trace.samples) {
        cplx z = s.z(0), v = s.v(0);
        cplx gamma_p = christoffel_at(*kernel, s.z, pbar).gamma[0](0, 0);
        cplx zdd = -gamma_p * v * v;
        cplx y = f.f(z), yd = f.df(z) * v;
        cplx ydd = f.d2f(z) * v * v + f.df(z) * zdd;
        cplx gamma_q = christoffel_at(*kernel, cvec1(y), qbar).gamma[0](0, 0);
        worst = std::max(worst, std::abs(ydd + gamma_q * yd * yd));
    }
    return worst;
}

double intrinsic_delta(const Kernel& kernel, const CVec& p, const CVec& x, const CVec& y) {
    const CVec pbar = p.conjugate();
    auto [gx, hx] = kernel_derivatives(kernel, x, pbar);
    auto [gy, hy] = kernel_derivatives(kernel, y, pbar);
    (void)hx;
    (void)hy;
    return (gx - gy).norm();
}

DistanceResult intrinsic_distance(const Kernel& kernel, const CVec& p, const CVec& x,
                                  const CVec& y, int resolution,
                                  const DistanceOptions& opts) {
    if (kernel.dim() != 1) {
        throw Error("intrinsic_distance: grid graph implemented for one-dimensional domains");
    }
    const Domain& dom = kernel.domain();
    const CVec pbar = p.conjugate();
    const double k_scale = kernel_scale(kernel, pbar);
    double g_scale;
    {
        LogDerivatives ld = log_derivatives(kernel.jet(p, pbar), 0.0);
        g_scale = std::abs(ld.metric(0, 0));
    }

    std::vector<cplx> nodes;
    const int N = resolution;
    if (dom.kind == DomainKind::Annulus) {
        int M = 4 * N;
        for (int i = 1; i < N; ++i) {
            double rho = dom.r + (1.0 - dom.r) * i / N;
            for (int j = 0; j < M; ++j) {
                nodes.push_back(std::polar(rho, 2.0 * kPi * j / M));
            }
        }
    } else {
        for (int i = -N + 1; i < N; ++i) {
            for (int j = -N + 1; j < N; ++j) {
                cplx z(static_cast<double>(i) / N, static_cast<double>(j) / N);
                if (std::abs(z) <= 1.0 - 0.5 / N) nodes.push_back(z);
            }
        }
    }
    nodes.push_back(x(0));
    nodes.push_back(y(0));

    // brackets at admissible nodes
    std::vector<cplx> bracket(nodes.size());
    std::vector<char> ok(nodes.size(), 0);
    parallel_for(nodes.size(), [&](std::size_t i) {
        CVec z = cvec1(nodes[i]);
        if (!dom.contains(z)) return;
        try {
            Jet jet = kernel.jet(z, pbar);
            if (std::abs(jet.k) / k_scale < opts.variety_tol) return;
            LogDerivatives ld = log_derivatives(jet, 0.0);
            if (std::abs(ld.metric(0, 0)) / g_scale < opts.variety_tol) return;
            bracket[i] = ld.grad_wbar(0);
            ok[i] = 1;
        } catch (const Error&) {
        }
    });
    if (!ok[nodes.size() - 2] || !ok[nodes.size() - 1]) {
        throw Error("intrinsic_distance: endpoint outside the admissible set");
    }

    // cell hash for radius queries
    const double cell = opts.chart_radius;
    auto key = [&](cplx z) {
        long cx = static_cast<long>(std::floor(z.real() / cell));
        long cy = static_cast<long>(std::floor(z.imag() / cell));
        return cx * 1000003L + cy;
    };
    std::unordered_map<long, std::vector<int>> grid_hash;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (ok[i]) grid_hash[key(nodes[i])].push_back(static_cast<int>(i));
    }

    const int src = static_cast<int>(nodes.size()) - 2;
    const int dst = static_cast<int>(nodes.size()) - 1;
    std::vector<double> dist(nodes.size(), std::numeric_limits<double>::infinity());
    dist[src] = 0.0;
    using QItem = std::pair<double, int>;
    std::priority_queue<QItem, std::vector<QItem>, std::greater<>> pq;
    pq.push({0.0, src});
    long edges = 0;
    while (!pq.empty()) {
        auto [d, i] = pq.top();
        pq.pop();
        if (d > dist[i]) continue;
        if (i == dst) break;
        cplx zi = nodes[i];
        long cx = static_cast<long>(std::floor(zi.real() / cell));
        long cy = static_cast<long>(std::floor(zi.imag() / cell));
        for (long dx = -1; dx <= 1; ++dx) {
            for (long dy = -1; dy <= 1; ++dy) {
                auto it = grid_hash.find((cx + dx) * 1000003L + (cy + dy));
                if (it == grid_hash.end()) continue;
                for (int j : it->second) {
                    if (j == i) continue;
                    if (std::abs(nodes[j] - zi) > opts.chart_radius) continue;
                    ++edges;
                    double w = std::abs(bracket[i] - bracket[j]);
                    if (dist[i] + w < dist[j]) {
                        dist[j] = dist[i] + w;
                        pq.push({dist[j], j});
                    }
                }
            }
        }
    }

    DistanceResult out;
    out.nodes = static_cast<int>(std::count(ok.begin(), ok.end(), 1));
    out.edges = edges;
    out.reachable = std::isfinite(dist[dst]);
    out.d = dist[dst];
    return out;
}

}  // namespace bgeo
