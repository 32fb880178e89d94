#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bgeo/connection.hpp"
#include "bgeo/error.hpp"
#include "bgeo/representative.hpp"
#include "bgeo/zeros.hpp"

using namespace bgeo;

TEST_CASE("disk geodesics from the origin are straight lines") {
    KernelPtr disk = make_kernel(Domain::disk());
    CVec p = cvec1(cplx(0.0));
    CVec v0 = cvec1(cplx(0.4, 0.25));
    GeodesicTrace trace = integrate_geodesic(*disk, p, p, v0, 1.0);
    REQUIRE(trace.terminal == Terminal::Completed);
    for (const auto& s : trace.samples) {
        CHECK(std::abs(s.z(0) - s.t * v0(0)) < 1e-12);
        CHECK(std::abs(s.v(0) - v0(0)) < 1e-12);
    }
}

TEST_CASE("rep straightens geodesics") {
    std::mt19937_64 rng(3);
    for (const Domain& dom : {Domain::disk(), Domain::annulus(0.3), Domain::ball(2)}) {
        KernelPtr k = make_kernel(dom);
        for (int i = 0; i < 5; ++i) {
            CVec p = dom.random_point(rng, 0.2);
            RepChart chart = make_chart(k, p, RepMode::Raw);
            CVec zt = p + 0.2 * (dom.random_point(rng, 0.2) - p);
            CVec zeta = rep_map(chart, zt);
            GeodesicTrace trace = integrate_geodesic(*k, p, p, zeta, 1.0);
            REQUIRE(trace.terminal == Terminal::Completed);
            for (const auto& s : trace.samples) {
                CHECK((rep_map(chart, s.z) - s.t * zeta).norm() <
                      1e-7 * (1.0 + zeta.norm()));
            }
            // endpoint is the chart inverse of zeta
            CHECK((trace.back().z - zt).norm() < 1e-7);
        }
    }
}

TEST_CASE("affine reparametrization") {
    // doubling the velocity and halving the time lands at the same point
    KernelPtr ann = make_kernel(Domain::annulus(0.3));
    CVec p = cvec1(cplx(0.6, 0.1));
    CVec v = cvec1(cplx(0.12, -0.08));
    GeodesicTrace full = integrate_geodesic(*ann, p, p, v, 1.0);
    GeodesicTrace half = integrate_geodesic(*ann, p, p, 2.0 * v, 0.5);
    REQUIRE(full.terminal == Terminal::Completed);
    REQUIRE(half.terminal == Terminal::Completed);
    CHECK((full.back().z - half.back().z).norm() < 1e-9);
}

TEST_CASE("trace samples satisfy the ODE locally") {
    KernelPtr disk = make_kernel(Domain::disk());
    CVec p = cvec1(cplx(0.5, 0.0));
    GeodesicTrace trace = integrate_geodesic(*disk, p, p, cvec1(cplx(0.3, 0.2)), 1.0);
    REQUIRE(trace.terminal == Terminal::Completed);
    REQUIRE(trace.samples.size() >= 3);
    for (std::size_t i = 1; i + 1 < trace.samples.size(); ++i) {
        const auto& s = trace.samples[i];
        // velocity equals the Hermite derivative of the position track
        GeodesicSample mid = interpolate(trace, s.t);
        CHECK((mid.z - s.z).norm() < 1e-12);
        // acceleration from the ODE matches a finite difference of v
        double dt = 1e-6;
        if (s.t - dt <= trace.samples.front().t || s.t + dt >= trace.back().t) continue;
        CVec acc_fd = (interpolate(trace, s.t + dt).v - interpolate(trace, s.t - dt).v) /
                      (2.0 * dt);
        ChristoffelTensor c = christoffel_at(*disk, s.z, cvec1(cplx(0.5)));
        cplx acc_ode = -c.gamma[0](0, 0) * s.v(0) * s.v(0);
        CHECK(std::abs(acc_fd(0) - acc_ode) < 1e-4 * std::max(1.0, std::abs(acc_ode)));
    }
}

TEST_CASE("annulus geodesic aimed at a kernel zero stops at the variety") {
    double r = 0.3;
    KernelPtr ann = make_kernel(Domain::annulus(r));
    AnnulusRoots roots = annulus_roots(r);
    double p = 0.6;
    cplx q = roots.lambda2 / p;  // kernel zero inside A for this p
    REQUIRE(std::abs(q) > r);
    REQUIRE(std::abs(q) < 1.0);
    CVec pv = cvec1(cplx(p, 0.0));
    // rep_p has a pole at the kernel zero, so the chart ray along the pole
    // direction drives z(t) into the zero while staying near it; the |K|
    // monitor must stop the trace
    RepChart chart = make_chart(ann, pv, RepMode::Raw);
    cplx dir = (cplx(p, 0.0) - q) / std::abs(cplx(p, 0.0) - q);
    CVec q0 = cvec1(q + 1e-3 * dir);
    cplx w1 = rep_map(chart, q0)(0);
    cplx w2 = rep_map(chart, cvec1(q + 0.5e-3 * dir))(0);
    CVec v_chart = cvec1((w2 - w1) * 1e6);
    CVec v0 = Eigen::PartialPivLU<CMat>(rep_jacobian(chart, q0)).solve(v_chart);
    GeodesicTrace trace = integrate_geodesic(*ann, pv, q0, v0, 1.0);
    CHECK(trace.terminal == Terminal::HitVariety);
    // the stop happens close to the zero locus: |K(z_end, pbar)| is tiny
    double kval = std::abs(ann->eval(cvec1(trace.back().z(0)), cvec1(cplx(p))));
    double kscale = std::abs(ann->eval(cvec1(cplx(p)), cvec1(cplx(p))));
    CHECK(kval < 1e-6 * kscale);
    CHECK(std::abs(trace.back().z(0) - q) < 1e-4);
}

TEST_CASE("geodesic leaving the domain is reported") {
    KernelPtr disk = make_kernel(Domain::disk());
    CVec p = cvec1(cplx(0.0));
    GeodesicTrace trace = integrate_geodesic(*disk, p, p, cvec1(cplx(2.0, 0.0)), 1.0);
    CHECK(trace.terminal == Terminal::LeftDomain);
    CHECK(std::abs(trace.back().z(0)) <= 1.0 + 1e-9);
    CHECK(std::abs(trace.back().z(0)) > 0.99);
}

TEST_CASE("straight lines map to geodesics (offset lines)") {
    KernelPtr disk = make_kernel(Domain::disk());
    CVec p = cvec1(cplx(0.3, -0.1));
    double through0 =
        verify_straight_lines(disk, p, cvec1(cplx(0.0)), cvec1(cplx(0.25, 0.2)), 9);
    CHECK(through0 < 1e-8);
    double offset = verify_straight_lines(disk, p, cvec1(cplx(0.12, -0.04)),
                                          cvec1(cplx(-0.1, 0.18)), 9);
    CHECK(offset < 1e-7);
}

TEST_CASE("naturality under automorphisms") {
    std::mt19937_64 rng(9);
    KernelPtr disk = make_kernel(Domain::disk());
    SUBCASE("identity has residual at integrator level") {
        Automorphism id = disk_mobius(cplx(0.0), 0.0);
        double res = verify_naturality(disk, id, cvec1(cplx(0.2, 0.1)),
                                       cvec1(cplx(0.2, 0.1)), cvec1(cplx(0.3, 0.0)), 1.0);
        CHECK(res < 1e-9);
    }
    SUBCASE("mobius") {
        for (int i = 0; i < 4; ++i) {
            Automorphism f = disk_mobius(random_in_disk(rng, 0.5),
                                         std::uniform_real_distribution<double>(0, 6.28)(rng));
            double res = verify_naturality(disk, f, cvec1(cplx(0.25, 0.0)),
                                           cvec1(cplx(0.25, 0.0)), cvec1(cplx(0.3, 0.1)), 1.0);
            CHECK(res < 1e-7);
        }
    }
    SUBCASE("rotation pushes the geodesic pointwise") {
        double theta = 1.3;
        Automorphism rot = disk_mobius(cplx(0.0), theta);
        CVec p = cvec1(cplx(0.3, 0.05));
        CVec v = cvec1(cplx(0.2, -0.1));
        GeodesicTrace base = integrate_geodesic(*disk, p, p, v, 1.0);
        cplx phase = std::polar(1.0, theta);
        GeodesicTrace pushed = integrate_geodesic(*disk, cvec1(phase * p(0)),
                                                  cvec1(phase * p(0)), cvec1(phase * v(0)),
                                                  1.0);
        REQUIRE(base.terminal == Terminal::Completed);
        REQUIRE(pushed.terminal == Terminal::Completed);
        for (double t : {0.25, 0.5, 0.75, 1.0}) {
            CHECK(std::abs(phase * interpolate(base, t).z(0) -
                           interpolate(pushed, t).z(0)) < 1e-9);
        }
    }
}

TEST_CASE("intrinsic delta basics") {
    KernelPtr disk = make_kernel(Domain::disk());
    CVec p = cvec1(cplx(0.0));
    CVec x = cvec1(cplx(0.3, 0.2)), y = cvec1(cplx(-0.1, 0.4));
    // bracket at p = 0 is 2z, so delta = |2x - 2y|
    CHECK(intrinsic_delta(*disk, p, x, y) ==
          doctest::Approx(std::abs(2.0 * x(0) - 2.0 * y(0))).epsilon(1e-12));
    CHECK(intrinsic_delta(*disk, p, x, x) == 0.0);
    CHECK(intrinsic_delta(*disk, p, x, y) ==
          doctest::Approx(intrinsic_delta(*disk, p, y, x)));
}

TEST_CASE("grid distance approximates the flat image metric") {
    KernelPtr disk = make_kernel(Domain::disk());
    CVec p = cvec1(cplx(0.0));
    CVec x = cvec1(cplx(-0.4, 0.1)), y = cvec1(cplx(0.35, -0.2));
    double delta = intrinsic_delta(*disk, p, x, y);
    DistanceResult d24 = intrinsic_distance(*disk, p, x, y, 24);
    DistanceResult d48 = intrinsic_distance(*disk, p, x, y, 48);
    REQUIRE(d24.reachable);
    REQUIRE(d48.reachable);
    CHECK(d24.d >= delta - 1e-12);  // one-segment bound
    CHECK(d48.d <= d24.d + 1e-12);  // nested refinement is monotone
    CHECK(std::abs(d48.d - delta) / delta < 0.05);
}

TEST_CASE("distance endpoint outside admissible set raises") {
    double r = 0.3;
    KernelPtr ann = make_kernel(Domain::annulus(r));
    AnnulusRoots roots = annulus_roots(r);
    CVec p = cvec1(cplx(0.6, 0.0));
    CVec q = cvec1(roots.lambda2 / 0.6);  // on Z0 of the basepoint
    CHECK_THROWS_AS(intrinsic_distance(*ann, p, q, p, 16), Error);
}
