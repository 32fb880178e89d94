#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bgeo/error.hpp"
#include "bgeo/kernel.hpp"
#include "bgeo/zeros.hpp"

using namespace bgeo;

namespace {

CVec vec2(cplx a, cplx b) {
    CVec v(2);
    v << a, b;
    return v;
}

}  // namespace

TEST_CASE("catalog values at the origin") {
    KernelPtr disk = make_kernel(Domain::disk());
    CHECK(disk->eval(cvec1(0.0), cvec1(0.0)).real() == doctest::Approx(1.0 / kPi));

    KernelPtr ball2 = make_kernel(Domain::ball(2));
    CHECK(ball2->eval(CVec::Zero(2), CVec::Zero(2)).real() ==
          doctest::Approx(2.0 / (kPi * kPi)));

    KernelPtr poly2 = make_kernel(Domain::polydisc(2));
    CHECK(poly2->eval(CVec::Zero(2), CVec::Zero(2)).real() ==
          doctest::Approx(1.0 / (kPi * kPi)));
}

TEST_CASE("disk closed form off the diagonal") {
    KernelPtr disk = make_kernel(Domain::disk());
    cplx z(0.3, -0.2), wbar(0.5, 0.4);
    cplx expect = 1.0 / (kPi * std::pow(1.0 - z * wbar, 2));
    CHECK(std::abs(disk->eval(cvec1(z), cvec1(wbar)) - expect) < 1e-15);
}

TEST_CASE("diagonal positivity on a grid") {
    for (const Domain& dom :
         {Domain::disk(), Domain::annulus(0.3), Domain::ball(2)}) {
        KernelPtr k = make_kernel(dom);
        std::mt19937_64 rng(5);
        for (int i = 0; i < 200; ++i) {
            CVec z = dom.random_point(rng, 0.02);
            CHECK(k->diagonal(z) > 0.0);
        }
    }
}

TEST_CASE("Hermitian symmetry K(z,wbar) = conj K(w,zbar)") {
    std::mt19937_64 rng(17);
    for (const Domain& dom : {Domain::disk(), Domain::annulus(0.2), Domain::ball(2),
                              Domain::product({Domain::annulus(0.2), Domain::disk()})}) {
        KernelPtr k = make_kernel(dom);
        for (int i = 0; i < 100; ++i) {
            CVec z = dom.random_point(rng, 0.03);
            CVec w = dom.random_point(rng, 0.03);
            cplx a = k->eval(z, w.conjugate());
            cplx b = k->eval(w, z.conjugate());
            CHECK(std::abs(a - std::conj(b)) < 1e-12 * std::abs(a));
        }
    }
}

TEST_CASE("product rule is exact by construction") {
    Domain prod = Domain::product({Domain::annulus(0.3), Domain::disk()});
    KernelPtr kp = make_kernel(prod);
    KernelPtr ka = make_kernel(Domain::annulus(0.3));
    KernelPtr kd = make_kernel(Domain::disk());
    std::mt19937_64 rng(23);
    for (int i = 0; i < 50; ++i) {
        CVec z = prod.random_point(rng, 0.05);
        CVec wbar = prod.random_point(rng, 0.05).conjugate();
        cplx lhs = kp->eval(z, wbar);
        cplx rhs = ka->eval(z.segment(0, 1), wbar.segment(0, 1)) *
                   kd->eval(z.segment(1, 1), wbar.segment(1, 1));
        CHECK(lhs == rhs);  // same arithmetic path, bit-identical
    }
}

TEST_CASE("annulus dual representation") {
    std::mt19937_64 rng(29);
    for (double r : {0.05, 0.1, 0.3, 0.5}) {
        AnnulusRoots roots = annulus_roots(r);
        int got = 0;
        while (got < 100) {
            cplx lam = std::polar(
                std::uniform_real_distribution<double>(r * r * 1.05, 0.97)(rng),
                std::uniform_real_distribution<double>(0.0, 2 * kPi)(rng));
            if (std::abs(lam - cplx(roots.lambda1)) < 0.02) continue;
            if (std::abs(lam - cplx(roots.lambda2)) < 0.02) continue;
            cplx a = annulus_kernel_weierstrass(r, lam);
            cplx b = annulus_kernel_laurent(r, lam);
            CHECK(std::abs(a - b) < 1e-8 * std::abs(a));
            ++got;
        }
    }
}

TEST_CASE("annulus kernel is single-valued across the branch cut") {
    // the principal log jumps by 2 pi i = 2 omega2 across the negative axis,
    // a lattice period, so both sides must agree
    KernelPtr k = make_kernel(Domain::annulus(0.1));
    for (double rho : {0.2, 0.5, 0.9}) {
        cplx up = k->eval(cvec1(cplx(-rho, 1e-14)), cvec1(cplx(1.0)));
        cplx dn = k->eval(cvec1(cplx(-rho, -1e-14)), cvec1(cplx(1.0)));
        CHECK(std::abs(up - dn) < 1e-10 * std::abs(up));
    }
}

TEST_CASE("annulus membership errors") {
    KernelPtr k = make_kernel(Domain::annulus(0.3));
    CHECK_THROWS_AS(k->eval(cvec1(cplx(0.05, 0.0)), cvec1(cplx(1.0))), MembershipError);
    CHECK_THROWS_AS(k->eval(cvec1(cplx(1.5, 0.0)), cvec1(cplx(1.0))), MembershipError);
    CHECK_THROWS_AS(k->eval(cvec1(cplx(0.5)), vec2(0.5, 0.5)), MembershipError);
}

TEST_CASE("finite difference jets agree with closed forms") {
    std::mt19937_64 rng(31);
    for (const Domain& dom : {Domain::disk(), Domain::annulus(0.3), Domain::ball(2)}) {
        KernelOptions fd_opts;
        fd_opts.mode = DerivMode::FiniteDifference;
        KernelPtr closed = make_kernel(dom);
        KernelPtr fd = make_kernel(dom, fd_opts);
        for (int i = 0; i < 20; ++i) {
            CVec z = dom.random_point(rng, 0.1);
            CVec wbar = dom.random_point(rng, 0.1).conjugate();
            auto [grad_c, hess_c] = kernel_derivatives(*closed, z, wbar);
            auto [grad_f, hess_f] = kernel_derivatives(*fd, z, wbar);
            double gscale = std::max(1.0, grad_c.norm());
            double hscale = std::max(1.0, hess_c.cwiseAbs().maxCoeff());
            CHECK((grad_c - grad_f).norm() < 1e-7 * gscale);
            CHECK((hess_c - hess_f).cwiseAbs().maxCoeff() < 1e-7 * hscale);
        }
    }
}

TEST_CASE("kernel derivative oracle values on the disk") {
    KernelPtr disk = make_kernel(Domain::disk());
    // d/dwbar log K = 2z/(1-z wbar): at z=0.3, wbar=0 -> 0.6
    auto [grad, hess] = kernel_derivatives(*disk, cvec1(cplx(0.3)), cvec1(cplx(0.0)));
    CHECK(std::abs(grad(0) - cplx(0.6)) < 1e-14);
    // d2 log K / dz dwbar = 2/(1-z wbar)^2: at (0,0) -> 2
    auto [grad0, hess0] = kernel_derivatives(*disk, cvec1(cplx(0.0)), cvec1(cplx(0.0)));
    CHECK(std::abs(hess0(0, 0) - cplx(2.0)) < 1e-14);
    CHECK(std::abs(grad0(0)) < 1e-15);
    (void)hess;
}

TEST_CASE("near-zero kernel raises") {
    KernelPtr ann = make_kernel(Domain::annulus(0.1));
    AnnulusRoots roots = annulus_roots(0.1);
    double p = 0.5;
    cplx zero = roots.lambda2 / p;
    CHECK_THROWS_AS(kernel_derivatives(*ann, cvec1(zero), cvec1(cplx(p))),
                    NearZeroKernelError);
}

TEST_CASE("transformation formula") {
    std::mt19937_64 rng(37);
    KernelPtr disk = make_kernel(Domain::disk());
    SUBCASE("identity map") {
        Automorphism id = disk_mobius(cplx(0.0), 0.0);
        CHECK(transformation_check(id, *disk, *disk, cplx(0.4, 0.1), cplx(0.2, -0.3)) <
              1e-14);
    }
    SUBCASE("disk Mobius at 20 random pairs") {
        for (int i = 0; i < 20; ++i) {
            Automorphism f = disk_mobius(random_in_disk(rng, 0.7),
                                         std::uniform_real_distribution<double>(0, 6.28)(rng));
            cplx z = random_in_disk(rng, 0.9);
            cplx wbar = std::conj(random_in_disk(rng, 0.9));
            CHECK(transformation_check(f, *disk, *disk, z, wbar) < 1e-10);
        }
    }
    SUBCASE("annulus rotation and inversion") {
        double r = 0.3;
        KernelPtr ann = make_kernel(Domain::annulus(r));
        Automorphism rot = annulus_rotation(r, 1.1);
        Automorphism inv = annulus_inversion(r);
        for (int i = 0; i < 20; ++i) {
            cplx z = std::polar(std::uniform_real_distribution<double>(r + 0.05, 0.95)(rng),
                                std::uniform_real_distribution<double>(0.0, 6.28)(rng));
            cplx wbar = std::conj(
                std::polar(std::uniform_real_distribution<double>(r + 0.05, 0.95)(rng),
                           std::uniform_real_distribution<double>(0.0, 6.28)(rng)));
            CHECK(transformation_check(rot, *ann, *ann, z, wbar) < 1e-10);
            CHECK(transformation_check(inv, *ann, *ann, z, wbar) < 1e-9);
        }
    }
}
