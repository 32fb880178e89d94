#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bgeo/error.hpp"
#include "bgeo/gram.hpp"
#include "bgeo/kernel.hpp"

using namespace bgeo;

TEST_CASE("degree cap 0 keeps the constant term only") {
    GramKernel gk = build_gram_kernel(Domain::disk(), 0, 24);
    CHECK(gk.basis_size() == 1);
    // K = |phi_0|^2 with phi_0 = 1/sqrt(pi)
    CHECK(gk.diagonal(cvec1(cplx(0.3, 0.2))) == doctest::Approx(1.0 / kPi).epsilon(1e-12));
}

TEST_CASE("disk convergence to the closed form") {
    KernelPtr closed = make_kernel(Domain::disk());
    std::vector<double> errs;
    for (int cap : {5, 10, 20, 30}) {
        GramKernel gk = build_gram_kernel(Domain::disk(), cap, 48);
        double worst = 0.0;
        for (int i = -7; i <= 7; ++i) {
            for (int j = -7; j <= 7; ++j) {
                cplx z(0.1 * i, 0.1 * j);
                if (std::abs(z) > 0.7) continue;
                double e = std::abs(gk.diagonal(cvec1(z)) - closed->diagonal(cvec1(z))) /
                           closed->diagonal(cvec1(z));
                worst = std::max(worst, e);
            }
        }
        errs.push_back(worst);
    }
    CHECK(errs[3] < 1e-6);
    CHECK(errs[0] > errs[1]);
    CHECK(errs[1] > errs[2]);
    CHECK(errs[2] > errs[3]);
}

TEST_CASE("gram kernel reproduces polarized values") {
    KernelPtr closed = make_kernel(Domain::disk());
    GramKernel gk = build_gram_kernel(Domain::disk(), 30, 48);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        cplx z = random_in_disk(rng, 0.6);
        cplx wbar = std::conj(random_in_disk(rng, 0.6));
        cplx approx = gk.eval(cvec1(z), cvec1(wbar));
        cplx exact = closed->eval(cvec1(z), cvec1(wbar));
        CHECK(std::abs(approx - exact) < 1e-6 * std::abs(exact));
    }
}

TEST_CASE("diagonal of the gram kernel is a sum of squares") {
    GramKernel gk = build_gram_kernel(Domain::annulus(0.4), 8, 32);
    std::mt19937_64 rng(9);
    for (int i = 0; i < 50; ++i) {
        CVec z = Domain::annulus(0.4).random_point(rng, 0.02);
        CHECK(gk.diagonal(z) >= 0.0);
    }
}

TEST_CASE("annulus gram matches the wp closed form") {
    double r = 0.5;
    KernelPtr ann = make_kernel(Domain::annulus(r));
    // the Laurent tail at |z| = 0.7 decays like (r^2/|z|^2)^m: a few 1e-4 at
    // cap 15, ~1e-8 at cap 30
    GramKernel g15 = build_gram_kernel(Domain::annulus(r), 15, 48);
    CHECK(g15.basis_size() == 31);
    GramKernel g30 = build_gram_kernel(Domain::annulus(r), 30, 64);
    for (int i = 0; i < 24; ++i) {
        cplx z = std::polar(0.7, 2.0 * kPi * i / 24.0);
        double exact = ann->diagonal(cvec1(z));
        CHECK(std::abs(g15.diagonal(cvec1(z)) - exact) < 1e-3 * exact);
        CHECK(std::abs(g30.diagonal(cvec1(z)) - exact) < 1e-6 * exact);
    }
}

TEST_CASE("polydisc gram is the tensor of disk grams") {
    GramKernel gk = build_gram_kernel(Domain::polydisc(2), 10, 32);
    CHECK(gk.basis_size() == 121);
    KernelPtr closed = make_kernel(Domain::polydisc(2));
    std::mt19937_64 rng(11);
    for (int i = 0; i < 20; ++i) {
        CVec z(2);
        z << random_in_disk(rng, 0.45), random_in_disk(rng, 0.45);
        CHECK(std::abs(gk.diagonal(z) - closed->diagonal(z)) < 1e-5 * closed->diagonal(z));
    }
}

TEST_CASE("unsupported domains are rejected") {
    CHECK_THROWS_AS(build_gram_kernel(Domain::ball(2), 5, 24), Error);
}
