// Acceptance gate: runs every criterion at its pinned tolerance and prints
// one pass/fail line per criterion.  Exit code = number of failed criteria.

#include <cstdio>
#include <string>
#include <vector>

#include "bgeo/verify.hpp"

using namespace bgeo;

namespace {

struct Criterion {
    int number;
    std::string title;
    std::string suite;
    // empty: every check in the suite; otherwise the named checks only
    std::vector<std::string> checks;
};

bool run_criterion(const Criterion& c, const VerifyOptions& opts) {
    SuiteReport rep = run_suite(c.suite, opts);
    bool ok = true;
    double worst_margin = 0.0;
    std::string worst_name;
    for (const auto& chk : rep.checks) {
        bool wanted = c.checks.empty();
        for (const auto& name : c.checks) {
            if (chk.name.find(name) != std::string::npos) wanted = true;
        }
        if (!wanted) continue;
        if (!chk.passed) ok = false;
        double margin = chk.threshold > 0 ? chk.value / chk.threshold : 0.0;
        if (margin > worst_margin) {
            worst_margin = margin;
            worst_name = chk.name;
        }
    }
    std::printf("criterion %2d [%s] %s", c.number, ok ? "PASS" : "FAIL", c.title.c_str());
    if (!worst_name.empty()) {
        std::printf("  (worst: %s, value/threshold = %.3g)", worst_name.c_str(),
                    worst_margin);
    }
    std::printf("\n");
    if (!ok) {
        for (const auto& chk : rep.checks) {
            if (!chk.passed) {
                std::printf("    FAILED check: %s  value=%.6g threshold=%.6g  %s\n",
                            chk.name.c_str(), chk.value, chk.threshold,
                            chk.detail.c_str());
            }
        }
    }
    std::fflush(stdout);
    return ok;
}

}  // namespace

int main() {
    VerifyOptions opts;
    opts.seed = 7;

    std::vector<Criterion> criteria = {
        {1, "disk rep_0 = id on a 51x51 grid, max deviation < 1e-10", "rep-forms",
         {"rep_0 identity"}},
        {2, "disk rep_p closed form, 5 basepoints x 50 samples, rel err < 1e-8",
         "rep-forms", {"rep_p closed form"}},
        {3, "flatness: curvature residual < 1e-6, Christoffel symmetry < 1e-10",
         "flatness", {}},
        {4, "geodesic straightening |rep(z(t)) - t zeta| < 1e-7 (1+|zeta|)",
         "straightening", {}},
        {5, "C-linearity: fit residual < 1e-8, conjugate fit >= 10x worse", "linearity",
         {}},
        {6, "annulus kernel: wp vs Laurent < 1e-8, Legendre < 1e-10, ODE < 1e-9",
         "annulus-kernel", {}},
        {7, "annulus roots: sign pattern, two roots with |h| < 1e-12, h(-1)=h(-r^2)",
         "annulus-roots", {}},
        {8, "Zhat identity: det numerator/K^2n = det G < 1e-9; disk/ball scans empty",
         "zhat", {}},
        {9, "intrinsic-distance divergence toward Z0 (delta > 1e3, monotone tail)",
         "divergence", {}},
        {10, "gram kernel convergence on the disk (cap 30 < 1e-6, monotone)", "gram",
         {}},
        {11, "normal-coordinate properties (ii)-(iv) < 1e-5 on disk and ball(2)",
         "normal-coords", {}},
        {12, "affine chart compatibility (collinear triples) < 1e-7", "affine", {}},
        {13, "product-gap witness for some r in {0.01, 0.02, 0.05}", "product-gap",
         {"at least one"}},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        if (!run_criterion(c, opts)) ++failures;
    }
    if (failures == 0) {
        std::printf("acceptance: all %zu criteria passed\n", criteria.size());
    } else {
        std::printf("acceptance: %d criteria FAILED\n", failures);
    }
    return failures;
}
