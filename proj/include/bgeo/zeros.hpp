#pragma once

#include <optional>

#include "bgeo/elliptic.hpp"
#include "bgeo/kernel.hpp"

namespace bgeo {

enum class VarietyKind { Z0, Z1, Zhat1 };

struct VarietyProbe {
    VarietyKind kind = VarietyKind::Z0;
    CVec p;
    std::vector<CVec> hits;
    std::vector<double> residuals;  // |defining function| at hits, relative scale
};

// h(lambda) = wp(log lambda) + eta1/omega1 on the closed set r^2 <= |lambda| <= 1
// (boundary included so the sign checks at -1 and -r^2 are expressible).
cplx annulus_h(const elliptic::Lattice& lat, cplx lambda);
cplx annulus_h(double r, cplx lambda);

struct AnnulusRoots {
    double r;
    double lambda1;  // in (-r, -r^2)
    double lambda2;  // in (-1, -r)
    double residual1, residual2;
};

// The two real zeros of h in the lambda annulus, bracketed by the sign
// pattern h(-1) < 0, h(-r) > 0, h(-r^2) < 0 and bisected to convergence.
// A violated sign pattern or a different sign-change count is a hard error.
AnnulusRoots annulus_roots(double r);

// Grid scan for small |K(z,pbar)| (Z0) or small |det G(z,pbar)| with K
// bounded away from zero (Z1), Newton-refined from candidate cells.
// grid_n is the per-axis resolution for 1-dimensional domains; higher
// dimensional domains fall back to grid_n^2 seeded random samples.
VarietyProbe z0_locus(const Kernel& kernel, const CVec& p, int grid_n, double tol = 1e-8);
VarietyProbe z1_locus(const Kernel& kernel, const CVec& p, int grid_n, double tol = 1e-8);

// det[K * d2K - dK dK](z, pbar): the polynomial numerator of det G, defined
// even where K vanishes.
cplx zhat1_det(const Kernel& kernel, const CVec& p, const CVec& z);

struct GapWitness {
    cplx z;
    double metric_abs;    // |g(z, pbar)| of the annulus factor
    double kernel_abs;    // |K(z, pbar)|
    double kernel_scale;  // K(p, pbar)
};

// Searches the annulus A_r near the imaginary axis for zeros of the
// polarized metric g(z, pbar) with |K| bounded away from zero: each witness
// puts a Zhat1 \ Z0 point on the product A_r x D.  Empty when no witness is
// found at this (r, p); that is a reportable outcome, not an error.
std::vector<GapWitness> product_gap_search(double r, double p, int grid_n);

struct CollisionPair {
    CVec z1, z2;
    CVec zeta;        // common chart value after polishing
    double residual;  // max |rep(z) - zeta| over the pair
};

struct PoleProbeReport {
    bool injective_on_sample = true;
    int samples = 0;
    std::vector<CollisionPair> collisions;  // Newton-certified distinct preimages
    int near_collisions = 0;                // raw spatial-hash candidates
};

// Evaluates rep_p on a sample of the domain and reports near-collisions
// |zeta_i - zeta_j| < tol with |z_i - z_j| > sep; candidates are polished by
// Newton into certified pairs.  Sampled evidence only.
PoleProbeReport pole_probe(KernelPtr kernel, const CVec& p, int grid_n,
                           double collision_tol = 2e-3, double sep = 0.1);

}  // namespace bgeo
