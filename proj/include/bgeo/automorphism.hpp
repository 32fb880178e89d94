#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bgeo/domain.hpp"
#include "bgeo/util.hpp"

namespace bgeo {

// One-variable holomorphic automorphism together with its first two
// derivatives.  The conjugate partner fbar(wbar) := conj(f(conj(wbar)))
// evaluates the second (anti-holomorphic) slot of polarized formulas.
struct Automorphism {
    std::string name;
    Domain domain;
    std::function<cplx(cplx)> f;
    std::function<cplx(cplx)> df;
    std::function<cplx(cplx)> d2f;

    cplx fbar(cplx wbar) const { return std::conj(f(std::conj(wbar))); }
    cplx dfbar(cplx wbar) const { return std::conj(df(std::conj(wbar))); }
};

// phi_a(z) = e^{i theta} (z - a)/(1 - conj(a) z), |a| < 1.
Automorphism disk_mobius(cplx a, double theta = 0.0);

// z -> e^{i theta} z on the annulus {r < |z| < 1}.
Automorphism annulus_rotation(double r, double theta);

// z -> r/z, swapping the two boundary circles.
Automorphism annulus_inversion(double r);

// Built-in family used by the seeded verification suites.
std::vector<Automorphism> builtin_automorphisms(const Domain& domain,
                                                std::mt19937_64& rng,
                                                int count);

}  // namespace bgeo
