#pragma once

#include "bgeo/util.hpp"

namespace bgeo::elliptic {

// Constants of the rectangular Weierstrass lattice generated by
// 2*omega1 = 2*log(1/r) (real) and 2*omega2 = 2*pi*i, the lattice behind
// the annulus {r < |z| < 1}.  All series data is fixed at construction;
// instances are immutable and safe to share across threads.
struct Lattice {
    double r;            // generating annulus radius, 0 < r < 1
    double omega1;       // log(1/r)
    cplx omega2;         // pi*i exactly
    double eta1;         // zeta(omega1); zeta increases by 2*eta1 over 2*omega1
    cplx eta2;           // zeta(omega2)
    double nome_q;       // exp(-pi^2/omega1), in (0,1)
    double g2, g3;       // lattice invariants (real for rectangular lattices)
    double pole_guard = 1e-8;
};

// Builds the lattice for the annulus radius r.  Throws std::invalid_argument
// unless 0 < r < 1; throws SeriesCapError if the nome series fails to
// converge within the term cap (r astronomically small).
Lattice make_lattice(double r);

// Weierstrass P, P' and zeta by nome series after reduction of u into the
// centered fundamental cell.  Throw PoleProximityError when u is within
// lat.pole_guard of a lattice point.
cplx wp(const Lattice& lat, cplx u);
cplx wp_prime(const Lattice& lat, cplx u);
cplx w_zeta(const Lattice& lat, cplx u);

// wp(u) + eta1/omega1 with the constant term cancelled inside the series,
// so the result carries full relative accuracy even where it is tiny.
// This combination is the numerator h(e^u) of the annulus kernel.
cplx wp_shifted(const Lattice& lat, cplx u);

// Derivative of wp_shifted, i.e. wp_prime; plus the algebraic second and
// third derivatives 6P^2 - g2/2 and 12*P*P'.
cplx wp_second(const Lattice& lat, cplx u);
cplx wp_third(const Lattice& lat, cplx u);

// |eta1*omega2 - eta2*omega1 - pi*i/2|, zero in exact arithmetic.
double legendre_residual(const Lattice& lat);

}  // namespace bgeo::elliptic
