#include "bgeo/elliptic.hpp"

#include <cmath>

#include "bgeo/error.hpp"

// Nome series for the rectangular lattice, DLMF 23.8 conventions with
// half-periods (omega1, omega2), omega2/omega1 purely imaginary:
//
//   zeta(u) = eta1*u/w1 + (pi/(2 w1)) cot v + (2 pi/w1) S[q^{2n} sin(2nv)/(1-q^{2n})]
//   P(u)    = -eta1/w1 + (pi/(2 w1))^2 / sin^2 v
//             - (2 pi^2/w1^2) S[n q^{2n} cos(2nv)/(1-q^{2n})]
//   P'(u)   = -2 (pi/(2 w1))^3 cos v / sin^3 v
//             + (2 pi^3/w1^3) S[n^2 q^{2n} sin(2nv)/(1-q^{2n})]
//
// with v = pi*u/(2*omega1).  Since q = exp(-pi^2/omega1) is small for every
// r not absurdly close to 0, a handful of terms gives full precision; terms
// q^{2n} cos/sin(2nv) are assembled from exp(2n(log q +- i v)) so nothing
// overflows inside the reduced cell.

namespace bgeo::elliptic {

namespace {

constexpr int kTermCap = 64;

// q^{2n} * cos(2nv) and q^{2n} * sin(2nv) without intermediate overflow.
struct QTerm {
    cplx cosv, sinv;
};

QTerm q_term(double log_q, cplx v, int n) {
    const cplx iu(0.0, 1.0);
    cplx ep = std::exp(2.0 * n * (log_q + iu * v));
    cplx em = std::exp(2.0 * n * (log_q - iu * v));
    return {0.5 * (ep + em), (ep - em) / (2.0 * iu)};
}

double q_pow_ratio(double q, int n) {
    // q^{2n} / (1 - q^{2n}) given q^{2n} already folded into the exp terms:
    // this returns the residual factor 1/(1 - q^{2n}).
    return 1.0 / (1.0 - std::pow(q, 2.0 * n));
}

// Reduces u into the centered cell [-w1,w1) x [-pi,pi); returns the
// multipliers so callers can restore quasi-periodic parts.
struct Reduced {
    cplx u;
    long m1, m2;  // u_original = u + 2*m1*omega1 + 2*m2*omega2
};

Reduced reduce(const Lattice& lat, cplx u) {
    long m1 = std::lround(u.real() / (2.0 * lat.omega1));
    long m2 = std::lround(u.imag() / (2.0 * kPi));
    cplx ur(u.real() - 2.0 * m1 * lat.omega1, u.imag() - 2.0 * m2 * kPi);
    return {ur, m1, m2};
}

void check_pole(const Lattice& lat, cplx ur) {
    // After centered reduction the only lattice point in the closed cell
    // is the origin.
    if (std::abs(ur) < lat.pole_guard) {
        throw PoleProximityError("argument within pole_guard of a lattice point");
    }
}

double eisenstein_sum(double q, int power) {
    // S = sum n^power q^{2n} / (1 - q^{2n})
    double s = 0.0;
    for (int n = 1; n <= kTermCap; ++n) {
        double q2n = std::pow(q, 2.0 * n);
        double t = std::pow(static_cast<double>(n), power) * q2n / (1.0 - q2n);
        s += t;
        if (std::abs(t) < 1e-18 * std::max(1.0, std::abs(s))) return s;
    }
    throw SeriesCapError("Eisenstein series did not converge within term cap");
}

// zeta series at a point already inside the convergence strip |Im u| <= pi.
cplx zeta_series_in_cell(const Lattice& lat, cplx u) {
    const double w1 = lat.omega1;
    const double log_q = -kPi * kPi / w1;
    const cplx v = kPi * u / (2.0 * w1);
    cplx sum = 0.0;
    for (int n = 1; n <= kTermCap; ++n) {
        cplx t = q_term(log_q, v, n).sinv * q_pow_ratio(lat.nome_q, n);
        sum += t;
        if (std::abs(t) < 1e-16 * std::max(1.0, std::abs(sum))) {
            return lat.eta1 * u / w1 + kPi / (2.0 * w1) * std::cos(v) / std::sin(v) +
                   2.0 * kPi / w1 * sum;
        }
    }
    throw SeriesCapError("zeta series did not converge within term cap");
}

}  // namespace

Lattice make_lattice(double r) {
    if (!(r > 0.0 && r < 1.0)) {
        throw std::invalid_argument("annulus radius must satisfy 0 < r < 1");
    }
    Lattice lat;
    lat.r = r;
    lat.omega1 = std::log(1.0 / r);
    lat.omega2 = cplx(0.0, kPi);
    lat.nome_q = std::exp(-kPi * kPi / lat.omega1);
    const double w1 = lat.omega1;
    const double piw = kPi / (2.0 * w1);
    lat.eta1 = kPi * kPi / (2.0 * w1) * (1.0 / 6.0 - 4.0 * eisenstein_sum(lat.nome_q, 1));
    lat.g2 = std::pow(piw, 4) * 4.0 / 3.0 * (1.0 + 240.0 * eisenstein_sum(lat.nome_q, 3));
    lat.g3 = std::pow(piw, 6) * 8.0 / 27.0 * (1.0 - 504.0 * eisenstein_sum(lat.nome_q, 5));
    // eta2 from the zeta series at omega2 itself (|Im u| = pi converges).
    lat.eta2 = zeta_series_in_cell(lat, lat.omega2);
    return lat;
}

cplx wp_shifted(const Lattice& lat, cplx u) {
    Reduced red = reduce(lat, u);
    check_pole(lat, red.u);
    const double w1 = lat.omega1;
    const double log_q = -kPi * kPi / w1;
    const cplx v = kPi * red.u / (2.0 * w1);
    const cplx sv = std::sin(v);
    cplx sum = 0.0;
    for (int n = 1; n <= kTermCap; ++n) {
        cplx t = static_cast<double>(n) * q_term(log_q, v, n).cosv * q_pow_ratio(lat.nome_q, n);
        sum += t;
        if (std::abs(t) < 1e-16 * std::max(1.0, std::abs(sum))) {
            double c = kPi / (2.0 * w1);
            return c * c / (sv * sv) - 2.0 * kPi * kPi / (w1 * w1) * sum;
        }
    }
    throw SeriesCapError("wp series did not converge within term cap");
}

cplx wp(const Lattice& lat, cplx u) {
    return wp_shifted(lat, u) - lat.eta1 / lat.omega1;
}

cplx wp_prime(const Lattice& lat, cplx u) {
    Reduced red = reduce(lat, u);
    check_pole(lat, red.u);
    const double w1 = lat.omega1;
    const double log_q = -kPi * kPi / w1;
    const cplx v = kPi * red.u / (2.0 * w1);
    const cplx sv = std::sin(v), cv = std::cos(v);
    cplx sum = 0.0;
    for (int n = 1; n <= kTermCap; ++n) {
        cplx t = static_cast<double>(n) * static_cast<double>(n) *
                 q_term(log_q, v, n).sinv * q_pow_ratio(lat.nome_q, n);
        sum += t;
        if (std::abs(t) < 1e-16 * std::max(1.0, std::abs(sum))) {
            double c = kPi / (2.0 * w1);
            return -2.0 * c * c * c * cv / (sv * sv * sv) +
                   2.0 * std::pow(kPi, 3) / std::pow(w1, 3) * sum;
        }
    }
    throw SeriesCapError("wp_prime series did not converge within term cap");
}

cplx wp_second(const Lattice& lat, cplx u) {
    cplx p = wp(lat, u);
    return 6.0 * p * p - 0.5 * lat.g2;
}

cplx wp_third(const Lattice& lat, cplx u) {
    return 12.0 * wp(lat, u) * wp_prime(lat, u);
}

cplx w_zeta(const Lattice& lat, cplx u) {
    Reduced red = reduce(lat, u);
    check_pole(lat, red.u);
    cplx val = zeta_series_in_cell(lat, red.u);
    // restore quasi-periodic increments removed by the reduction
    return val + 2.0 * static_cast<double>(red.m1) * lat.eta1 +
           2.0 * static_cast<double>(red.m2) * lat.eta2;
}

double legendre_residual(const Lattice& lat) {
    cplx res = lat.eta1 * lat.omega2 - lat.eta2 * lat.omega1 - cplx(0.0, kPi / 2.0);
    return std::abs(res);
}

}  // namespace bgeo::elliptic
