#include "bgeo/automorphism.hpp"

#include "bgeo/error.hpp"

namespace bgeo {

Automorphism disk_mobius(cplx a, double theta) {
    if (std::abs(a) >= 1.0) throw std::invalid_argument("mobius center must satisfy |a| < 1");
    cplx phase = std::polar(1.0, theta);
    cplx abar = std::conj(a);
    double one_minus = 1.0 - std::norm(a);
    Automorphism m;
    m.name = "disk_mobius(a=" + format_complex(a) + ",theta=" + format_double(theta) + ")";
    m.domain = Domain::disk();
    m.f = [=](cplx z) { return phase * (z - a) / (1.0 - abar * z); };
    m.df = [=](cplx z) {
        cplx d = 1.0 - abar * z;
        return phase * one_minus / (d * d);
    };
    m.d2f = [=](cplx z) {
        cplx d = 1.0 - abar * z;
        return phase * 2.0 * abar * one_minus / (d * d * d);
    };
    return m;
}

Automorphism annulus_rotation(double r, double theta) {
    cplx phase = std::polar(1.0, theta);
    Automorphism m;
    m.name = "annulus_rotation(theta=" + format_double(theta) + ")";
    m.domain = Domain::annulus(r);
    m.f = [=](cplx z) { return phase * z; };
    m.df = [=](cplx) { return phase; };
    m.d2f = [=](cplx) { return cplx(0.0); };
    return m;
}

Automorphism annulus_inversion(double r) {
    Automorphism m;
    m.name = "annulus_inversion";
    m.domain = Domain::annulus(r);
    m.f = [=](cplx z) { return r / z; };
    m.df = [=](cplx z) { return -r / (z * z); };
    m.d2f = [=](cplx z) { return 2.0 * r / (z * z * z); };
    return m;
}

std::vector<Automorphism> builtin_automorphisms(const Domain& domain,
                                                std::mt19937_64& rng,
                                                int count) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    std::vector<Automorphism> out;
    if (domain.kind == DomainKind::Disk) {
        for (int i = 0; i < count; ++i) {
            out.push_back(disk_mobius(random_in_disk(rng, 0.7), angle(rng)));
        }
    } else if (domain.kind == DomainKind::Annulus) {
        for (int i = 0; i < count; ++i) {
            if (i % 3 == 2) {
                out.push_back(annulus_inversion(domain.r));
            } else {
                out.push_back(annulus_rotation(domain.r, angle(rng)));
            }
        }
    } else {
        throw Error("no built-in automorphism family for " + domain.describe());
    }
    return out;
}

}  // namespace bgeo
