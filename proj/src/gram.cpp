#include "bgeo/gram.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "bgeo/error.hpp"

namespace bgeo {

namespace {

// Gauss-Legendre nodes and weights on [a, b] by Newton iteration on the
// Legendre recurrence.
void gauss_legendre(int n, double a, double b, std::vector<double>& x,
                    std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (t * p0 - p1) / (t * t - 1.0);
            double dt = p0 / pp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        double xm = 0.5 * (b + a), xl = 0.5 * (b - a);
        x[i] = xm - xl * t;
        x[n - 1 - i] = xm + xl * t;
        w[i] = 2.0 * xl / ((1.0 - t * t) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

struct FactorSpec {
    DomainKind kind;
    double r = 0.0;       // annulus inner radius
    std::vector<int> powers;
};

std::vector<FactorSpec> factorize(const Domain& dom, int cap) {
    std::vector<FactorSpec> out;
    switch (dom.kind) {
        case DomainKind::Disk: {
            FactorSpec f{DomainKind::Disk, 0.0, {}};
            for (int k = 0; k <= cap; ++k) f.powers.push_back(k);
            out.push_back(std::move(f));
            break;
        }
        case DomainKind::Annulus: {
            FactorSpec f{DomainKind::Annulus, dom.r, {}};
            for (int k = -cap; k <= cap; ++k) f.powers.push_back(k);
            out.push_back(std::move(f));
            break;
        }
        case DomainKind::Polydisc: {
            for (int i = 0; i < dom.n; ++i) {
                FactorSpec f{DomainKind::Disk, 0.0, {}};
                for (int k = 0; k <= cap; ++k) f.powers.push_back(k);
                out.push_back(std::move(f));
            }
            break;
        }
        default:
            throw Error("gram kernel supports disk, annulus and polydisc domains");
    }
    return out;
}

// Hermitian Gram matrix of z^a against z^b over one factor by quadrature.
CMat factor_gram(const FactorSpec& f, int quad_resolution) {
    const int B = static_cast<int>(f.powers.size());
    const double r_in = f.kind == DomainKind::Annulus ? f.r : 0.0;
    int span = 0;
    for (int pw : f.powers) span = std::max(span, std::abs(pw));
    std::vector<double> rx, rw;
    gauss_legendre(std::max(quad_resolution, 2 * span + 2), r_in, 1.0, rx, rw);
    const int M = std::max(quad_resolution, 2 * span + 2);

    // angular trapezoid is exact for e^{i k theta}, |k| < M, so the Gram
    // matrix is diagonal up to roundoff; the full quadrature loop is kept to
    // honor the construction
    CMat gram = CMat::Zero(B, B);
    std::vector<CMat> contrib(rx.size());
    parallel_for(rx.size(), [&](std::size_t qi) {
        double rho = rx[qi];
        CMat local = CMat::Zero(B, B);
        Eigen::VectorXcd mono(B);
        for (int j = 0; j < M; ++j) {
            double theta = 2.0 * kPi * j / M;
            cplx z = std::polar(rho, theta);
            for (int bi = 0; bi < B; ++bi) {
                mono(bi) = std::pow(z, f.powers[bi]);
            }
            local.noalias() += mono * mono.adjoint();
        }
        contrib[qi] = local * (rw[qi] * rho * 2.0 * kPi / M);
    });
    for (std::size_t qi = 0; qi < rx.size(); ++qi) gram += contrib[qi];
    return gram;
}

}  // namespace

GramKernel::GramKernel(Domain domain, int degree_cap, int quad_resolution)
    : domain_(std::move(domain)) {
    if (degree_cap < 0) throw std::invalid_argument("degree_cap must be >= 0");
    auto factors = factorize(domain_, degree_cap);
    std::vector<CMat> grams;
    grams.reserve(factors.size());
    for (const auto& f : factors) grams.push_back(factor_gram(f, quad_resolution));

    // tensor basis and tensor Gram
    std::vector<std::vector<int>> tuples{{}};
    for (const auto& f : factors) {
        std::vector<std::vector<int>> next;
        for (const auto& t : tuples) {
            for (int pw : f.powers) {
                auto u = t;
                u.push_back(pw);
                next.push_back(std::move(u));
            }
        }
        tuples = std::move(next);
    }
    basis_ = std::move(tuples);
    const int B = static_cast<int>(basis_.size());
    CMat gram = CMat::Ones(B, B);
    // index of each tuple coordinate within its factor power list
    std::vector<std::vector<int>> pos(B, std::vector<int>(factors.size()));
    for (int bi = 0; bi < B; ++bi) {
        for (std::size_t fi = 0; fi < factors.size(); ++fi) {
            const auto& pws = factors[fi].powers;
            pos[bi][fi] = static_cast<int>(
                std::find(pws.begin(), pws.end(), basis_[bi][fi]) - pws.begin());
        }
    }
    for (int ai = 0; ai < B; ++ai) {
        for (int bi = 0; bi < B; ++bi) {
            cplx v = 1.0;
            for (std::size_t fi = 0; fi < factors.size(); ++fi) {
                v *= grams[fi](pos[ai][fi], pos[bi][fi]);
            }
            gram(ai, bi) = v;
        }
    }

    double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < B; ++i) {
        dmax = std::max(dmax, gram(i, i).real());
        dmin = std::min(dmin, gram(i, i).real());
    }
    condition_ = dmin > 0.0 ? dmax / dmin : std::numeric_limits<double>::infinity();

    Eigen::LLT<CMat> llt(gram);
    if (llt.info() != Eigen::Success) {
        throw IllConditionedGramError("Gram matrix Cholesky failed", condition_);
    }
    chol_l_ = llt.matrixL();
}

CVec GramKernel::monomials(const CVec& z) const {
    const int B = static_cast<int>(basis_.size());
    CVec m(B);
    for (int bi = 0; bi < B; ++bi) {
        cplx v = 1.0;
        for (std::size_t c = 0; c < basis_[bi].size(); ++c) {
            v *= std::pow(z(static_cast<Eigen::Index>(c)), basis_[bi][c]);
        }
        m(bi) = v;
    }
    return m;
}

cplx GramKernel::eval(const CVec& z, const CVec& wbar) const {
    if (z.size() != domain_.n || wbar.size() != domain_.n) {
        throw MembershipError("gram kernel: dimension mismatch");
    }
    CVec x = chol_l_.triangularView<Eigen::Lower>().solve(monomials(z));
    CVec y = chol_l_.conjugate().triangularView<Eigen::Lower>().solve(monomials(wbar));
    return (x.array() * y.array()).sum();
}

GramKernel build_gram_kernel(const Domain& domain, int degree_cap, int quad_resolution) {
    return GramKernel(domain, degree_cap, quad_resolution);
}

}  // namespace bgeo
