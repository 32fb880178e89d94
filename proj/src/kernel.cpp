#include "bgeo/kernel.hpp"

#include <array>
#include <cmath>

#include "bgeo/elliptic.hpp"
#include "bgeo/error.hpp"

namespace bgeo {

void Kernel::check_dims(const CVec& z, const CVec& wbar) const {
    if (z.size() != dim() || wbar.size() != dim()) {
        throw MembershipError("polarized point dimension does not match domain " +
                              domain().describe());
    }
}

double Kernel::diagonal(const CVec& z) const {
    return eval(z, z.conjugate()).real();
}

namespace {

Jet zero_jet(int n) {
    Jet j;
    j.dz = CVec::Zero(n);
    j.dwbar = CVec::Zero(n);
    j.dzdz = CMat::Zero(n, n);
    j.dzdwbar = CMat::Zero(n, n);
    j.d3.assign(n, CMat::Zero(n, n));
    return j;
}

// ---------------------------------------------------------------------
// Ball(n): K = n!/pi^n (1 - <z,w>)^{-(n+1)}.  Covers the disk as n = 1.

class BallKernel final : public Kernel {
public:
    BallKernel(Domain d, KernelOptions opts) : Kernel(std::move(d), opts) {
        const int n = dim();
        m_ = n + 1;
        c_ = 1.0;
        for (int i = 2; i <= n; ++i) c_ *= i;
        c_ /= std::pow(kPi, n);
    }

    cplx eval(const CVec& z, const CVec& wbar) const override {
        check_dims(z, wbar);
        // <z,w> = sum z_j wbar_j: plain product, no conjugation
        cplx t = 1.0 - (z.array() * wbar.array()).sum();
        return c_ * std::pow(t, -m_);
    }

    Jet jet(const CVec& z, const CVec& wbar) const override {
        check_dims(z, wbar);
        const int n = dim();
        const cplx t = 1.0 - (z.array() * wbar.array()).sum();
        const double m = m_;
        const cplx f0 = c_ * std::pow(t, -m_);
        const cplx f1 = f0 * m / t;                    // c m T^{-m-1}
        const cplx f2 = f1 * (m + 1.0) / t;            // c m(m+1) T^{-m-2}
        const cplx f3 = f2 * (m + 2.0) / t;            // c m(m+1)(m+2) T^{-m-3}
        Jet J = zero_jet(n);
        J.k = f0;
        for (int j = 0; j < n; ++j) {
            J.dz(j) = f1 * wbar(j);
            J.dwbar(j) = f1 * z(j);
        }
        for (int j = 0; j < n; ++j) {
            for (int l = 0; l < n; ++l) {
                J.dzdz(j, l) = f2 * wbar(j) * wbar(l);
                J.dzdwbar(j, l) = f2 * z(l) * wbar(j) + (j == l ? f1 : cplx(0.0));
            }
        }
        for (int k = 0; k < n; ++k) {
            for (int j = 0; j < n; ++j) {
                for (int l = 0; l < n; ++l) {
                    cplx v = f3 * wbar(j) * wbar(l) * z(k);
                    if (j == k) v += f2 * wbar(l);
                    if (l == k) v += f2 * wbar(j);
                    J.d3[k](j, l) = v;
                }
            }
        }
        return J;
    }

private:
    int m_;
    double c_;
};

// ---------------------------------------------------------------------
// Annulus {r < |z| < 1}: K = h(lambda)/(pi lambda) with lambda = z wbar and
// h(lambda) = wp(log lambda) + eta1/omega1 on r^2 < |lambda| < 1.  The
// principal branch of the log is safe: its jump 2*pi*i is a lattice period.

class AnnulusKernel final : public Kernel {
public:
    AnnulusKernel(Domain d, KernelOptions opts)
        : Kernel(std::move(d), opts), lat_(elliptic::make_lattice(domain().r)) {
        lat_.pole_guard = opts.pole_guard;
    }

    const elliptic::Lattice& lattice() const { return lat_; }

    cplx eval(const CVec& z, const CVec& wbar) const override {
        check_dims(z, wbar);
        return phi(check_lambda(z(0) * wbar(0)))[0];
    }

    Jet jet(const CVec& z, const CVec& wbar) const override {
        check_dims(z, wbar);
        const cplx zv = z(0), wv = wbar(0);
        const cplx lambda = check_lambda(zv * wv);
        auto p = phi(lambda);
        Jet J = zero_jet(1);
        J.k = p[0];
        J.dz(0) = p[1] * wv;
        J.dwbar(0) = p[1] * zv;
        J.dzdz(0, 0) = p[2] * wv * wv;
        J.dzdwbar(0, 0) = p[2] * lambda + p[1];
        J.d3[0](0, 0) = wv * (p[3] * lambda + 2.0 * p[2]);
        return J;
    }

private:
    cplx check_lambda(cplx lambda) const {
        double a = std::abs(lambda);
        double r = domain().r;
        if (!(a > r * r && a < 1.0)) {
            throw MembershipError("annulus polarized argument outside r^2 < |z wbar| < 1");
        }
        return lambda;
    }

    // K and its first three lambda-derivatives.
    std::array<cplx, 4> phi(cplx lambda) const {
        if (options().annulus_mode == AnnulusEval::Laurent) return phi_laurent(lambda);
        return phi_weierstrass(lambda);
    }

    std::array<cplx, 4> phi_weierstrass(cplx lambda) const {
        const cplx u = std::log(lambda);
        const cplx h0 = elliptic::wp_shifted(lat_, u);
        const cplx h1u = elliptic::wp_prime(lat_, u);
        const cplx p = h0 - lat_.eta1 / lat_.omega1;  // wp itself
        const cplx h2u = 6.0 * p * p - 0.5 * lat_.g2;
        const cplx h3u = 12.0 * p * h1u;
        // u-derivatives to lambda-derivatives
        const cplx l1 = lambda, l2 = lambda * lambda, l3 = l2 * lambda, l4 = l3 * lambda;
        const cplx hp = h1u / l1;
        const cplx hpp = (h2u - h1u) / l2;
        const cplx hppp = (h3u - 3.0 * h2u + 2.0 * h1u) / l3;
        std::array<cplx, 4> out;
        out[0] = h0 / (kPi * l1);
        out[1] = hp / (kPi * l1) - h0 / (kPi * l2);
        out[2] = hpp / (kPi * l1) - 2.0 * hp / (kPi * l2) + 2.0 * h0 / (kPi * l3);
        out[3] = hppp / (kPi * l1) - 3.0 * hpp / (kPi * l2) + 6.0 * hp / (kPi * l3) -
                 6.0 * h0 / (kPi * l4);
        return out;
    }

    std::array<cplx, 4> phi_laurent(cplx lambda) const {
        const double r = domain().r;
        std::array<cplx, 4> acc{cplx(0), cplx(0), cplx(0), cplx(0)};
        const cplx l1 = lambda, l2 = lambda * lambda, l3 = l2 * lambda;
        // base = c_n lambda^n accumulated with iterative powers so neither
        // factor overflows on its own
        auto add_term = [&](double n, cplx base) {
            acc[0] += base;
            acc[1] += base * n / l1;
            acc[2] += base * n * (n - 1.0) / l2;
            acc[3] += base * n * (n - 1.0) * (n - 2.0) / l3;
            return std::abs(base);
        };
        add_term(-1.0, 1.0 / (2.0 * kPi * std::log(1.0 / r) * lambda));
        add_term(0.0, cplx(1.0 / (kPi * (1.0 - r * r))));
        constexpr long cap = 4000;
        // positive tail: ratio |lambda| < 1
        cplx pw = lambda;
        long n = 1;
        for (; n <= cap; ++n) {
            double coeff = (n + 1.0) / (kPi * (1.0 - std::pow(r, 2.0 * n + 2.0)));
            double t = add_term(static_cast<double>(n), coeff * pw) * (n * n * n + 1.0);
            if (t < 1e-17 * std::max(1.0, std::abs(acc[0]))) break;
            pw *= lambda;
        }
        if (n > cap) throw SeriesCapError("annulus Laurent series (positive tail) cap hit");
        // negative tail: lambda^{-m} r^{2(m-1)} = (r^2/lambda)^m / r^2,
        // ratio |r^2/lambda| < 1
        const cplx mu = r * r / lambda;
        cplx mw = mu * mu;
        long m = 2;
        for (; m <= cap; ++m) {
            double rp = std::pow(r, 2.0 * (m - 1.0));
            double coeff = (m - 1.0) / (kPi * (1.0 - rp) * r * r);
            double t =
                add_term(static_cast<double>(-m), coeff * mw) * (m * m * m + 1.0);
            if (t < 1e-17 * std::max(1.0, std::abs(acc[0]))) break;
            mw *= mu;
        }
        if (m > cap) throw SeriesCapError("annulus Laurent series (negative tail) cap hit");
        return acc;
    }

    elliptic::Lattice lat_;
};

// ---------------------------------------------------------------------
// Product domain: K = prod of factor kernels on coordinate blocks.

class ProductKernel final : public Kernel {
public:
    ProductKernel(Domain d, std::vector<KernelPtr> factors, KernelOptions opts)
        : Kernel(std::move(d), opts), factors_(std::move(factors)) {
        int off = 0;
        for (const auto& f : factors_) {
            offsets_.push_back(off);
            off += f->dim();
        }
    }

    cplx eval(const CVec& z, const CVec& wbar) const override {
        check_dims(z, wbar);
        cplx prod = 1.0;
        for (std::size_t f = 0; f < factors_.size(); ++f) {
            int off = offsets_[f], fn = factors_[f]->dim();
            prod *= factors_[f]->eval(z.segment(off, fn), wbar.segment(off, fn));
        }
        return prod;
    }

    Jet jet(const CVec& z, const CVec& wbar) const override {
        check_dims(z, wbar);
        const int n = dim();
        const std::size_t F = factors_.size();
        std::vector<Jet> jets(F);
        std::vector<cplx> vals(F);
        for (std::size_t f = 0; f < F; ++f) {
            int off = offsets_[f], fn = factors_[f]->dim();
            jets[f] = factors_[f]->jet(z.segment(off, fn), wbar.segment(off, fn));
            vals[f] = jets[f].k;
        }
        auto prod_excl = [&](std::initializer_list<std::size_t> excl) {
            cplx p = 1.0;
            for (std::size_t f = 0; f < F; ++f) {
                bool skip = false;
                for (std::size_t e : excl)
                    if (e == f) skip = true;
                if (!skip) p *= vals[f];
            }
            return p;
        };
        // block index and local offset per global coordinate
        std::vector<std::size_t> blk(n);
        std::vector<int> loc(n);
        for (std::size_t f = 0; f < F; ++f) {
            for (int i = 0; i < factors_[f]->dim(); ++i) {
                blk[offsets_[f] + i] = f;
                loc[offsets_[f] + i] = i;
            }
        }
        Jet J = zero_jet(n);
        J.k = prod_excl({});
        for (int j = 0; j < n; ++j) {
            J.dz(j) = jets[blk[j]].dz(loc[j]) * prod_excl({blk[j]});
            J.dwbar(j) = jets[blk[j]].dwbar(loc[j]) * prod_excl({blk[j]});
        }
        for (int j = 0; j < n; ++j) {
            for (int l = 0; l < n; ++l) {
                std::size_t fj = blk[j], fl = blk[l];
                if (fj == fl) {
                    J.dzdz(j, l) = jets[fj].dzdz(loc[j], loc[l]) * prod_excl({fj});
                } else {
                    J.dzdz(j, l) =
                        jets[fj].dz(loc[j]) * jets[fl].dz(loc[l]) * prod_excl({fj, fl});
                }
            }
        }
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                std::size_t fj = blk[j], fk = blk[k];
                if (fj == fk) {
                    J.dzdwbar(j, k) = jets[fj].dzdwbar(loc[j], loc[k]) * prod_excl({fj});
                } else {
                    J.dzdwbar(j, k) =
                        jets[fj].dz(loc[j]) * jets[fk].dwbar(loc[k]) * prod_excl({fj, fk});
                }
            }
        }
        for (int k = 0; k < n; ++k) {
            for (int j = 0; j < n; ++j) {
                for (int l = 0; l < n; ++l) {
                    std::size_t fj = blk[j], fl = blk[l], fk = blk[k];
                    cplx v;
                    if (fj == fl && fl == fk) {
                        v = jets[fj].d3[loc[k]](loc[j], loc[l]) * prod_excl({fj});
                    } else if (fj == fl) {
                        v = jets[fj].dzdz(loc[j], loc[l]) * jets[fk].dwbar(loc[k]) *
                            prod_excl({fj, fk});
                    } else if (fj == fk) {
                        v = jets[fj].dzdwbar(loc[j], loc[k]) * jets[fl].dz(loc[l]) *
                            prod_excl({fj, fl});
                    } else if (fl == fk) {
                        v = jets[fl].dzdwbar(loc[l], loc[k]) * jets[fj].dz(loc[j]) *
                            prod_excl({fj, fl});
                    } else {
                        v = jets[fj].dz(loc[j]) * jets[fl].dz(loc[l]) *
                            jets[fk].dwbar(loc[k]) * prod_excl({fj, fl, fk});
                    }
                    J.d3[k](j, l) = v;
                }
            }
        }
        return J;
    }

private:
    std::vector<KernelPtr> factors_;
    std::vector<int> offsets_;
};

// ---------------------------------------------------------------------
// Finite-difference wrapper: jets from eval() alone via 4th-order central
// differences.  Step grows with derivative order to balance roundoff.

class FiniteDifferenceKernel final : public Kernel {
public:
    FiniteDifferenceKernel(KernelPtr inner, KernelOptions opts)
        : Kernel(inner->domain(), opts), inner_(std::move(inner)) {}

    cplx eval(const CVec& z, const CVec& wbar) const override {
        return inner_->eval(z, wbar);
    }

    Jet jet(const CVec& z, const CVec& wbar) const override {
        check_dims(z, wbar);
        const int n = dim();
        const double h1 = step(z, 1.0);
        const double h2 = step(z, 10.0);
        const double h3 = step(z, 100.0);
        auto base = [this](const CVec& zz, const CVec& ww) { return inner_->eval(zz, ww); };
        Jet J = zero_jet(n);
        J.k = base(z, wbar);
        for (int j = 0; j < n; ++j) {
            J.dz(j) = d1z(base, z, wbar, j, h1);
            J.dwbar(j) = d1w(base, z, wbar, j, h1);
        }
        for (int j = 0; j < n; ++j) {
            for (int l = 0; l < n; ++l) {
                auto inner_l = [&](const CVec& zz, const CVec& ww) {
                    return d1z(base, zz, ww, l, h2);
                };
                J.dzdz(j, l) = d1z(inner_l, z, wbar, j, h2);
            }
            for (int k = 0; k < n; ++k) {
                auto inner_k = [&](const CVec& zz, const CVec& ww) {
                    return d1w(base, zz, ww, k, h2);
                };
                J.dzdwbar(j, k) = d1z(inner_k, z, wbar, j, h2);
            }
        }
        for (int k = 0; k < n; ++k) {
            for (int j = 0; j < n; ++j) {
                for (int l = 0; l < n; ++l) {
                    auto f_k = [&](const CVec& zz, const CVec& ww) {
                        return d1w(base, zz, ww, k, h3);
                    };
                    auto f_lk = [&](const CVec& zz, const CVec& ww) {
                        return d1z(f_k, zz, ww, l, h3);
                    };
                    J.d3[k](j, l) = d1z(f_lk, z, wbar, j, h3);
                }
            }
        }
        return J;
    }

private:
    double step(const CVec& z, double factor) const {
        double scale = std::max(1.0, z.cwiseAbs().maxCoeff());
        return options().fd_step * factor * scale;
    }

    template <typename F>
    static cplx d1z(const F& f, const CVec& z, const CVec& wbar, int j, double h) {
        CVec zp = z;
        auto at = [&](double s) {
            zp(j) = z(j) + s;
            return f(zp, wbar);
        };
        return (at(-2 * h) - 8.0 * at(-h) + 8.0 * at(h) - at(2 * h)) / (12.0 * h);
    }

    template <typename F>
    static cplx d1w(const F& f, const CVec& z, const CVec& wbar, int k, double h) {
        CVec wp = wbar;
        auto at = [&](double s) {
            wp(k) = wbar(k) + s;
            return f(z, wp);
        };
        return (at(-2 * h) - 8.0 * at(-h) + 8.0 * at(h) - at(2 * h)) / (12.0 * h);
    }

    KernelPtr inner_;
};

KernelPtr make_closed_form(const Domain& domain, const KernelOptions& opts) {
    switch (domain.kind) {
        case DomainKind::Disk:
        case DomainKind::Ball:
            return std::make_shared<BallKernel>(domain, opts);
        case DomainKind::Annulus:
            return std::make_shared<AnnulusKernel>(domain, opts);
        case DomainKind::Polydisc: {
            std::vector<KernelPtr> fs;
            for (int i = 0; i < domain.n; ++i) {
                fs.push_back(std::make_shared<BallKernel>(Domain::disk(), opts));
            }
            return std::make_shared<ProductKernel>(domain, std::move(fs), opts);
        }
        case DomainKind::Product: {
            std::vector<KernelPtr> fs;
            for (const auto& fd : domain.factors) fs.push_back(make_closed_form(fd, opts));
            return std::make_shared<ProductKernel>(domain, std::move(fs), opts);
        }
    }
    throw Error("unsupported domain kind");
}

}  // namespace

KernelPtr make_kernel(const Domain& domain, const KernelOptions& opts) {
    KernelPtr closed = make_closed_form(domain, opts);
    if (opts.mode == DerivMode::FiniteDifference) {
        return std::make_shared<FiniteDifferenceKernel>(std::move(closed), opts);
    }
    return closed;
}

LogDerivatives log_derivatives(const Jet& jet, double floor_abs) {
    if (std::abs(jet.k) < floor_abs) {
        throw NearZeroKernelError("|K| below kernel floor (point near Z0)");
    }
    const int n = static_cast<int>(jet.dz.size());
    const cplx K = jet.k;
    LogDerivatives out;
    out.grad_wbar = jet.dwbar / K;
    CVec bz = jet.dz / K;  // d log K / dz_j
    out.metric = jet.dzdwbar / K - bz * out.grad_wbar.transpose();
    out.dz_metric.assign(n, CMat::Zero(n, n));
    for (int l = 0; l < n; ++l) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                cplx dA = jet.d3[k](j, l) / K - jet.dzdwbar(j, k) * jet.dz(l) / (K * K);
                cplx dB = jet.dzdz(j, l) / K - jet.dz(j) * jet.dz(l) / (K * K);
                cplx dC = jet.dzdwbar(l, k) / K - jet.dwbar(k) * jet.dz(l) / (K * K);
                out.dz_metric[l](j, k) = dA - dB * out.grad_wbar(k) - bz(j) * dC;
            }
        }
    }
    return out;
}

double kernel_scale(const Kernel& k, const CVec& wbar) {
    return std::abs(k.eval(wbar.conjugate(), wbar));
}

std::pair<CVec, CMat> kernel_derivatives(const Kernel& k, const CVec& z, const CVec& wbar) {
    double floor_abs = k.options().kernel_floor * kernel_scale(k, wbar);
    LogDerivatives ld = log_derivatives(k.jet(z, wbar), floor_abs);
    return {ld.grad_wbar, ld.metric};
}

double transformation_check(const Automorphism& f, const Kernel& src, const Kernel& dst,
                            cplx z, cplx wbar) {
    if (src.dim() != 1 || dst.dim() != 1) {
        throw Error("transformation_check handles one-dimensional models");
    }
    cplx k_src = src.eval(cvec1(z), cvec1(wbar));
    cplx k_dst = dst.eval(cvec1(f.f(z)), cvec1(f.fbar(wbar)));
    cplx rhs = k_dst * f.df(z) * f.dfbar(wbar);
    return std::abs(k_src - rhs) / std::abs(k_src);
}

cplx annulus_kernel_weierstrass(double r, cplx lambda) {
    KernelOptions opts;
    opts.annulus_mode = AnnulusEval::Weierstrass;
    AnnulusKernel k(Domain::annulus(r), opts);
    return k.eval(cvec1(lambda), cvec1(cplx(1.0)));
}

cplx annulus_kernel_laurent(double r, cplx lambda) {
    KernelOptions opts;
    opts.annulus_mode = AnnulusEval::Laurent;
    AnnulusKernel k(Domain::annulus(r), opts);
    return k.eval(cvec1(lambda), cvec1(cplx(1.0)));
}

}  // namespace bgeo
