#pragma once

#include <memory>
#include <vector>

#include "bgeo/automorphism.hpp"
#include "bgeo/domain.hpp"
#include "bgeo/util.hpp"

namespace bgeo {

// Kernel value with polarized partial derivatives up to second order in z
// and first order in wbar: everything the metric and Christoffel symbols
// consume.  Conventions: dz(j) = dK/dz_j, dwbar(k) = dK/dwbar_k,
// dzdz(j,l), dzdwbar(j,k), d3[k](j,l) = d^3 K / dz_j dz_l dwbar_k.
struct Jet {
    cplx k{};
    CVec dz, dwbar;
    CMat dzdz, dzdwbar;
    std::vector<CMat> d3;
};

// Derivatives of log K assembled branch-free from a Jet: dK/K for the
// gradient, (K d2K - dK dK)/K^2 for the polarized metric, and the z
// derivative of the latter for the connection.
struct LogDerivatives {
    CVec grad_wbar;            // d log K / dwbar_k
    CMat metric;               // g_{j kbar}(z, wbar), row j col k
    std::vector<CMat> dz_metric;  // dz_metric[l](j,k) = d g_{j kbar} / dz_l
};

enum class DerivMode { ClosedForm, FiniteDifference };
enum class AnnulusEval { Weierstrass, Laurent };

struct KernelOptions {
    DerivMode mode = DerivMode::ClosedForm;
    AnnulusEval annulus_mode = AnnulusEval::Weierstrass;
    double fd_step = 1e-5;
    double kernel_floor = 1e-12;  // relative to the basepoint diagonal scale
    double pole_guard = 1e-8;     // forwarded to the annulus lattice
};

class Kernel {
public:
    explicit Kernel(Domain domain, KernelOptions opts)
        : domain_(std::move(domain)), opts_(opts) {}
    virtual ~Kernel() = default;

    const Domain& domain() const { return domain_; }
    int dim() const { return domain_.n; }
    const KernelOptions& options() const { return opts_; }

    // Polarized kernel K(z, wbar); throws MembershipError on dimension
    // mismatch or (annulus) polarized argument outside r^2 < |z wbar| < 1.
    virtual cplx eval(const CVec& z, const CVec& wbar) const = 0;
    virtual Jet jet(const CVec& z, const CVec& wbar) const = 0;

    // K on the diagonal (wbar = conj z); real positive inside the domain.
    double diagonal(const CVec& z) const;

protected:
    void check_dims(const CVec& z, const CVec& wbar) const;

private:
    Domain domain_;
    KernelOptions opts_;
};

using KernelPtr = std::shared_ptr<const Kernel>;

KernelPtr make_kernel(const Domain& domain, const KernelOptions& opts = {});

// Gradient/metric/third-order data of log K; floor_abs is the absolute
// near-zero threshold for |K| (NearZeroKernelError below it).
LogDerivatives log_derivatives(const Jet& jet, double floor_abs);

// Scale |K(w, wbar)| with w = conj(wbar), used to make kernel_floor and
// variety thresholds relative.
double kernel_scale(const Kernel& k, const CVec& wbar);

// The two log-K oracles of the model interface: gradient in wbar and the
// polarized metric matrix, with the kernel floor taken relative to the
// diagonal scale at wbar.
std::pair<CVec, CMat> kernel_derivatives(const Kernel& k, const CVec& z, const CVec& wbar);

// Relative residual of the kernel transformation rule
// K_src(z,wbar) = K_dst(f(z), fbar(wbar)) * f'(z) * conj(f'(w))
// for one-dimensional src/dst models.
double transformation_check(const Automorphism& f, const Kernel& src, const Kernel& dst,
                            cplx z, cplx wbar);

// Annulus-only helpers: both closed forms of the kernel, for cross-checks.
cplx annulus_kernel_weierstrass(double r, cplx lambda);
cplx annulus_kernel_laurent(double r, cplx lambda);

}  // namespace bgeo
