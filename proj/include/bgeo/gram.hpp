#pragma once

#include "bgeo/domain.hpp"
#include "bgeo/util.hpp"

namespace bgeo {

// Truncated reproducing kernel of orthonormalized monomials: the Gram matrix
// of the basis under the L^2 inner product is assembled by tensor quadrature
// (Gauss-Legendre radially, trapezoid in angle) and Cholesky-factored; the
// kernel is evaluated through triangular solves.
//
// Supported domains: disk (powers 0..cap), annulus (powers -cap..cap),
// polydisc (per-coordinate powers 0..cap).
class GramKernel {
public:
    GramKernel(Domain domain, int degree_cap, int quad_resolution);

    cplx eval(const CVec& z, const CVec& wbar) const;
    double diagonal(const CVec& z) const { return eval(z, z.conjugate()).real(); }

    const Domain& domain() const { return domain_; }
    int basis_size() const { return static_cast<int>(basis_.size()); }
    const std::vector<std::vector<int>>& basis() const { return basis_; }
    double condition_estimate() const { return condition_; }

private:
    CVec monomials(const CVec& z) const;

    Domain domain_;
    std::vector<std::vector<int>> basis_;  // multi-indices, one power per coordinate
    CMat chol_l_;                          // Gram = L L^H
    double condition_ = 1.0;
};

GramKernel build_gram_kernel(const Domain& domain, int degree_cap, int quad_resolution);

}  // namespace bgeo
