#pragma once

#include "bgeo/kernel.hpp"

namespace bgeo {

// Polarized metric g_{j kbar}(z, wbar) = d^2 log K / dz_j dwbar_k.
struct MetricTensor {
    CMat g;
    cplx det_g{};
};

// Gamma^j_{kl}(z, wbar) of the connection one-form dG * G^{-1}; gamma[j](k,l),
// symmetric in (k,l).
struct ChristoffelTensor {
    std::vector<CMat> gamma;
};

// Cholesky normalization of the diagonal metric: G(p) = A A^H with A lower
// triangular, positive diagonal; sqrt_g_inv = A^{-1}.
struct NormalizationMatrix {
    CMat a;
    CMat sqrt_g_inv;
};

MetricTensor metric_at(const Kernel& k, const CVec& z, const CVec& wbar);

// Diagonal metric (wbar = conj z); Hermitian positive-definite inside the
// domain.
MetricTensor metric_diag(const Kernel& k, const CVec& z);

ChristoffelTensor christoffel_at(const Kernel& k, const CVec& z, const CVec& wbar);

// Finite-difference estimate of the curvature two-form of the connection
// frozen at wbar = conj p: max-norm of d omega - omega ^ omega over the
// coordinate two-planes.  Identically zero in exact arithmetic; the returned
// discretization residual decays at second order in probe_scale.
double curvature_residual(const Kernel& k, const CVec& p, const CVec& z, double probe_scale);

NormalizationMatrix normalization_at(const Kernel& k, const CVec& p);

// Throws SingularMetricError below the relative determinant threshold.
void check_invertible(const MetricTensor& m, int n);

}  // namespace bgeo
