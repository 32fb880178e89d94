#pragma once

#include <optional>

#include "bgeo/automorphism.hpp"
#include "bgeo/connection.hpp"
#include "bgeo/kernel.hpp"
#include "bgeo/metric.hpp"

namespace bgeo {

enum class RepMode { Raw, Normalized };

// Basepoint data of the representative chart at p.  Raw mode multiplies the
// polarized gradient bracket by G(p)^{-T} (unit Jacobian at p); normalized
// mode by A^{-T} from the Cholesky factor G(p) = A A^H.
struct RepChart {
    KernelPtr kernel;
    CVec p, pbar;
    CVec bracket_p;     // d log K / dwbar at (p, pbar)
    CMat factor;        // G(p)^{-T} or A^{-T}
    CMat metric_p;      // G(p)
    RepMode mode = RepMode::Raw;
    double kernel_floor_abs = 0.0;
};

RepChart make_chart(KernelPtr kernel, const CVec& p, RepMode mode = RepMode::Raw);

// zeta(z); throws NearZeroKernelError for z near Z0 of the basepoint.
CVec rep_map(const RepChart& chart, const CVec& z);

// d zeta / dz at z, assembled from the polarized metric: the chart factor
// times G(z, pbar)^T.
CMat rep_jacobian(const RepChart& chart, const CVec& z);

struct ExphOptions {
    double newton_tol = 1e-12;
    int max_iter = 50;
    int max_backtrack = 10;
    OdeOptions ode;
};

struct ExphResult {
    CVec z;
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
};

enum class ExphMethod { Newton, Ode };

// Inverts the chart: solves rep(z) = zeta by damped Newton, or integrates
// the geodesic of the frozen connection from p with matching initial
// velocity to t = 1.
ExphResult exph(const RepChart& chart, const CVec& zeta, ExphMethod method,
                const ExphOptions& opts = {});

enum class OffDiagSqrt { RawInverse, PrincipalSqrt };

// Affine chart of the p-connection centered at q: multiplies the bracket
// difference by G(q,pbar)^{-T}, or by the inverse transpose of the principal
// matrix square root of G(q,pbar) when requested.  q = p reduces to rep_map.
CVec exph_q_inverse(const Kernel& kernel, const CVec& p, const CVec& q, const CVec& z,
                    OffDiagSqrt mode = OffDiagSqrt::RawInverse);

struct LinearityReport {
    double linear_residual = 0.0;      // max |eta - L zeta| over samples
    double conjugate_residual = 0.0;   // same for the best conjugate-linear fit
    CMat fitted;                       // the fitted linear map
    int samples_used = 0;
};

// Samples the composition rep_{f(p)} o f o rep_p^{-1} near 0 and fits the
// best complex-linear and conjugate-linear maps.
LinearityReport verify_linearity(KernelPtr kernel, const Automorphism& f, const CVec& p,
                                 int samples, std::mt19937_64& rng);

struct NormalCoordReport {
    double res_identity = 0.0;   // |pullback metric at 0 - I|
    double res_first = 0.0;      // first derivatives of the pullback at 0
    double res_second_pure = 0.0;  // pure holomorphic second derivatives
    std::vector<double> mixed;   // d^2 g_rr / dzeta_r dzetabar_r (curvature term)
};

// Pulls the diagonal metric back through the normalized chart and measures
// the normal-coordinate properties at the center by root-of-unity filters
// of step fd_step.
NormalCoordReport verify_normal_coordinates(KernelPtr kernel, const CVec& p,
                                            double fd_step = 1e-3);

}  // namespace bgeo
