#include "bgeo/metric.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "bgeo/error.hpp"

namespace bgeo {

void check_invertible(const MetricTensor& m, int n) {
    double scale = m.g.cwiseAbs().maxCoeff();
    if (scale <= 0.0 || std::abs(m.det_g) < 1e-12 * std::pow(scale, n)) {
        throw SingularMetricError("polarized metric numerically singular (point near Z1)");
    }
}

namespace {

// |det G| of the diagonal metric at w = conj(wbar): the external scale that
// makes the near-Z1 determinant threshold meaningful even for n = 1.
double diag_det_scale(const Kernel& k, const CVec& wbar) {
    LogDerivatives ld = log_derivatives(k.jet(wbar.conjugate(), wbar), 0.0);
    return std::abs(Eigen::PartialPivLU<CMat>(ld.metric).determinant());
}

}  // namespace

MetricTensor metric_at(const Kernel& k, const CVec& z, const CVec& wbar) {
    double floor_abs = k.options().kernel_floor * kernel_scale(k, wbar);
    LogDerivatives ld = log_derivatives(k.jet(z, wbar), floor_abs);
    MetricTensor m;
    m.g = std::move(ld.metric);
    m.det_g = Eigen::PartialPivLU<CMat>(m.g).determinant();
    return m;
}

MetricTensor metric_diag(const Kernel& k, const CVec& z) {
    return metric_at(k, z, z.conjugate());
}

ChristoffelTensor christoffel_at(const Kernel& k, const CVec& z, const CVec& wbar) {
    const int n = k.dim();
    double floor_abs = k.options().kernel_floor * kernel_scale(k, wbar);
    LogDerivatives ld = log_derivatives(k.jet(z, wbar), floor_abs);
    cplx det = Eigen::PartialPivLU<CMat>(ld.metric).determinant();
    if (std::abs(det) < 1e-12 * diag_det_scale(k, wbar)) {
        throw SingularMetricError("polarized metric numerically singular (point near Z1)");
    }
    MetricTensor probe{ld.metric, det};
    check_invertible(probe, n);
    CMat g_inv = Eigen::PartialPivLU<CMat>(ld.metric).inverse();
    ChristoffelTensor c;
    c.gamma.assign(n, CMat::Zero(n, n));
    for (int l = 0; l < n; ++l) {
        // (dG/dz_l) G^{-1}: entry (k,j) is Gamma^j_{kl}
        CMat gl = ld.dz_metric[l] * g_inv;
        for (int j = 0; j < n; ++j) {
            for (int kk = 0; kk < n; ++kk) {
                c.gamma[j](kk, l) = gl(kk, j);
            }
        }
    }
    return c;
}

double curvature_residual(const Kernel& k, const CVec& p, const CVec& z, double probe_scale) {
    const int n = k.dim();
    if (n == 1) {
        // no coordinate two-planes: the curvature form of a holomorphic
        // connection in one variable vanishes identically
        return 0.0;
    }
    const CVec pbar = p.conjugate();
    auto connection_matrix = [&](const CVec& at, int l) -> CMat {
        ChristoffelTensor c = christoffel_at(k, at, pbar);
        CMat m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = c.gamma[j](i, l);
        return m;  // m(i,j) = Gamma^j_{il}: the matrix C_l with omega = C_l dz_l
    };
    double worst = 0.0;
    const double h = probe_scale;
    auto shift = [&](int idx, double delta) {
        CVec out = z;
        out(idx) += delta;
        return out;
    };
    for (int l = 0; l < n; ++l) {
        for (int m = l + 1; m < n; ++m) {
            // d_l C_m and d_m C_l by central differences in the z plane
            CMat dl_cm = (connection_matrix(shift(l, h), m) -
                          connection_matrix(shift(l, -h), m)) /
                         (2.0 * h);
            CMat dm_cl = (connection_matrix(shift(m, h), l) -
                          connection_matrix(shift(m, -h), l)) /
                         (2.0 * h);
            CMat cl = connection_matrix(z, l);
            CMat cm = connection_matrix(z, m);
            CMat curv = dl_cm - dm_cl - (cl * cm - cm * cl);
            worst = std::max(worst, curv.cwiseAbs().maxCoeff());
        }
    }
    return worst;
}

NormalizationMatrix normalization_at(const Kernel& k, const CVec& p) {
    MetricTensor m = metric_diag(k, p);
    Eigen::LLT<CMat> llt(m.g);
    if (llt.info() != Eigen::Success) {
        throw Error("diagonal metric not numerically positive-definite at basepoint");
    }
    NormalizationMatrix out;
    out.a = llt.matrixL();
    out.sqrt_g_inv =
        out.a.triangularView<Eigen::Lower>().solve(CMat::Identity(k.dim(), k.dim()));
    return out;
}

}  // namespace bgeo
