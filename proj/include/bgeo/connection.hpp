#pragma once

#include <optional>

#include "bgeo/automorphism.hpp"
#include "bgeo/kernel.hpp"
#include "bgeo/metric.hpp"

namespace bgeo {

enum class Terminal { Completed, HitVariety, LeftDomain, StepUnderflow };

struct GeodesicSample {
    double t;
    CVec z, v;
};

struct GeodesicTrace {
    std::vector<GeodesicSample> samples;
    Terminal terminal = Terminal::Completed;
    double t_end = 0.0;

    const GeodesicSample& back() const { return samples.back(); }
};

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-10;
    double variety_tol = 1e-8;   // event threshold on min(|K|/Ks, |det G|/Gs)
    double h_min = 1e-14;
    int max_steps = 200000;
};

// Integrates d^2 z/dt^2 + Gamma(z, conj p) (dz/dt, dz/dt) = 0 from (q0, v0)
// by embedded Dormand-Prince 5(4) with event monitors on the kernel and
// metric determinant scales of the basepoint.
GeodesicTrace integrate_geodesic(const Kernel& kernel, const CVec& p, const CVec& q0,
                                 const CVec& v0, double t_max, const OdeOptions& opts = {});

// Cubic Hermite interpolation of a trace at parameter t.
GeodesicSample interpolate(const GeodesicTrace& trace, double t);

// Maps the line zeta0 + s*dir, s in [0,1], through the chart inverse at p
// and compares with re-integration of the resulting curve from its own
// initial data; returns the max position gap over the samples.
double verify_straight_lines(KernelPtr kernel, const CVec& p, const CVec& zeta0,
                             const CVec& dir, int samples, const OdeOptions& opts = {});

// Max residual of the pushed geodesic f(z(t)) in the geodesic equation of
// the connection based at f(p); one-dimensional automorphisms.
double verify_naturality(KernelPtr kernel, const Automorphism& f, const CVec& p,
                         const CVec& q0, const CVec& v0, double t_max,
                         const OdeOptions& opts = {});

// Euclidean norm of the difference of unnormalized gradient brackets at p.
double intrinsic_delta(const Kernel& kernel, const CVec& p, const CVec& x, const CVec& y);

struct DistanceOptions {
    double chart_radius = 0.2;   // edges connect nodes within this distance
    double variety_tol = 1e-6;   // node filter on min(|K|/Ks, |det G|/Gs)
};

struct DistanceResult {
    double d = 0.0;
    bool reachable = false;
    int nodes = 0;
    long edges = 0;
};

// Upper bound for the broken-path infimum by Dijkstra on a nested grid
// graph; refining the resolution can only lower the bound.  One-dimensional
// domains.
DistanceResult intrinsic_distance(const Kernel& kernel, const CVec& p, const CVec& x,
                                  const CVec& y, int resolution,
                                  const DistanceOptions& opts = {});

}  // namespace bgeo
