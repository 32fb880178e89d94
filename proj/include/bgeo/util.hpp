#pragma once

#include <complex>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bgeo {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;

inline CVec cvec1(cplx z) {
    CVec v(1);
    v(0) = z;
    return v;
}

inline CVec conj_vec(const CVec& v) { return v.conjugate(); }

// Complex literal grammar: "a", "bi", "a+bi", "a-bi" with decimal literals,
// no interior whitespace.  Throws Error on malformed input.
cplx parse_complex(const std::string& s);

// Comma-separated list of complex literals.
CVec parse_complex_vector(const std::string& s);

// Shortest round-trippable decimal form (17 significant digits).
std::string format_double(double x);
std::string format_complex(cplx z);

// Uniform point in the open disk of given radius (rejection-free, sqrt law).
cplx random_in_disk(std::mt19937_64& rng, double radius = 1.0);

// Uniform in the annulus radius_lo < |z| < radius_hi (area measure).
cplx random_in_annulus(std::mt19937_64& rng, double radius_lo, double radius_hi);

// Thread count honoring the BGEO_THREADS environment variable.
unsigned effective_threads();

// Index-parallel loop; results must be written to preallocated per-index
// slots so the outcome is deterministic regardless of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace bgeo
