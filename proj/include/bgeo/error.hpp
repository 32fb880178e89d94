#pragma once

#include <stdexcept>
#include <string>

namespace bgeo {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument closer to a lattice point than the pole guard.
struct PoleProximityError : Error {
    using Error::Error;
};

// |K(z, wbar)| below the kernel floor; log-derivatives undefined (point near Z0).
struct NearZeroKernelError : Error {
    using Error::Error;
};

// |det G(z, wbar)| below threshold; inverse metric undefined (point near Z1).
struct SingularMetricError : Error {
    using Error::Error;
};

// Point outside the domain, or polarized argument outside its admissible set.
struct MembershipError : Error {
    using Error::Error;
};

struct IllConditionedGramError : Error {
    IllConditionedGramError(const std::string& msg, double cond)
        : Error(msg), condition(cond) {}
    double condition;
};

struct SeriesCapError : Error {
    using Error::Error;
};

}  // namespace bgeo
