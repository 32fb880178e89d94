#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bgeo/util.hpp"

namespace bgeo {

enum class DomainKind { Disk, Ball, Polydisc, Annulus, Product };

// Descriptor of a catalog domain.  JSON forms:
//   {"type":"disk"}  {"type":"ball","n":2}  {"type":"polydisc","n":2}
//   {"type":"annulus","r":0.1}  {"type":"product","factors":[...]}
struct Domain {
    DomainKind kind = DomainKind::Disk;
    int n = 1;                    // complex dimension
    double r = 0.0;               // annulus inner radius
    std::vector<Domain> factors;  // product factors

    static Domain disk();
    static Domain ball(int n);
    static Domain polydisc(int n);
    static Domain annulus(double r);
    static Domain product(std::vector<Domain> factors);

    int dim() const { return n; }
    bool contains(const CVec& z) const;

    // Interior point offset from obvious symmetry centers, used by
    // sampling code as a default basepoint.
    CVec sample_point() const;

    // Uniform-ish random interior point with a relative margin from the
    // boundary (and from the inner circle for annuli).
    CVec random_point(std::mt19937_64& rng, double margin = 0.05) const;

    std::string describe() const;

    nlohmann::json to_json() const;
    static Domain from_json(const nlohmann::json& j);
    static Domain parse(const std::string& text);
};

}  // namespace bgeo
