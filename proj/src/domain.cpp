#include "bgeo/domain.hpp"

#include <nlohmann/json.hpp>

#include "bgeo/error.hpp"

namespace bgeo {

using nlohmann::json;

Domain Domain::disk() {
    Domain d;
    d.kind = DomainKind::Disk;
    d.n = 1;
    return d;
}

Domain Domain::ball(int n) {
    if (n < 1) throw std::invalid_argument("ball dimension must be >= 1");
    Domain d;
    d.kind = DomainKind::Ball;
    d.n = n;
    return d;
}

Domain Domain::polydisc(int n) {
    if (n < 1) throw std::invalid_argument("polydisc dimension must be >= 1");
    Domain d;
    d.kind = DomainKind::Polydisc;
    d.n = n;
    return d;
}

Domain Domain::annulus(double r) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("annulus requires 0 < r < 1");
    Domain d;
    d.kind = DomainKind::Annulus;
    d.n = 1;
    d.r = r;
    return d;
}

Domain Domain::product(std::vector<Domain> factors) {
    if (factors.empty()) throw std::invalid_argument("product needs at least one factor");
    Domain d;
    d.kind = DomainKind::Product;
    d.factors = std::move(factors);
    d.n = 0;
    for (const auto& f : d.factors) d.n += f.n;
    return d;
}

bool Domain::contains(const CVec& z) const {
    if (z.size() != n) return false;
    switch (kind) {
        case DomainKind::Disk:
            return std::abs(z(0)) < 1.0;
        case DomainKind::Ball:
            return z.norm() < 1.0;
        case DomainKind::Polydisc:
            for (Eigen::Index i = 0; i < z.size(); ++i)
                if (std::abs(z(i)) >= 1.0) return false;
            return true;
        case DomainKind::Annulus: {
            double a = std::abs(z(0));
            return a > r && a < 1.0;
        }
        case DomainKind::Product: {
            Eigen::Index off = 0;
            for (const auto& f : factors) {
                if (!f.contains(z.segment(off, f.n))) return false;
                off += f.n;
            }
            return true;
        }
    }
    return false;
}

CVec Domain::sample_point() const {
    CVec p(n);
    switch (kind) {
        case DomainKind::Disk:
            p(0) = cplx(0.3, 0.1);
            break;
        case DomainKind::Ball:
        case DomainKind::Polydisc:
            for (int i = 0; i < n; ++i) {
                p(i) = cplx(0.25 / std::sqrt(double(n)), 0.1 * (i + 1) / n);
            }
            break;
        case DomainKind::Annulus:
            p(0) = cplx(0.5 * (1.0 + r), 0.0);
            break;
        case DomainKind::Product: {
            Eigen::Index off = 0;
            for (const auto& f : factors) {
                p.segment(off, f.n) = f.sample_point();
                off += f.n;
            }
            break;
        }
    }
    return p;
}

CVec Domain::random_point(std::mt19937_64& rng, double margin) const {
    CVec p(n);
    switch (kind) {
        case DomainKind::Disk:
            p(0) = random_in_disk(rng, 1.0 - margin);
            break;
        case DomainKind::Ball: {
            // rejection from the polydisc keeps the distribution simple
            while (true) {
                for (int i = 0; i < n; ++i) p(i) = random_in_disk(rng, 1.0);
                if (p.norm() < 1.0 - margin) break;
            }
            break;
        }
        case DomainKind::Polydisc:
            for (int i = 0; i < n; ++i) p(i) = random_in_disk(rng, 1.0 - margin);
            break;
        case DomainKind::Annulus: {
            double gap = (1.0 - r) * margin;
            p(0) = random_in_annulus(rng, r + gap, 1.0 - gap);
            break;
        }
        case DomainKind::Product: {
            Eigen::Index off = 0;
            for (const auto& f : factors) {
                p.segment(off, f.n) = f.random_point(rng, margin);
                off += f.n;
            }
            break;
        }
    }
    return p;
}

std::string Domain::describe() const {
    switch (kind) {
        case DomainKind::Disk:
            return "disk";
        case DomainKind::Ball:
            return "ball(" + std::to_string(n) + ")";
        case DomainKind::Polydisc:
            return "polydisc(" + std::to_string(n) + ")";
        case DomainKind::Annulus:
            return "annulus(r=" + std::to_string(r) + ")";
        case DomainKind::Product: {
            std::string s = "product(";
            for (std::size_t i = 0; i < factors.size(); ++i) {
                if (i) s += " x ";
                s += factors[i].describe();
            }
            return s + ")";
        }
    }
    return "?";
}

json Domain::to_json() const {
    json j;
    switch (kind) {
        case DomainKind::Disk:
            j["type"] = "disk";
            break;
        case DomainKind::Ball:
            j["type"] = "ball";
            j["n"] = n;
            break;
        case DomainKind::Polydisc:
            j["type"] = "polydisc";
            j["n"] = n;
            break;
        case DomainKind::Annulus:
            j["type"] = "annulus";
            j["r"] = r;
            break;
        case DomainKind::Product: {
            j["type"] = "product";
            j["factors"] = json::array();
            for (const auto& f : factors) j["factors"].push_back(f.to_json());
            break;
        }
    }
    return j;
}

Domain Domain::from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "disk") return disk();
    if (type == "ball") return ball(j.at("n").get<int>());
    if (type == "polydisc") return polydisc(j.at("n").get<int>());
    if (type == "annulus") return annulus(j.at("r").get<double>());
    if (type == "product") {
        std::vector<Domain> fs;
        for (const auto& fj : j.at("factors")) fs.push_back(from_json(fj));
        return product(std::move(fs));
    }
    throw Error("unknown domain type: " + type);
}

Domain Domain::parse(const std::string& text) {
    json j = json::parse(text);
    return from_json(j);
}

}  // namespace bgeo
