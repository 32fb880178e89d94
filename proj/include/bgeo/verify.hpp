#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bgeo/domain.hpp"

namespace bgeo {

struct CheckResult {
    std::string name;
    double value = 0.0;      // measured residual (or witness count, etc.)
    double threshold = 0.0;  // pinned acceptance threshold
    bool passed = false;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<CheckResult> checks;

    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

struct VerifyOptions {
    std::uint64_t seed = 7;
    double annulus_r = 0.3;  // r override for the annulus-specific suites
};

// Suite names: rep-forms, flatness, straightening, linearity, annulus-kernel,
// annulus-roots, zhat, divergence, gram, normal-coords, affine, product-gap,
// naturality, straight-lines, distance, elliptic, pole-probe, all.
std::vector<std::string> suite_names();

SuiteReport run_suite(const std::string& name, const VerifyOptions& opts);

// Every suite in order; used by `verify --suite all` and the acceptance gate.
std::vector<SuiteReport> run_all_suites(const VerifyOptions& opts);

// Catalog exercised by the cross-domain suites.
std::vector<Domain> catalog_domains(double annulus_r);

}  // namespace bgeo
