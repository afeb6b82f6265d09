#pragma once

#include "fcs/oracle.hpp"
#include "fcs/simulator.hpp"

#include <random>
#include <string>
#include <vector>

namespace fcs {

struct VerifyOptions {
    std::uint64_t seed = 1;
    bool perturb_hessian = false;  // test hook: corrupt H before the residual check
};

struct SuiteResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyReport {
    std::uint64_t seed = 0;
    std::vector<SuiteResult> suites;

    bool all_passed() const {
        for (const auto& s : suites)
            if (!s.passed) return false;
        return true;
    }
    std::string text() const;
};

/// Seeded property suites: decoder-vs-oracle equivalence, admissibility of
/// the future-cost bound, generator factorization residuals, and the
/// estimator DC gain. Deterministic for a fixed seed.
VerifyReport run_verification(const RunParams& rp, const VerifyOptions& opt);

/// Random decision instances drawn at physically plausible scales.
FtInstance random_ft_instance(std::mt19937_64& rng, const RunParams& rp, int N_p);
FlInstance random_fl_instance(std::mt19937_64& rng, const RunParams& rp, int N_p);

}  // namespace fcs
