#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lipiso/funcspace.hpp"
#include "lipiso/operators.hpp"

namespace lipiso {

struct CheckResult {
    std::string name;
    bool passed = true;
    bool skipped = false;  // vacuous or precondition unmet
    std::string detail;
};

struct VerificationReport {
    enum class Status { Pass, Fail, NotSurjective, PropertyPFails };

    Status status = Status::Pass;
    std::size_t samples = 0;      // functions evaluated
    double max_deviation = 0.0;   // max |N(Tf) - N(f)| (norm-preservation suites only)
    std::optional<LipFunction> counterexample;
    std::string counterexample_source;
    std::vector<CheckResult> checks;

    bool passed() const { return status == Status::Pass; }
    const CheckResult* check(const std::string& name) const;
};

const char* to_string(VerificationReport::Status status);

struct VerifyOptions {
    std::size_t samples = 1000;
    std::uint64_t seed = 0x5eed;
    double tol = kOperatorTol;
    bool parallel = true;
};

/// Seeded random functions: coordinates uniform on [-1, 1], rescaled to unit ||.||_L.
std::vector<LipFunction> random_functions(const SpacePtr& space, const NormedSpaceSpec& e, std::size_t count,
                                          std::uint64_t seed);

/// ||Tf||_L = ||f||_L on the indicator basis, the probe library and random samples; bijectivity by rank.
VerificationReport verify_isometry(const LipOperator& t, const VerifyOptions& options = {});

/// ||Tf||_inf = ||f||_inf on the same families; reports PropertyPFails when A(T) is nonempty.
VerificationReport verify_sup_isometry(const LipOperator& t, const VerifyOptions& options = {});

/// Disjoint cozero sets stay disjoint under T and T^-1. Requires Property P.
VerificationReport verify_biseparating(const LipOperator& t, const VerifyOptions& options = {});

/// Structural properties of isometries: A/B distances, restriction, constancy,
/// component bijection, J-constancy, phi distance laws, two-term formula, sign law.
VerificationReport verify_structure(const LipOperator& t, const VerifyOptions& options = {});

}  // namespace lipiso
