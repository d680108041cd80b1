#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rabinovich::cli {

enum class CheckStatus { Pass, Fail, DiscrepancyDocumented };

const char* to_string(CheckStatus s);

struct CheckResult {
    std::string id;
    CheckStatus status = CheckStatus::Fail;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string reference;  // what is being checked against
    std::string detail;
};

struct VerificationReport {
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<CheckResult> checks;

    /// True when no check failed; documented discrepancies do not count.
    bool ok() const;
    std::size_t count(CheckStatus s) const;
    std::string text() const;
    std::string json() const;
};

const std::vector<std::string>& suite_names();

/// Runs one suite ("all" runs every suite in order). Deterministic given
/// the seed. Throws DomainError for an unknown suite.
VerificationReport run_verify(const std::string& suite, std::uint64_t seed);

}  // namespace rabinovich::cli
