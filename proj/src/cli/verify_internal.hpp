#pragma once

#include <random>

#include "rabinovich/cli/verify.hpp"
#include "rabinovich/state.hpp"

namespace rabinovich::cli::detail {

class Recorder {
public:
    explicit Recorder(std::vector<CheckResult>& out) : out_(out) {}

    /// Pass when measured <= tol.
    void bound(const std::string& id, double measured, double tol, const std::string& ref,
               const std::string& detail = "");
    /// Caller-decided pass/fail with the measured value for the record.
    void verdict(const std::string& id, bool passed, double measured, double tol, const std::string& ref,
                 const std::string& detail = "");
    /// A printed claim that disagrees with the computation. Recorded as a
    /// documented discrepancy when the gap exceeds `detect`; a vanished gap
    /// is a failure because the ledger would then be stale.
    void discrepancy(const std::string& id, double gap, double detect, const std::string& ref,
                     const std::string& detail);

private:
    std::vector<CheckResult>& out_;
};

/// Per-suite generator so a suite gives the same values alone or inside "all".
std::mt19937_64 suite_rng(std::uint64_t seed, const char* suite);

double uniform(std::mt19937_64& rng, double lo, double hi);
StateVec uniform_point(std::mt19937_64& rng, double lo, double hi);

std::string sci(double x);

void verify_core(Recorder& r, std::uint64_t seed);
void verify_poisson(Recorder& r, std::uint64_t seed);
void verify_metriplectic(Recorder& r, std::uint64_t seed);
void verify_delay(Recorder& r, std::uint64_t seed);
void verify_fractional(Recorder& r, std::uint64_t seed);
void verify_stability(Recorder& r, std::uint64_t seed);

}  // namespace rabinovich::cli::detail
